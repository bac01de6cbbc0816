#include "navier/grid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "navier/error.hpp"

namespace navier {

Grid::Grid(int nx, int ny, Rect rect) : nx_(nx), ny_(ny), rect_(rect) {
    if (nx < 3 || ny < 3) {
        throw InvalidArgument("grid needs at least 3 nodes per axis, got " + std::to_string(nx) +
                              "x" + std::to_string(ny));
    }
    if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) {
        throw InvalidArgument("degenerate rectangle");
    }
    hx_ = (rect.x1 - rect.x0) / (nx - 1);
    hy_ = (rect.y1 - rect.y0) / (ny - 1);
}

bool Grid::on_boundary(int k) const noexcept {
    const int i = i_of(k);
    const int j = j_of(k);
    return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
}

Grid build_grid(int nx, int ny, Rect rect) { return Grid(nx, ny, rect); }

DomainMask::DomainMask(Grid grid, std::vector<NodeStatus> status)
    : grid_(grid), status_(std::move(status)) {
    if (static_cast<int>(status_.size()) != grid_.size()) {
        throw InvalidArgument("mask size does not match grid");
    }
    for (int k = 0; k < grid_.size(); ++k) {
        if (grid_.on_boundary(k)) status_[k] = NodeStatus::Pinned;
        if (status_[k] == NodeStatus::Free) ++free_count_;
    }
    if (free_count_ == 0) throw InvalidArgument("empty domain: no free nodes");
}

DomainMask DomainMask::full(const Grid& grid) {
    return DomainMask(grid, std::vector<NodeStatus>(grid.size(), NodeStatus::Free));
}

bool DomainMask::is_subset_of(const DomainMask& other) const {
    if (!(grid_ == other.grid_)) return false;
    for (int k = 0; k < grid_.size(); ++k) {
        if (is_free(k) && !other.is_free(k)) return false;
    }
    return true;
}

MaskPtr full_mask(const Grid& grid) { return std::make_shared<const DomainMask>(DomainMask::full(grid)); }

// ---------------------------------------------------------------------------
// Shape

Shape Shape::full() { return Shape{}; }

Shape Shape::rectangle(Rect r) {
    Shape s;
    s.kind_ = Kind::Rectangle;
    s.params_ = {r.x0, r.y0, r.x1, r.y1};
    return s;
}

Shape Shape::disc(double cx, double cy, double r) {
    if (r < 0) throw InvalidArgument("disc radius must be nonnegative");
    Shape s;
    s.kind_ = Kind::Disc;
    s.params_ = {cx, cy, r};
    return s;
}

Shape Shape::lshape() {
    Shape s;
    s.kind_ = Kind::LShape;
    return s;
}

Shape Shape::holes(int n, double r) {
    if (n < 1) throw InvalidArgument("hole array needs n >= 1");
    if (r < 0) throw InvalidArgument("hole radius must be nonnegative");
    Shape s;
    s.kind_ = Kind::Holes;
    s.params_ = {static_cast<double>(n), r};
    return s;
}

Shape Shape::pin_list(std::vector<int> nodes) {
    Shape s;
    s.kind_ = Kind::PinList;
    std::sort(nodes.begin(), nodes.end());
    s.nodes_ = std::move(nodes);
    return s;
}

Shape Shape::unite(Shape a, Shape b) {
    Shape s;
    s.kind_ = Kind::Union;
    s.children_ = {std::move(a), std::move(b)};
    return s;
}

Shape Shape::minus(Shape a, Shape b) {
    Shape s;
    s.kind_ = Kind::Difference;
    s.children_ = {std::move(a), std::move(b)};
    return s;
}

namespace {

bool inside_holes(const Grid& g, double x, double y, int n, double r) {
    const Rect& R = g.rect();
    const double cw = (R.x1 - R.x0) / n;
    const double ch = (R.y1 - R.y0) / n;
    // only the nearest cell center can contain the point when r < cell/2,
    // but check the 3x3 neighbourhood so larger radii still behave.
    const int ci = std::clamp(static_cast<int>(std::floor((x - R.x0) / cw)), 0, n - 1);
    const int cj = std::clamp(static_cast<int>(std::floor((y - R.y0) / ch)), 0, n - 1);
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            const int a = ci + di;
            const int b = cj + dj;
            if (a < 0 || b < 0 || a >= n || b >= n) continue;
            const double cx = R.x0 + (a + 0.5) * cw;
            const double cy = R.y0 + (b + 0.5) * ch;
            if (std::hypot(x - cx, y - cy) <= r) return true;
        }
    }
    return false;
}

}  // namespace

bool Shape::contains(const Grid& g, int k) const {
    const double x = g.x_of(k);
    const double y = g.y_of(k);
    switch (kind_) {
        case Kind::Full:
            return true;
        case Kind::Rectangle:
            return x > params_[0] && y > params_[1] && x < params_[2] && y < params_[3];
        case Kind::Disc:
            return std::hypot(x - params_[0], y - params_[1]) < params_[2];
        case Kind::LShape: {
            const Rect& R = g.rect();
            const double xm = 0.5 * (R.x0 + R.x1);
            const double ym = 0.5 * (R.y0 + R.y1);
            return !(x >= xm && y >= ym);
        }
        case Kind::Holes:
            return !inside_holes(g, x, y, static_cast<int>(params_[0]), params_[1]);
        case Kind::PinList:
            return !std::binary_search(nodes_.begin(), nodes_.end(), k);
        case Kind::Union:
            return children_[0].contains(g, k) || children_[1].contains(g, k);
        case Kind::Difference:
            return children_[0].contains(g, k) && !children_[1].contains(g, k);
    }
    return false;
}

std::string Shape::describe() const {
    char buf[160];
    switch (kind_) {
        case Kind::Full:
            return "full";
        case Kind::Rectangle:
            std::snprintf(buf, sizeof buf, "rect(%g,%g,%g,%g)", params_[0], params_[1], params_[2],
                          params_[3]);
            return buf;
        case Kind::Disc:
            std::snprintf(buf, sizeof buf, "disc(%g,%g,%g)", params_[0], params_[1], params_[2]);
            return buf;
        case Kind::LShape:
            return "lshape";
        case Kind::Holes:
            std::snprintf(buf, sizeof buf, "holes(%d,%g)", static_cast<int>(params_[0]), params_[1]);
            return buf;
        case Kind::PinList: {
            std::string s = "pins(";
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                if (i) s += ';';
                s += std::to_string(nodes_[i]);
            }
            return s + ")";
        }
        case Kind::Union:
            return "(" + children_[0].describe() + "+" + children_[1].describe() + ")";
        case Kind::Difference:
            return "(" + children_[0].describe() + "-" + children_[1].describe() + ")";
    }
    return {};
}

// ---------------------------------------------------------------------------
// Shape grammar

namespace {

class ShapeParser {
public:
    explicit ShapeParser(std::string_view text) : s_(text) {}

    Shape parse() {
        Shape result = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return result;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw InvalidArgument("shape '" + std::string(s_) + "': " + msg + " at offset " +
                              std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    Shape expr() {
        Shape lhs = term();
        for (;;) {
            if (eat('+')) {
                lhs = Shape::unite(std::move(lhs), term());
            } else if (eat('-')) {
                lhs = Shape::minus(std::move(lhs), term());
            } else {
                return lhs;
            }
        }
    }

    std::string word() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    std::vector<double> numbers(char sep) {
        std::vector<double> out;
        expect('(');
        for (;;) {
            skip_ws();
            const std::size_t start = pos_;
            while (pos_ < s_.size() && s_[pos_] != sep && s_[pos_] != ')') ++pos_;
            std::string tok(s_.substr(start, pos_ - start));
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                fail("malformed number '" + tok + "'");
            }
            while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
            if (used != tok.size()) fail("malformed number '" + tok + "'");
            out.push_back(v);
            if (eat(')')) return out;
            expect(sep);
        }
    }

    Shape term() {
        if (eat('(')) {
            Shape inner = expr();
            expect(')');
            return inner;
        }
        const std::string name = word();
        if (name == "full") return Shape::full();
        if (name == "lshape") return Shape::lshape();
        if (name == "rect") {
            auto v = numbers(',');
            if (v.size() != 4) fail("rect takes 4 numbers");
            return Shape::rectangle({v[0], v[1], v[2], v[3]});
        }
        if (name == "disc") {
            auto v = numbers(',');
            if (v.size() != 3) fail("disc takes 3 numbers");
            return Shape::disc(v[0], v[1], v[2]);
        }
        if (name == "holes") {
            auto v = numbers(',');
            if (v.size() != 2 || v[0] < 1 || v[0] != std::floor(v[0])) fail("holes takes (n, r)");
            return Shape::holes(static_cast<int>(v[0]), v[1]);
        }
        if (name == "pins") {
            auto v = numbers(';');
            std::vector<int> nodes;
            for (double d : v) {
                if (d < 0 || d != std::floor(d)) fail("pins takes node indices");
                nodes.push_back(static_cast<int>(d));
            }
            return Shape::pin_list(std::move(nodes));
        }
        fail(name.empty() ? "expected a shape" : "unknown shape '" + name + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Shape parse_shape(std::string_view text) { return ShapeParser(text).parse(); }

MaskPtr mask_from_spec(const Grid& g, const Shape& spec) {
    std::vector<NodeStatus> status(g.size(), NodeStatus::Pinned);
    for (int k = 0; k < g.size(); ++k) {
        if (!g.on_boundary(k) && spec.contains(g, k)) status[k] = NodeStatus::Free;
    }
    return std::make_shared<const DomainMask>(g, std::move(status));
}

// ---------------------------------------------------------------------------
// Field

Field::Field(MaskPtr mask) : mask_(std::move(mask)) {
    if (!mask_) throw InvalidArgument("field needs a mask");
    values_.assign(mask_->grid().size(), 0.0);
}

Field::Field(MaskPtr mask, std::vector<double> values) : mask_(std::move(mask)), values_(std::move(values)) {
    if (!mask_) throw InvalidArgument("field needs a mask");
    if (static_cast<int>(values_.size()) != mask_->grid().size()) {
        throw InvalidArgument("field size does not match grid");
    }
    for (int k = 0; k < size(); ++k) {
        if (mask_->is_pinned(k)) values_[k] = 0.0;
    }
}

Field Field::sample(MaskPtr mask, const std::function<double(double, double)>& fn) {
    Field f(std::move(mask));
    const Grid& g = f.grid();
    for (int k = 0; k < g.size(); ++k) {
        if (f.mask_->is_free(k)) f.values_[k] = fn(g.x_of(k), g.y_of(k));
    }
    return f;
}

void Field::set(int k, double v) {
    if (mask_->is_pinned(k)) {
        if (v != 0.0) throw InvalidArgument("nonzero value on pinned node " + std::to_string(k));
        return;
    }
    values_[k] = v;
}

void Field::require_same_mask(const Field& other) const {
    if (mask_ != other.mask_ && !(*mask_ == *other.mask_)) {
        throw InvalidArgument("field arithmetic needs identical masks");
    }
}

Field& Field::operator+=(const Field& other) {
    require_same_mask(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_mask(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

Field& Field::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

Field extend_by_zero(const Field& u, MaskPtr larger) {
    if (!(u.grid() == larger->grid())) throw InvalidArgument("extend_by_zero: incompatible grids");
    if (!u.mask().is_subset_of(*larger)) {
        throw InvalidArgument("extend_by_zero: target mask pins a free node of the source");
    }
    std::vector<double> vals(u.values().begin(), u.values().end());
    return Field(std::move(larger), std::move(vals));
}

Field restrict_to(const Field& u, MaskPtr smaller) {
    if (!(u.grid() == smaller->grid())) throw InvalidArgument("restrict_to: incompatible grids");
    std::vector<double> vals(u.values().begin(), u.values().end());
    return Field(std::move(smaller), std::move(vals));
}

namespace {

void require_same_grid(const Field& u, const Field& v) {
    if (!(u.grid() == v.grid())) throw InvalidArgument("fields live on different grids");
}

}  // namespace

double l2_inner(const Field& u, const Field& v) {
    require_same_grid(u, v);
    double s = 0.0;
    const auto a = u.values();
    const auto b = v.values();
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s * u.grid().cell_area();
}

double l2_norm(const Field& u) { return std::sqrt(l2_inner(u, u)); }

double h1_seminorm(const Field& u) {
    const Grid& g = u.grid();
    double sx = 0.0;
    double sy = 0.0;
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double c = u[g.index(i, j)];
            if (i + 1 < g.nx()) {
                const double d = (u[g.index(i + 1, j)] - c) / g.hx();
                sx += d * d;
            }
            if (j + 1 < g.ny()) {
                const double d = (u[g.index(i, j + 1)] - c) / g.hy();
                sy += d * d;
            }
        }
    }
    return std::sqrt((sx + sy) * g.cell_area());
}

double max_abs(const Field& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::abs(v));
    return m;
}

double l2_distance(const Field& u, const Field& v) {
    require_same_grid(u, v);
    double s = 0.0;
    const auto a = u.values();
    const auto b = v.values();
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return std::sqrt(s * u.grid().cell_area());
}

Field random_field(MaskPtr mask, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Field f(std::move(mask));
    for (int k = 0; k < f.size(); ++k) {
        if (f.mask().is_free(k)) f.set(k, dist(rng));
    }
    return f;
}

}  // namespace navier
