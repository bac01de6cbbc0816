#include "navier/relaxed_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "navier/error.hpp"

namespace navier {

// ---------------------------------------------------------------------------
// MeasureWeights

namespace {

void check_weight(double m) {
    if (std::isnan(m) || m < 0.0) throw InvalidArgument("measure weights must be >= 0");
}

}  // namespace

MeasureWeights::MeasureWeights(Grid grid, std::vector<double> weights) : grid_(grid), w_(std::move(weights)) {
    if (static_cast<int>(w_.size()) != grid_.size()) throw InvalidArgument("weight count does not match grid");
    for (double m : w_) check_weight(m);
}

MeasureWeights MeasureWeights::constant(const Grid& grid, double m) {
    return MeasureWeights(grid, std::vector<double>(grid.size(), m));
}

MeasureWeights MeasureWeights::pinned_outside(const DomainMask& u) {
    std::vector<double> w(u.grid().size(), 0.0);
    for (int k = 0; k < u.grid().size(); ++k) {
        if (u.is_pinned(k)) w[k] = inf;
    }
    return MeasureWeights(u.grid(), std::move(w));
}

bool MeasureWeights::all_finite() const {
    return std::none_of(w_.begin(), w_.end(), [](double m) { return m == inf; });
}

void MeasureWeights::set(int k, double m) {
    check_weight(m);
    w_[k] = m;
}

// ---------------------------------------------------------------------------
// CSR

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = 0; i < rows; ++i) {
        double s = 0.0;
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) s += vals[p] * x[cols[p]];
        y[i] = s;
    }
}

double CsrMatrix::at(int i, int j) const {
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p) {
        if (cols[p] == j) return vals[p];
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Assembly

std::array<std::array<double, 4>, 4> q1_element_stiffness(const Quadratic2& a, double hx, double hy) {
    const double g0 = 0.5 - 0.5 / std::sqrt(3.0);
    const double g1 = 0.5 + 0.5 / std::sqrt(3.0);
    const double gauss[2] = {g0, g1};
    const double w = 0.25 * hx * hy;

    std::array<std::array<double, 4>, 4> ke{};
    for (double xi : gauss) {
        for (double eta : gauss) {
            double dx[4];
            double dy[4];
            for (int loc = 0; loc < 4; ++loc) {
                const int di = loc & 1;
                const int dj = loc >> 1;
                const double sx = di ? 1.0 : -1.0;
                const double sy = dj ? 1.0 : -1.0;
                const double px = di ? xi : 1.0 - xi;
                const double py = dj ? eta : 1.0 - eta;
                dx[loc] = sx / hx * py;
                dy[loc] = sy / hy * px;
            }
            for (int p = 0; p < 4; ++p) {
                for (int q = p; q < 4; ++q) {
                    ke[p][q] += w * (a.a11 * dx[p] * dx[q] + a.a12 * (dx[p] * dy[q] + dy[p] * dx[q]) +
                                     a.a22 * dy[p] * dy[q]);
                }
            }
        }
    }
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < p; ++q) ke[p][q] = ke[q][p];
    }
    return ke;
}

namespace {

// Global 9-point stencil, identical at every interior node for constant
// coefficients on a uniform grid. Offsets (di, dj) in {-1, 0, 1}^2.
using Stencil = std::array<std::array<double, 3>, 3>;

Stencil global_stencil(const Quadratic2& a, double hx, double hy) {
    const auto ke = q1_element_stiffness(a, hx, hy);
    Stencil st{};
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            // canonical half; the mirrored offset copies it so K is exactly symmetric
            const bool canonical = dj > 0 || (dj == 0 && di >= 0);
            if (!canonical) continue;
            double s = 0.0;
            // cells containing the node have it at local corner (ci, cj)
            for (int cj = 0; cj <= 1; ++cj) {
                for (int ci = 0; ci <= 1; ++ci) {
                    const int ni = ci + di;
                    const int nj = cj + dj;
                    if (ni < 0 || ni > 1 || nj < 0 || nj > 1) continue;
                    s += ke[ci + 2 * cj][ni + 2 * nj];
                }
            }
            st[dj + 1][di + 1] = s;
            st[-dj + 1][-di + 1] = s;
        }
    }
    return st;
}

}  // namespace

SpdSystem assemble(const Quadratic2& a, const MeasureWeights& m, MaskPtr mask, SolverOptions opts) {
    if (!mask) throw InvalidArgument("assemble: null mask");
    if (!(ellipticity_margin(a) > 0.0)) throw InvalidArgument("not elliptic: " + to_string(a));
    const Grid& g = mask->grid();
    if (!(m.grid() == g)) throw InvalidArgument("assemble: weights and mask live on different grids");

    SpdSystem s(a, m, mask, opts);
    s.unknown_of_.assign(g.size(), -1);
    for (int k = 0; k < g.size(); ++k) {
        if (mask->is_free(k) && !m.is_infinite(k)) {
            s.unknown_of_[k] = static_cast<int>(s.node_of_.size());
            s.node_of_.push_back(k);
        }
    }
    const int n = s.unknowns();
    if (n == 0) throw InvalidArgument("empty system: every node is eliminated");

    const Stencil st = global_stencil(a, g.hx(), g.hy());
    const double area = g.cell_area();

    CsrMatrix& K = s.k_;
    K.rows = n;
    K.row_ptr.assign(1, 0);
    K.cols.reserve(9 * static_cast<std::size_t>(n));
    K.vals.reserve(9 * static_cast<std::size_t>(n));
    s.inv_diag_.resize(n);
    for (int r = 0; r < n; ++r) {
        const int k = s.node_of_[r];
        const int i = g.i_of(k);
        const int j = g.j_of(k);
        // free nodes are interior, so all eight neighbours exist; rows come out column-sorted
        for (int dj = -1; dj <= 1; ++dj) {
            for (int di = -1; di <= 1; ++di) {
                const int c = s.unknown_of_[g.index(i + di, j + dj)];
                if (c < 0) continue;
                double v = st[dj + 1][di + 1];
                if (di == 0 && dj == 0) {
                    v += m[k] * area;
                    s.inv_diag_[r] = 1.0 / v;
                }
                if (v == 0.0 && c != r) continue;
                K.cols.push_back(c);
                K.vals.push_back(v);
            }
        }
        K.row_ptr.push_back(static_cast<int>(K.cols.size()));
    }
    return s;
}

// ---------------------------------------------------------------------------
// Solve / apply

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void require_grid(const SpdSystem& s, const Field& f) {
    if (!(f.grid() == s.grid())) throw InvalidArgument("field and system live on different grids");
}

}  // namespace

SolveReport solve_report(const SpdSystem& s, const Field& f) {
    require_grid(s, f);
    const int n = s.unknowns();
    const double area = s.grid().cell_area();
    const auto& K = s.matrix();
    const auto inv_d = s.inverse_diagonal();

    std::vector<double> b(n);
    for (int r = 0; r < n; ++r) b[r] = f[s.node_of(r)] * area;
    const double bnorm = std::sqrt(dot(b, b));

    SolveReport out{Field(s.mask()), 0, 0.0};
    if (bnorm == 0.0) return out;

    std::vector<double> x(n, 0.0);
    std::vector<double> r = b;
    std::vector<double> z(n);
    std::vector<double> p(n);
    std::vector<double> q(n);
    for (int i = 0; i < n; ++i) z[i] = inv_d[i] * r[i];
    p = z;
    double rz = dot(r, z);

    const int max_iter = std::max(1, static_cast<int>(std::ceil(s.options().max_iter_factor * n)));
    const double target = s.options().rel_tol * bnorm;
    bool converged = false;
    int it = 0;
    while (it < max_iter) {
        ++it;
        K.multiply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) break;
        const double alpha = rz / pq;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        if (std::sqrt(dot(r, r)) <= target) {
            converged = true;
            break;
        }
        for (int i = 0; i < n; ++i) z[i] = inv_d[i] * r[i];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    K.multiply(x, q);
    double rr = 0.0;
    for (int i = 0; i < n; ++i) rr += (b[i] - q[i]) * (b[i] - q[i]);
    out.residual = std::sqrt(rr) / bnorm;
    out.iterations = it;
    if (!converged) {
        throw SolverError("conjugate gradient stalled after " + std::to_string(it) +
                              " iterations (relative residual " + std::to_string(out.residual) + ")",
                          out.residual, it);
    }
    for (int i = 0; i < n; ++i) out.u.set(s.node_of(i), x[i]);
    return out;
}

Field solve(const SpdSystem& s, const Field& f) { return solve_report(s, f).u; }

Field apply(const SpdSystem& s, const Field& u) {
    require_grid(s, u);
    const int n = s.unknowns();
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (int r = 0; r < n; ++r) x[r] = u[s.node_of(r)];
    s.matrix().multiply(x, y);
    const double inv_area = 1.0 / s.grid().cell_area();
    Field out(s.mask());
    for (int r = 0; r < n; ++r) out.set(s.node_of(r), y[r] * inv_area);
    return out;
}

}  // namespace navier
