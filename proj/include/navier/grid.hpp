#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace navier {

struct Rect {
    double x0 = 0.0;
    double y0 = 0.0;
    double x1 = 1.0;
    double y1 = 1.0;

    bool operator==(const Rect&) const = default;
};

/// Uniform tensor grid over a rectangle. Node (i, j) has flat index j * nx + i.
class Grid {
public:
    Grid(int nx, int ny, Rect rect);

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    int size() const noexcept { return nx_ * ny_; }
    const Rect& rect() const noexcept { return rect_; }
    double hx() const noexcept { return hx_; }
    double hy() const noexcept { return hy_; }
    double cell_area() const noexcept { return hx_ * hy_; }

    double x(int i) const noexcept { return rect_.x0 + i * hx_; }
    double y(int j) const noexcept { return rect_.y0 + j * hy_; }
    int index(int i, int j) const noexcept { return j * nx_ + i; }
    int i_of(int k) const noexcept { return k % nx_; }
    int j_of(int k) const noexcept { return k / nx_; }
    double x_of(int k) const noexcept { return x(i_of(k)); }
    double y_of(int k) const noexcept { return y(j_of(k)); }
    bool on_boundary(int k) const noexcept;

    bool operator==(const Grid& other) const noexcept {
        return nx_ == other.nx_ && ny_ == other.ny_ && rect_ == other.rect_;
    }

private:
    int nx_;
    int ny_;
    Rect rect_;
    double hx_;
    double hy_;
};

Grid build_grid(int nx, int ny, Rect rect = {});

enum class NodeStatus : std::uint8_t { Free, Pinned };

/// Free/pinned classification of the grid nodes; encodes an open subset U of
/// the rectangle. Boundary nodes of the rectangle are always pinned and at
/// least one node is free.
class DomainMask {
public:
    DomainMask(Grid grid, std::vector<NodeStatus> status);

    static DomainMask full(const Grid& grid);

    const Grid& grid() const noexcept { return grid_; }
    NodeStatus status(int k) const { return status_[k]; }
    bool is_free(int k) const { return status_[k] == NodeStatus::Free; }
    bool is_pinned(int k) const { return status_[k] == NodeStatus::Pinned; }
    int free_count() const noexcept { return free_count_; }
    std::span<const NodeStatus> statuses() const noexcept { return status_; }

    /// True when every free node of this mask is free in `other`.
    bool is_subset_of(const DomainMask& other) const;

    bool operator==(const DomainMask& other) const {
        return grid_ == other.grid_ && status_ == other.status_;
    }

private:
    Grid grid_;
    std::vector<NodeStatus> status_;
    int free_count_ = 0;
};

using MaskPtr = std::shared_ptr<const DomainMask>;

MaskPtr full_mask(const Grid& grid);

/// Set-algebraic description of a subdomain U. Evaluated node by node:
/// a node belongs to U when `contains` holds and it is not on the rectangle
/// boundary.
class Shape {
public:
    enum class Kind { Full, Rectangle, Disc, LShape, Holes, PinList, Union, Difference };

    static Shape full();
    static Shape rectangle(Rect r);
    /// Open disc: a node is inside when its distance to the center is < r.
    static Shape disc(double cx, double cy, double r);
    /// Unit-normalized L-shape: the rectangle minus its upper-right quadrant.
    static Shape lshape();
    /// Full rectangle minus closed discs of radius r at the centers of an
    /// n x n array of cells.
    static Shape holes(int n, double r);
    /// Full rectangle with the listed flat node indices pinned.
    static Shape pin_list(std::vector<int> nodes);
    static Shape unite(Shape a, Shape b);
    static Shape minus(Shape a, Shape b);

    Kind kind() const noexcept { return kind_; }
    bool contains(const Grid& g, int k) const;
    std::string describe() const;

private:
    Kind kind_ = Kind::Full;
    std::vector<double> params_;
    std::vector<int> nodes_;
    std::vector<Shape> children_;
};

/// Parses the textual shape grammar used by config files:
///   expr  := term (('+' | '-') term)*
///   term  := full | lshape | rect(x0,y0,x1,y1) | disc(cx,cy,r)
///          | holes(n,r) | pins(k1;k2;...) | '(' expr ')'
Shape parse_shape(std::string_view text);

/// Throws InvalidArgument("empty domain") if no interior node survives.
MaskPtr mask_from_spec(const Grid& g, const Shape& spec);

/// Nodal values on a grid, exactly zero on the pinned nodes of its mask.
class Field {
public:
    explicit Field(MaskPtr mask);
    Field(MaskPtr mask, std::vector<double> values);

    static Field sample(MaskPtr mask, const std::function<double(double, double)>& fn);

    const Grid& grid() const noexcept { return mask_->grid(); }
    const DomainMask& mask() const noexcept { return *mask_; }
    const MaskPtr& mask_ptr() const noexcept { return mask_; }
    int size() const noexcept { return static_cast<int>(values_.size()); }

    double operator[](int k) const { return values_[k]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Throws if k is pinned and v != 0.
    void set(int k, double v);

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

    friend Field operator+(Field a, const Field& b) { return a += b; }
    friend Field operator-(Field a, const Field& b) { return a -= b; }
    friend Field operator*(double s, Field a) { return a *= s; }

private:
    void require_same_mask(const Field& other) const;

    MaskPtr mask_;
    std::vector<double> values_;
};

/// Zero extension of u to a mask whose free set contains u's free set.
Field extend_by_zero(const Field& u, MaskPtr larger);

/// Restriction: keep values on nodes free in `smaller`, drop the rest.
Field restrict_to(const Field& u, MaskPtr smaller);

/// Nodal-quadrature pairing sum_k u_k v_k hx hy. Fields must share a grid.
double l2_inner(const Field& u, const Field& v);
double l2_norm(const Field& u);
/// Forward-difference H1 seminorm over all grid edges.
double h1_seminorm(const Field& u);
double max_abs(const Field& u);
/// Discrete L2 distance between fields on the same grid (masks may differ).
double l2_distance(const Field& u, const Field& v);

/// Uniform random values in [lo, hi] on the free nodes.
Field random_field(MaskPtr mask, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0);

}  // namespace navier
