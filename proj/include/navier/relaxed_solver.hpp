#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "navier/grid.hpp"
#include "navier/symbols.hpp"

namespace navier {

/// Nonnegative nodal weights representing a measure mu; +infinity pins a node.
/// The finite part enters the system as a lumped mass term m_k hx hy.
class MeasureWeights {
public:
    static constexpr double inf = std::numeric_limits<double>::infinity();

    MeasureWeights(Grid grid, std::vector<double> weights);

    static MeasureWeights constant(const Grid& grid, double m);
    static MeasureWeights zero(const Grid& grid) { return constant(grid, 0.0); }
    /// mu^U: zero on the free nodes of U, infinite elsewhere.
    static MeasureWeights pinned_outside(const DomainMask& u);

    const Grid& grid() const noexcept { return grid_; }
    double operator[](int k) const { return w_[k]; }
    bool is_infinite(int k) const { return w_[k] == inf; }
    std::span<const double> values() const noexcept { return w_; }
    bool all_finite() const;

    void set(int k, double m);

    bool operator==(const MeasureWeights& other) const {
        return grid_ == other.grid_ && w_ == other.w_;
    }

private:
    Grid grid_;
    std::vector<double> w_;
};

struct SolverOptions {
    double rel_tol = 1e-10;  ///< on ||r|| / ||b||
    double max_iter_factor = 20.0;  ///< iteration cap = ceil(factor * unknowns), at least 1
};

/// Compressed sparse row storage.
struct CsrMatrix {
    int rows = 0;
    std::vector<int> row_ptr;
    std::vector<int> cols;
    std::vector<double> vals;

    void multiply(std::span<const double> x, std::span<double> y) const;
    /// Entry (i, j), zero if not stored.
    double at(int i, int j) const;
};

/// Element stiffness of a bilinear quad of size hx x hy for the form
/// sum a_ij int d_j u d_i v (2x2 Gauss). Local node a = di + 2 dj.
std::array<std::array<double, 4>, 4> q1_element_stiffness(const Quadratic2& a, double hx, double hy);

/// Assembled K + M over the free, finite-weight nodes.
class SpdSystem {
public:
    const Grid& grid() const noexcept { return mask_->grid(); }
    const MaskPtr& mask() const noexcept { return mask_; }
    const Quadratic2& op() const noexcept { return op_; }
    const MeasureWeights& weights() const noexcept { return weights_; }
    const CsrMatrix& matrix() const noexcept { return k_; }
    const SolverOptions& options() const noexcept { return opts_; }
    int unknowns() const noexcept { return static_cast<int>(node_of_.size()); }
    int unknown_of(int node) const { return unknown_of_[node]; }
    int node_of(int unknown) const { return node_of_[unknown]; }
    std::span<const double> inverse_diagonal() const noexcept { return inv_diag_; }

private:
    friend SpdSystem assemble(const Quadratic2&, const MeasureWeights&, MaskPtr, SolverOptions);
    SpdSystem(Quadratic2 op, MeasureWeights w, MaskPtr mask, SolverOptions opts)
        : op_(op), weights_(std::move(w)), mask_(std::move(mask)), opts_(opts) {}

    Quadratic2 op_;
    MeasureWeights weights_;
    MaskPtr mask_;
    SolverOptions opts_;
    CsrMatrix k_;
    std::vector<double> inv_diag_;
    std::vector<int> unknown_of_;
    std::vector<int> node_of_;
};

/// Throws InvalidArgument for a non-elliptic operator, incompatible inputs,
/// or "empty system" when every node is eliminated.
SpdSystem assemble(const Quadratic2& a, const MeasureWeights& m, MaskPtr mask, SolverOptions opts = {});

struct SolveReport {
    Field u;
    int iterations = 0;
    double residual = 0.0;  ///< true relative residual ||b - K x|| / ||b||
};

/// Solves K u = (f_k hx hy) on the unknowns by Jacobi-preconditioned CG.
/// The result lives on the system mask and vanishes on eliminated nodes.
SolveReport solve_report(const SpdSystem& s, const Field& f);
Field solve(const SpdSystem& s, const Field& f);

/// (K u) / (hx hy) on the unknowns, zero elsewhere.
Field apply(const SpdSystem& s, const Field& u);

}  // namespace navier
