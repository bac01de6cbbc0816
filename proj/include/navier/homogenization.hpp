#pragma once

#include <string>
#include <vector>

#include "navier/fourth_order.hpp"
#include "navier/grid.hpp"
#include "navier/symbols.hpp"

namespace navier {

/// Hole radius as a function of the number n of cells per axis:
///   power:       scale * n^(-exponent)
///   exponential: scale * exp(-exponent * n^2)
struct PerforationRule {
    enum class Kind { Power, Exponential };

    Kind kind = Kind::Power;
    double scale = 0.1;
    double exponent = 1.0;

    static PerforationRule power(double scale, double p) { return {Kind::Power, scale, p}; }
    static PerforationRule exponential(double scale, double kappa) { return {Kind::Exponential, scale, kappa}; }

    double radius(int n) const;
    std::string describe() const;
};

/// n x n periodic closed-disc holes over the rectangle. Rejects radii below
/// 2 max(hx, hy) (the error names the minimum grid size) and holes that
/// would leave their cell.
MaskPtr perforate(const Grid& g, const PerforationRule& rule, int n);

struct FitResult {
    double m_star = 0.0;
    double distance = 0.0;  ///< ||u_{m*} - u_target||
    bool flat = false;      ///< objective did not depend on m; m* forced to 0
    int evaluations = 0;
};

/// Constant weight m >= 0 whose relaxed solution (same m in both equations)
/// is closest in L2 to u_target. Bracket by doubling, then golden section to
/// relative tolerance 1e-4.
FitResult fit_constant_mu(const Quadratic2& a, const Quadratic2& b, const Field& f, const Field& u_target,
                          SolverOptions opts = {});

struct ConvergenceRow {
    int n = 0;
    double radius = 0.0;
    int free_nodes = 0;
    double dist_to_full = 0.0;    ///< ||u_n - u_Omega||
    double dist_to_fitted = 0.0;  ///< ||u_n - u_{m*}||
    double dist_to_pinned = 0.0;  ///< ||u_n - 0||: every interior node pinned
    double m_star = 0.0;
    bool fit_flat = false;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    Field u_full;
    std::vector<Field> u_n;

    /// Columns n,dist_to_full,dist_to_fitted,m_star.
    std::string to_csv() const;
};

/// Navier solves on the perforated sequence, compared against the full-domain
/// solution and the fitted relaxed solution. Runs the n values concurrently.
ConvergenceTable convergence_experiment(const Quadratic2& a, const Quadratic2& b, const Field& f,
                                        const PerforationRule& rule, const std::vector<int>& ns,
                                        SolverOptions opts = {});

struct StabilityCheck {
    int n_prev = 0;
    int n_next = 0;
    double relative_change = 0.0;
    bool ok = false;  ///< relative change < 25%
};

/// Consecutive-n stability of the fitted weight. A report, not an assertion.
std::vector<StabilityCheck> fit_stability(const ConvergenceTable& table);

}  // namespace navier
