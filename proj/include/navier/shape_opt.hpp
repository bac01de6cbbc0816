#pragma once

#include <string>
#include <vector>

#include "navier/fourth_order.hpp"
#include "navier/grid.hpp"
#include "navier/relaxed_solver.hpp"

namespace navier {

/// Integrand j(x, s) of the cost int j(x, u(x)) dx, with a declared growth
/// bound |j(x, s)| <= b(x) + beta |s|^p. In two dimensions any finite p is
/// admissible; the declared bound itself is checked on a sample of s values.
class Objective {
public:
    enum class Kind { Tracking, WeightedQuadratic, Linear };

    struct Growth {
        double p = 2.0;
        std::vector<double> b;  ///< per node
        double beta = 0.0;
    };

    /// j = (s - w)^2; growth p = 2, b = 2 w^2, beta = 2.
    static Objective tracking(Field w);
    /// j = q s^2; growth p = 2, b = 0, beta = max |q|.
    static Objective weighted_quadratic(Field q);
    /// j = q s; growth p = 2, b = |q| / 2, beta = max |q| / 2.
    static Objective linear(Field q);

    /// Custom growth metadata; throws InvalidArgument when it does not bound j.
    Objective(Kind kind, Field data, Growth growth);

    Kind kind() const noexcept { return kind_; }
    const Field& data() const noexcept { return data_; }
    const Growth& growth() const noexcept { return growth_; }

    double value(int k, double s) const;
    double derivative(int k, double s) const;

private:
    Kind kind_;
    Field data_;
    Growth growth_;
};

/// Throws InvalidArgument if the growth bound fails anywhere on the sample.
void validate_growth(const Objective& j);

/// J = sum_k j(x_k, u_k) hx hy, with (u, v) from the relaxed system carrying
/// the same weights m in both equations. Infinite weights are allowed.
double evaluate_J(const MeasureWeights& m, const Quadratic2& a, const Quadratic2& b, const Field& f,
                  const Objective& j, SolverOptions opts = {});

struct GradientResult {
    double value = 0.0;
    std::vector<double> gradient;  ///< dJ/dm_k per node; zero on eliminated nodes
};

/// Adjoint gradient of J with respect to the nodal weights. Needs finite m.
GradientResult gradient_J(const MeasureWeights& m, const Quadratic2& a, const Quadratic2& b, const Field& f,
                          const Objective& j, SolverOptions opts = {});

struct OptOptions {
    int max_iters = 100;
    double armijo_c = 1e-4;
    double initial_step = 1.0;
    int max_halvings = 40;
    double stop_tol = 1e-8;
    SolverOptions solver{};
};

struct OptState {
    MeasureWeights m;
    std::vector<double> J;         ///< J at iterate 0..iterations
    std::vector<double> gradnorm;  ///< projected-gradient norm at each iterate
    std::vector<double> step;      ///< accepted step per iteration (0 for iterate 0)
    int iterations = 0;
    bool converged = false;
    bool line_search_failed = false;

    std::string to_csv() const;  ///< iter,J,gradnorm,step
};

/// Projected gradient descent m <- max(0, m - t g / (hx hy)) with Armijo
/// backtracking; g / (hx hy) is the L2 representative of the nodal gradient.
OptState optimize(const Quadratic2& a, const Quadratic2& b, const Field& f, const Objective& j,
                  const MeasureWeights& m0, int max_iters, OptOptions opts = {});

/// Target with no classical optimum: w = sin^3(pi x) sin^3(pi y) and
/// f = L1(L1 w) where L1 applies the assembled Laplacian + unit weight.
struct NosolInstance {
    Field w;
    Field f;
};

/// Requires the unit square.
NosolInstance nosol_instance(const Grid& g);

struct ProbeDomain {
    std::string name;
    Shape shape;
};

/// Full domain, 5 concentric discs, 5 centred rectangles, 3 perforated masks.
std::vector<ProbeDomain> default_probes();

struct ProbeResult {
    std::string name;
    bool skipped = false;
    std::string warning;
    double J = 0.0;
};

struct DomainComparison {
    std::vector<ProbeResult> probes;
    std::string best_name;
    double best_classical = 0.0;
    double relaxed = 0.0;
    double gap = 0.0;  ///< best_classical - relaxed

    std::string to_csv() const;  ///< probe,J with a final relaxed row
};

/// J at mu^U for each probe domain U versus J at the relaxed weights.
/// Probes with an empty interior are skipped with a warning.
DomainComparison compare_with_domains(const Quadratic2& a, const Quadratic2& b, const Field& f,
                                      const Objective& j, const std::vector<ProbeDomain>& probes,
                                      const MeasureWeights& relaxed, SolverOptions opts = {});

}  // namespace navier
