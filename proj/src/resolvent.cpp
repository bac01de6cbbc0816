#include "navier/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "navier/fourth_order.hpp"

namespace navier {

Resolvent::Resolvent(const Quadratic2& a, const MeasureWeights& m, MaskPtr mask, SolverOptions opts)
    : system_(assemble(a, m, std::move(mask), opts)) {}

Field resolvent_apply(const Resolvent& r, const Field& z) { return solve(r.system(), z); }

Field lambda_apply(const Resolvent& r, const Field& w) { return apply(r.system(), w); }

double symmetry_defect(const Resolvent& r, const Field& h, const Field& g) {
    return std::abs(l2_inner(h, resolvent_apply(r, g)) - l2_inner(g, resolvent_apply(r, h)));
}

double single_equation_residual(const Resolvent& ra, const Resolvent& rb, const Field& f, const Field& u,
                                int trials, std::uint64_t seed) {
    const Field lam_u = lambda_apply(ra, u);
    const double lam_u_norm = l2_norm(lam_u);
    const double f_norm = l2_norm(f);

    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Field z = random_field(rb.mask(), rng);
        const Field phi = resolvent_apply(rb, z);
        const Field lam_phi = lambda_apply(rb, phi);
        const double defect = std::abs(l2_inner(lam_phi, lam_u) - l2_inner(f, phi));
        const double scale = std::max(l2_norm(lam_phi) * lam_u_norm, f_norm * l2_norm(phi));
        worst = std::max(worst, scale > 0.0 ? defect / scale : defect);
    }
    return worst;
}

double single_equation_check(const Quadratic2& a, const Quadratic2& b, const MeasureWeights& m_a,
                             const MeasureWeights& m_b, const Field& f, int trials, std::uint64_t seed) {
    const NavierSolution sol = solve_relaxed_system(a, b, m_a, m_b, f);
    const Resolvent ra(a, m_a, f.mask_ptr());
    const Resolvent rb(b, m_b, f.mask_ptr());
    return single_equation_residual(ra, rb, f, sol.u, trials, seed);
}

}  // namespace navier
