#pragma once

#include <cstdint>

#include "navier/grid.hpp"
#include "navier/relaxed_solver.hpp"

namespace navier {

/// Solution operator z -> w of A w + mu w = z, with its inverse Lambda.
/// On the discrete free-node space the resolvent is a bijection, so the
/// image space needs no separate representation.
class Resolvent {
public:
    Resolvent(const Quadratic2& a, const MeasureWeights& m, MaskPtr mask, SolverOptions opts = {});

    const SpdSystem& system() const noexcept { return system_; }
    const MaskPtr& mask() const noexcept { return system_.mask(); }

private:
    SpdSystem system_;
};

/// w = R z.
Field resolvent_apply(const Resolvent& r, const Field& z);
/// z = Lambda w, the unique z with w = R z. Applies the operator, never solves.
Field lambda_apply(const Resolvent& r, const Field& w);

/// |<h, R g> - <g, R h>|.
double symmetry_defect(const Resolvent& r, const Field& h, const Field& g);

/// Normalized defect of int (Lambda_B phi)(Lambda_A u) = <f, phi> for a given
/// u, over `trials` test functions phi = R_B z with seeded random z.
double single_equation_residual(const Resolvent& ra, const Resolvent& rb, const Field& f, const Field& u,
                                int trials, std::uint64_t seed = 42);

/// Solves the relaxed system for u, then returns single_equation_residual.
double single_equation_check(const Quadratic2& a, const Quadratic2& b, const MeasureWeights& m_a,
                             const MeasureWeights& m_b, const Field& f, int trials, std::uint64_t seed = 42);

}  // namespace navier
