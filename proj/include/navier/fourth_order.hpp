#pragma once

#include <cstdint>
#include <vector>

#include "navier/grid.hpp"
#include "navier/relaxed_solver.hpp"
#include "navier/symbols.hpp"

namespace navier {

/// Pair (u, v) with B v + mu_B v = f and A u + mu_A u = v.
struct NavierSolution {
    Field u;
    Field v;
    Quadratic2 a;
    Quadratic2 b;
    MeasureWeights weight_a;
    MeasureWeights weight_b;
    int iterations = 0;        ///< CG iterations of both inner solves
    double max_residual = 0.0; ///< worst relative residual of the inner solves
};

/// Simply-supported plate problem B A u = f on the mask, as two chained
/// second-order Dirichlet solves: B v = f, then A u = v.
NavierSolution solve_navier(const Quadratic2& a, const Quadratic2& b, const Field& f, MaskPtr mask,
                            SolverOptions opts = {});

/// Relaxed limit system. Both weight fields live on f's grid; the base
/// domain is f's mask.
NavierSolution solve_relaxed_system(const Quadratic2& a, const Quadratic2& b, const MeasureWeights& m_a,
                                    const MeasureWeights& m_b, const Field& f, SolverOptions opts = {});

/// Largest normalized defect of int (A u)(B phi) = <f, phi> over `trials`
/// test functions phi = B^{-1} z with seeded random loads z.
double check_formulation_ii(const NavierSolution& sol, const Field& f, int trials, std::uint64_t seed = 42);

/// Per-trial defects behind check_formulation_ii, same seed stream.
std::vector<double> formulation_ii_residuals(const NavierSolution& sol, const Field& f, int trials,
                                             std::uint64_t seed = 42);

/// ||u_BA - u_AB||: the same quartic split in the two possible orders.
double ordering_gap(const Quadratic2& a, const Quadratic2& b, const Field& f, MaskPtr mask,
                    SolverOptions opts = {});

}  // namespace navier
