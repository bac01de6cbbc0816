#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "navier/fourth_order.hpp"
#include "navier/homogenization.hpp"

using namespace navier;

namespace {

constexpr double pi = std::numbers::pi;
double sinsin(double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }

Field sinsin_rhs(MaskPtr mask, double scale) {
    return Field::sample(mask, [scale](double x, double y) { return scale * sinsin(x, y); });
}

}  // namespace

TEST_CASE("manufactured bi-laplacian") {
    double prev_u = 0.0, prev_v = 0.0;
    for (int n : {17, 33, 65}) {
        auto mask = full_mask(build_grid(n, n));
        auto f = sinsin_rhs(mask, 4.0 * std::pow(pi, 4));
        auto lap = Quadratic2::laplacian();
        auto sol = solve_navier(lap, lap, f, mask);
        const double eu = l2_distance(sol.u, Field::sample(mask, sinsin));
        const double ev = l2_distance(sol.v, sinsin_rhs(mask, 2.0 * pi * pi));
        if (prev_u > 0.0) {
            CHECK(prev_u / eu == doctest::Approx(4.0).epsilon(0.1));
            CHECK(prev_v / ev == doctest::Approx(4.0).epsilon(0.1));
        }
        prev_u = eu;
        prev_v = ev;
    }
    CHECK(prev_u < 1e-3);
}

TEST_CASE("example pair shares the eigenfunction") {
    auto mask = full_mask(build_grid(65, 65));
    auto f = sinsin_rhs(mask, 6.0 * std::pow(pi, 4));
    const Quadratic2 a{1, 0, 1}, b{1, 0, 2};
    auto sol = solve_navier(a, b, f, mask);
    CHECK(l2_distance(sol.u, Field::sample(mask, sinsin)) < 2e-3);
    CHECK(ordering_gap(a, b, f, mask) <= 1e-6);
}

TEST_CASE("zero load") {
    auto mask = full_mask(build_grid(17, 17));
    auto lap = Quadratic2::laplacian();
    auto sol = solve_navier(lap, Quadratic2{1, 0, 2}, Field(mask), mask);
    CHECK(max_abs(sol.u) == 0.0);
    CHECK(max_abs(sol.v) == 0.0);
    CHECK(check_formulation_ii(sol, Field(mask), 5) <= 1e-12);
}

TEST_CASE("formulation (ii) holds and is not vacuous") {
    auto mask = full_mask(build_grid(33, 33));
    auto f = sinsin_rhs(mask, 4.0 * std::pow(pi, 4));
    auto lap = Quadratic2::laplacian();
    auto sol = solve_navier(lap, lap, f, mask);
    CHECK(check_formulation_ii(sol, f, 20) <= 1e-8);

    std::mt19937_64 rng(5);
    auto noisy = sol;
    noisy.u += 1e-3 * random_field(mask, rng);
    CHECK(check_formulation_ii(noisy, f, 20) > 1e-5);
}

TEST_CASE("formulation (ii) on a masked domain with a mixed pair") {
    auto g = build_grid(33, 33);
    auto mask = mask_from_spec(g, parse_shape("lshape"));
    auto f = Field::sample(mask, [](double x, double y) { return 1.0 + x - y; });
    auto sol = solve_navier(Quadratic2{1, 0.3, 1.4}, Quadratic2{2, -0.2, 1}, f, mask);
    CHECK(check_formulation_ii(sol, f, 10, 3) <= 1e-8);
}

TEST_CASE("relaxed system reduces to the plain Navier solve") {
    auto g = build_grid(25, 25);
    auto full = full_mask(g);
    auto f = Field::sample(full, [](double x, double y) { return 1.0 + x * y; });
    const Quadratic2 a{1, 0, 1}, b{1, 0, 2};

    auto plain = solve_navier(a, b, f, full);
    auto relaxed = solve_relaxed_system(a, b, MeasureWeights::zero(g), MeasureWeights::zero(g), f);
    for (int k = 0; k < g.size(); ++k) CHECK(plain.u[k] == relaxed.u[k]);

    auto u_mask = mask_from_spec(g, parse_shape("full - disc(0.5,0.5,0.2)"));
    auto on_mask = solve_navier(a, b, f, u_mask);
    auto pins = MeasureWeights::pinned_outside(*u_mask);
    auto via_inf = solve_relaxed_system(a, b, pins, pins, f);
    for (int k = 0; k < g.size(); ++k) {
        CHECK(on_mask.u[k] == via_inf.u[k]);
        CHECK(on_mask.v[k] == via_inf.v[k]);
    }
}

TEST_CASE("ordering gap") {
    auto g = build_grid(33, 33);
    auto lap = Quadratic2::laplacian();
    auto full = full_mask(g);
    auto one = Field::sample(full, [](double, double) { return 1.0; });
    CHECK(ordering_gap(lap, lap, one, full) <= 1e-10);

    auto l = mask_from_spec(g, parse_shape("lshape"));
    const double gap = ordering_gap(Quadratic2{1, 0, 1}, Quadratic2{1, 0, 2}, restrict_to(one, l), l);
    MESSAGE("L-shape ordering gap = " << gap);
    CHECK(gap > 10.0 * 1e-10);
}

TEST_CASE("solution map is linear and deterministic") {
    auto g = build_grid(25, 25);
    auto mask = mask_from_spec(g, parse_shape("lshape"));
    std::mt19937_64 rng(17);
    auto f1 = random_field(mask, rng), f2 = random_field(mask, rng);
    const Quadratic2 a{1, 0.2, 1}, b{1.5, 0, 1};
    SolverOptions tight;
    tight.rel_tol = 1e-14;
    auto u1 = solve_navier(a, b, f1, mask, tight).u;
    auto u2 = solve_navier(a, b, f2, mask, tight).u;
    auto u12 = solve_navier(a, b, 2.0 * f1 + (-3.0) * f2, mask, tight).u;
    CHECK(max_abs(u12 - (2.0 * u1 + (-3.0) * u2)) <= 1e-10 * max_abs(u12));

    auto again = solve_navier(a, b, f1, mask, tight).u;
    for (int k = 0; k < g.size(); ++k) CHECK(again[k] == u1[k]);
}

TEST_CASE("perforated sequence is Cauchy along tested n") {
    auto g = build_grid(97, 97);
    auto full = full_mask(g);
    auto f = Field::sample(full, [](double, double) { return 1.0; });
    auto lap = Quadratic2::laplacian();
    const auto rule = PerforationRule::power(0.1, 1.0);
    std::vector<Field> us;
    for (int n : {2, 3, 4}) {
        auto m = perforate(g, rule, n);
        us.push_back(extend_by_zero(solve_navier(lap, lap, restrict_to(f, m), m).u, full));
    }
    const double d1 = l2_distance(us[0], us[1]), d2 = l2_distance(us[1], us[2]);
    MESSAGE("||u_2 - u_3|| = " << d1 << ", ||u_3 - u_4|| = " << d2);
    CHECK(d2 < d1);
}
