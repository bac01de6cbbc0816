#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "navier/error.hpp"
#include "navier/grid.hpp"

using namespace navier;

TEST_CASE("grid spacings") {
    auto g = build_grid(3, 3, {0, 0, 1, 1});
    CHECK(g.hx() == 0.5);
    CHECK(g.hy() == 0.5);

    auto fine = build_grid(101, 101, {0, 0, 1, 1});
    CHECK(fine.hx() == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(fine.hy() == doctest::Approx(0.01).epsilon(1e-14));

    auto tall = build_grid(3, 5, {0, 0, 1, 2});
    CHECK(tall.hx() == 0.5);
    CHECK(tall.hy() == 0.5);
}

TEST_CASE("grid rejects bad input") {
    CHECK_THROWS_AS(build_grid(2, 5, {}), InvalidArgument);
    CHECK_THROWS_AS(build_grid(5, 2, {}), InvalidArgument);
    CHECK_THROWS_AS(build_grid(5, 5, {0, 0, 0, 1}), InvalidArgument);
    CHECK_THROWS_AS(build_grid(5, 5, {0, 1, 1, 0.5}), InvalidArgument);
}

TEST_CASE("flat index round trip") {
    auto g = build_grid(7, 4, {-1, 0, 2, 3});
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const int k = g.index(i, j);
            CHECK(k == j * 7 + i);
            CHECK(g.i_of(k) == i);
            CHECK(g.j_of(k) == j);
        }
    }
}

TEST_CASE("mask_from_spec") {
    auto g = build_grid(5, 5);
    CHECK(mask_from_spec(g, Shape::full())->free_count() == 9);
    CHECK_THROWS_WITH_AS(mask_from_spec(g, Shape::disc(0.5, 0.5, 0.0)), doctest::Contains("empty domain"),
                         InvalidArgument);

    auto fine = build_grid(41, 41);
    const int full = mask_from_spec(fine, Shape::full())->free_count();
    const int holed = mask_from_spec(fine, Shape::minus(Shape::full(), Shape::disc(0.5, 0.5, 0.2)))->free_count();
    CHECK(holed < full);

    // boundary always pinned, even for shapes that cover it
    auto m = mask_from_spec(g, Shape::rectangle({-1, -1, 2, 2}));
    for (int k = 0; k < g.size(); ++k) {
        if (g.on_boundary(k)) CHECK(m->is_pinned(k));
    }
}

TEST_CASE("removing area never adds free nodes") {
    auto g = build_grid(33, 33);
    int prev = mask_from_spec(g, Shape::full())->free_count();
    for (double r : {0.05, 0.1, 0.2, 0.3, 0.4}) {
        const int c = mask_from_spec(g, Shape::minus(Shape::full(), Shape::disc(0.5, 0.5, r)))->free_count();
        CHECK(c <= prev);
        prev = c;
    }
}

TEST_CASE("shape grammar") {
    auto g = build_grid(21, 21);
    auto a = mask_from_spec(g, parse_shape("full - disc(0.5,0.5,0.2)"));
    auto b = mask_from_spec(g, Shape::minus(Shape::full(), Shape::disc(0.5, 0.5, 0.2)));
    CHECK(*a == *b);

    auto l = mask_from_spec(g, parse_shape("lshape"));
    CHECK(l->is_pinned(g.index(15, 15)));
    CHECK(l->is_free(g.index(5, 15)));

    auto pins = mask_from_spec(g, parse_shape("pins(22;23)"));
    CHECK(pins->is_pinned(22));
    CHECK(pins->is_pinned(23));
    CHECK(pins->free_count() == 19 * 19 - 2);

    auto u = mask_from_spec(g, parse_shape("(rect(0,0,0.5,0.5) + rect(0.5,0.5,1,1))"));
    CHECK(u->is_free(g.index(5, 5)));
    CHECK(u->is_pinned(g.index(5, 15)));

    CHECK_THROWS_AS(parse_shape("circle(1)"), InvalidArgument);
    CHECK_THROWS_AS(parse_shape("disc(0.5,0.5)"), InvalidArgument);
    CHECK_THROWS_AS(parse_shape("full +"), InvalidArgument);
}

TEST_CASE("fields vanish on pinned nodes") {
    auto g = build_grid(9, 9);
    auto m = mask_from_spec(g, Shape::minus(Shape::full(), Shape::disc(0.5, 0.5, 0.2)));
    auto u = Field::sample(m, [](double, double) { return 1.0; });
    for (int k = 0; k < g.size(); ++k) CHECK(u[k] == (m->is_free(k) ? 1.0 : 0.0));
    CHECK_THROWS_AS(u.set(0, 1.0), InvalidArgument);
    u.set(0, 0.0);
}

TEST_CASE("norms") {
    auto g = build_grid(201, 201);
    auto m = full_mask(g);
    auto one = Field::sample(m, [](double, double) { return 1.0; });
    // interior-only Riemann sum: (n-2)^2 h^2 = (1 - h)^2 ... -> 1 with O(h)
    CHECK(std::abs(l2_inner(one, one) - 1.0) <= 2.0 * g.hx() + 1e-12);

    auto zero = Field(m);
    CHECK(l2_norm(zero) == 0.0);
    CHECK(h1_seminorm(zero) == 0.0);
    CHECK(max_abs(zero) == 0.0);

    const double pi = std::numbers::pi;
    auto s = Field::sample(m, [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
    const double n2 = l2_norm(s) * l2_norm(s);
    CHECK(std::abs(n2 - 0.25) <= 10.0 * g.hx() * g.hx());

    // |grad sin sin|^2 integrates to pi^2/2
    const double h1 = h1_seminorm(s);
    CHECK(std::abs(h1 * h1 - pi * pi / 2.0) <= 1e-2);
}

TEST_CASE("inner product symmetric and bilinear") {
    auto g = build_grid(17, 13, {0, 0, 2, 1});
    auto m = full_mask(g);
    std::mt19937_64 rng(7);
    auto u = random_field(m, rng), v = random_field(m, rng), w = random_field(m, rng);
    CHECK(l2_inner(u, v) == l2_inner(v, u));
    const double lhs = l2_inner(2.0 * u + 3.0 * w, v);
    const double rhs = 2.0 * l2_inner(u, v) + 3.0 * l2_inner(w, v);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * (std::abs(lhs) + 1.0));
}

TEST_CASE("extend_by_zero preserves pairings exactly") {
    auto g = build_grid(33, 33);
    auto full = full_mask(g);
    auto disc = mask_from_spec(g, Shape::disc(0.5, 0.5, 0.3));
    std::mt19937_64 rng(11);
    auto u = random_field(disc, rng);
    auto ut = extend_by_zero(u, full);
    CHECK(l2_norm(ut) == l2_norm(u));

    auto one_full = Field::sample(full, [](double, double) { return 1.0; });
    auto one_disc = Field::sample(disc, [](double, double) { return 1.0; });
    CHECK(l2_inner(ut, one_full) == l2_inner(u, one_disc));

    auto v = random_field(full, rng);
    CHECK(l2_inner(ut, v) == l2_inner(u, restrict_to(v, disc)));

    CHECK(max_abs(extend_by_zero(Field(disc), full)) == 0.0);

    auto other = full_mask(build_grid(17, 17));
    CHECK_THROWS_AS(extend_by_zero(u, other), InvalidArgument);
    CHECK_THROWS_AS(extend_by_zero(ut, disc), InvalidArgument);
}
