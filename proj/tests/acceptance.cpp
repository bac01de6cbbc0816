// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance --cli <path to navier_lab> --workdir <scratch dir>
//
// Exit status is the number of failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "navier/fourth_order.hpp"
#include "navier/homogenization.hpp"
#include "navier/io.hpp"
#include "navier/relaxed_solver.hpp"
#include "navier/resolvent.hpp"
#include "navier/shape_opt.hpp"
#include "navier/symbols.hpp"

using namespace navier;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;
const Quadratic2 lap = Quadratic2::laplacian();

double sinsin(double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }

Field scaled_sinsin(const MaskPtr& m, double s) {
    return Field::sample(m, [s](double x, double y) { return s * sinsin(x, y); });
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Collects sub-checks of one criterion; the criterion passes if all of them do.
struct Checks {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) ok = false;
        if (detail.tellp() > 0) detail << "; ";
        detail << what << (cond ? "" : " [X]");
    }
};

struct Criterion {
    int id;
    std::string name;
    double time_limit;  // seconds, <= 0 for none
    std::function<void(Checks&)> body;
};

std::string g_cli;
fs::path g_workdir;

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// --- 1 ---------------------------------------------------------------------
void c1_manufactured_poisson(Checks& c) {
    auto error_at = [](int n) {
        auto g = build_grid(n, n);
        auto m = full_mask(g);
        auto s = assemble(lap, MeasureWeights::zero(g), m);
        return l2_distance(solve(s, scaled_sinsin(m, 2.0 * pi * pi)), scaled_sinsin(m, 1.0));
    };
    const double e33 = error_at(33), e65 = error_at(65);
    const double ratio = e33 / e65;
    c.expect(ratio >= 3.5 && ratio <= 4.5, "error ratio 33/65 = " + fmt(ratio) + " in [3.5, 4.5]");
}

// --- 2 / 4 -------------------------------------------------------------------
struct BiLap {
    MaskPtr mask;
    Field f;
    NavierSolution sol;
};

BiLap bilap(int n) {
    auto m = full_mask(build_grid(n, n));
    auto f = scaled_sinsin(m, 4.0 * std::pow(pi, 4));
    auto sol = solve_navier(lap, lap, f, m);
    return {m, f, std::move(sol)};
}

void c2_manufactured_navier(Checks& c) {
    const auto a = bilap(33), b = bilap(65);
    const double eu33 = l2_distance(a.sol.u, scaled_sinsin(a.mask, 1.0));
    const double eu65 = l2_distance(b.sol.u, scaled_sinsin(b.mask, 1.0));
    const auto v_exact = scaled_sinsin(b.mask, 2.0 * pi * pi);
    const double ev33 = l2_distance(a.sol.v, scaled_sinsin(a.mask, 2.0 * pi * pi));
    const double ev65 = l2_distance(b.sol.v, v_exact);
    const double ru = eu33 / eu65, rv = ev33 / ev65;
    const double v_rel = ev65 / l2_norm(v_exact);
    c.expect(ru >= 3.5 && ru <= 4.5, "u error ratio = " + fmt(ru) + " in [3.5, 4.5]");
    c.expect(rv >= 3.5 && rv <= 4.5, "v error ratio = " + fmt(rv) + " in [3.5, 4.5]");
    c.expect(v_rel <= 1e-3, "v vs 2 pi^2 sin sin, relative L2 = " + fmt(v_rel) + " <= 1e-3");
}

// --- 3 -----------------------------------------------------------------------
void c3_factorization(Checks& c) {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.2, 3.0);
    auto random_elliptic = [&] {
        for (;;) {
            Quadratic2 q{pos(rng), u(rng), pos(rng)};
            if (q.a11 * q.a22 - q.a12 * q.a12 > 0.05) return q;
        }
    };
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
        const auto q = random_elliptic(), r = random_elliptic();
        const auto f = factor_quartic(compose(q, r));
        Quadratic2 uq = unit_leading(q), ur = unit_leading(r);
        if (std::make_pair(ur.a12, ur.a22) < std::make_pair(uq.a12, uq.a22)) std::swap(uq, ur);
        const double k = q.a11 * r.a11;
        const double d[] = {f.first.a11 - uq.a11,     f.first.a12 - uq.a12,     f.first.a22 - uq.a22,
                            f.second.a11 - k * ur.a11, f.second.a12 - k * ur.a12, f.second.a22 - k * ur.a22};
        for (double x : d) worst = std::max(worst, std::abs(x));
    }
    c.expect(worst <= 1e-8, "100 random pairs, max coefficient error = " + fmt(worst) + " <= 1e-8");

    const auto ex = factor_quartic(Quartic2{1, 0, 3, 0, 2});
    const double e = std::max({std::abs(ex.first.a11 - 1), std::abs(ex.first.a12), std::abs(ex.first.a22 - 1),
                               std::abs(ex.second.a11 - 1), std::abs(ex.second.a12), std::abs(ex.second.a22 - 2)});
    c.expect(e <= 1e-10, "(1,0,3,0,2) -> " + to_string(ex.first) + " * " + to_string(ex.second) +
                             ", error = " + fmt(e) + " <= 1e-10");
}

// --- 4 -----------------------------------------------------------------------
void c4_formulation_ii(Checks& c) {
    const auto b = bilap(65);
    const double res = check_formulation_ii(b.sol, b.f, 20, 42);
    c.expect(res <= 1e-8, "20 trials, max residual = " + fmt(res) + " <= 1e-8");

    std::mt19937_64 rng(42);
    auto noisy = b.sol;
    noisy.u += 1e-3 * random_field(b.mask, rng);
    const double pert = check_formulation_ii(noisy, b.f, 20, 42);
    c.expect(pert > 1e-5, "1e-3 noise on u gives residual = " + fmt(pert) + " > 1e-5");
}

// --- 5 -----------------------------------------------------------------------
void c5_resolvent(Checks& c) {
    auto g = build_grid(33, 33);
    auto m = full_mask(g);
    std::mt19937_64 rng(5);

    Resolvent r(Quadratic2{1, 0.25, 1.5}, MeasureWeights::constant(g, 0.5), m);
    double sym = 0.0, inv = 0.0;
    for (int t = 0; t < 50; ++t) {
        auto h = random_field(m, rng), k = random_field(m, rng);
        sym = std::max(sym, symmetry_defect(r, h, k) / (l2_norm(h) * l2_norm(k)));
        inv = std::max(inv, l2_distance(lambda_apply(r, resolvent_apply(r, h)), h) / l2_norm(h));
    }
    c.expect(sym <= 1e-9, "symmetry defect / (|h||g|) = " + fmt(sym) + " <= 1e-9 (50 pairs)");
    c.expect(inv <= 1e-8, "Lambda R = id, relative error = " + fmt(inv) + " <= 1e-8");

    auto zero = MeasureWeights::zero(g), one = MeasureWeights::constant(g, 1.0);
    const double s0 = single_equation_check(lap, lap, zero, zero, scaled_sinsin(m, 4.0 * std::pow(pi, 4)), 20);
    const auto inst = nosol_instance(g);
    const double s1 = single_equation_check(lap, lap, one, one, inst.f, 20);
    c.expect(s0 <= 1e-8, "single equation, mu = 0: " + fmt(s0) + " <= 1e-8");
    c.expect(s1 <= 1e-8, "single equation, mu = 1: " + fmt(s1) + " <= 1e-8");
}

// --- 6 -----------------------------------------------------------------------
void c6_nosol(Checks& c) {
    auto g = build_grid(65, 65);
    const auto inst = nosol_instance(g);
    auto one = MeasureWeights::constant(g, 1.0);
    const auto sol = solve_relaxed_system(lap, lap, one, one, inst.f);
    const double err = max_abs(sol.u - inst.w);
    c.expect(err <= 1e-9, "m = 1 recovers w, max error = " + fmt(err) + " <= 1e-9");

    const auto j = Objective::tracking(inst.w);
    const double j1 = evaluate_J(one, lap, lap, inst.f, j);
    c.expect(j1 <= 1e-12, "J(m = 1) = " + fmt(j1) + " <= 1e-12");

    const auto cmp = compare_with_domains(lap, lap, inst.f, j, default_probes(), one);
    double min_probe = INFINITY;
    int evaluated = 0;
    for (const auto& p : cmp.probes) {
        if (p.skipped) continue;
        ++evaluated;
        min_probe = std::min(min_probe, p.J);
    }
    c.expect(evaluated > 0 && min_probe >= 1e-4,
             std::to_string(evaluated) + " classical probes, min J = " + fmt(min_probe) + " (" + cmp.best_name +
                 ") >= 1e-4");

    const auto st = optimize(lap, lap, inst.f, j, MeasureWeights::zero(g), 100);
    c.expect(st.J.back() < min_probe, "optimizer from m = 0 reaches J = " + fmt(st.J.back()) + " after " +
                                          std::to_string(st.iterations) + " iterations < best probe");
}

// --- 7 -----------------------------------------------------------------------
void c7_gradient(Checks& c) {
    auto g = build_grid(17, 17);
    auto m = full_mask(g);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    std::vector<double> w(g.size());
    for (auto& x : w) x = u(rng);
    MeasureWeights weights(g, w);
    const auto inst = nosol_instance(g);
    const auto j = Objective::tracking(inst.w);
    const Quadratic2 a{1, 0, 1}, b{1, 0, 2};
    const auto gr = gradient_J(weights, a, b, inst.f, j);

    std::uniform_int_distribution<int> pick(1, g.nx() - 2);
    const double step = 1e-5;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const int k = g.index(pick(rng), pick(rng));
        auto mp = weights, mm = weights;
        mp.set(k, weights[k] + step);
        mm.set(k, weights[k] - step);
        const double fd = (evaluate_J(mp, a, b, inst.f, j) - evaluate_J(mm, a, b, inst.f, j)) / (2.0 * step);
        worst = std::max(worst, std::abs(fd - gr.gradient[k]) / std::abs(fd));
    }
    c.expect(worst <= 1e-5, "max relative error on 10 nodes = " + fmt(worst) + " <= 1e-5");
}

// --- 8 -----------------------------------------------------------------------
void c8_homogenization(Checks& c) {
    {
        auto g = build_grid(33, 33);
        auto f = Field::sample(full_mask(g), [](double, double) { return 1.0; });
        auto m3 = MeasureWeights::constant(g, 3.0);
        const auto target = solve_relaxed_system(lap, lap, m3, m3, f).u;
        const auto fit = fit_constant_mu(lap, lap, f, target);
        c.expect(std::abs(fit.m_star - 3.0) <= 1e-3, "planted m = 3, fitted m* = " + fmt(fit.m_star));
    }
    auto g = build_grid(129, 129);
    auto f = Field::sample(full_mask(g), [](double, double) { return 1.0; });
    const auto rule = PerforationRule::power(0.1, 1.0);
    const auto table = convergence_experiment(lap, lap, f, rule, {2, 3, 4});
    for (const auto& row : table.rows) {
        c.expect(row.dist_to_fitted < row.dist_to_full && row.dist_to_fitted < row.dist_to_pinned,
                 "n=" + std::to_string(row.n) + ": fitted " + fmt(row.dist_to_fitted) + " < m=0 " +
                     fmt(row.dist_to_full) + ", pinned " + fmt(row.dist_to_pinned) + " (m*=" + fmt(row.m_star) + ")");
    }
    for (const auto& s : fit_stability(table)) {
        if (!s.ok) {
            std::printf("  note: m* changed by %.1f%% between n=%d and n=%d\n", 100.0 * s.relative_change, s.n_prev,
                        s.n_next);
        }
    }
}

// --- 9 -----------------------------------------------------------------------
void c9_monotonicity(Checks& c) {
    auto g = build_grid(33, 33);
    auto full = full_mask(g);
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    constexpr double slack = -1e-12;
    auto zero = MeasureWeights::zero(g);

    double worst_pos = INFINITY, worst_m = INFINITY, worst_u = INFINITY;
    for (int t = 0; t < 20; ++t) {
        auto f = random_field(full, rng, 0.0, 1.0);
        auto u = solve(assemble(lap, zero, full), f);
        for (int k = 0; k < g.size(); ++k) worst_pos = std::min(worst_pos, u[k]);
    }
    for (int t = 0; t < 20; ++t) {
        auto f = random_field(full, rng, 0.0, 1.0);
        std::vector<double> m1(g.size()), m2(g.size());
        for (int k = 0; k < g.size(); ++k) {
            m1[k] = 10.0 * u01(rng);
            m2[k] = m1[k] + 10.0 * u01(rng);
        }
        auto u1 = solve(assemble(lap, MeasureWeights(g, m1), full), f);
        auto u2 = solve(assemble(lap, MeasureWeights(g, m2), full), f);
        for (int k = 0; k < g.size(); ++k) worst_m = std::min(worst_m, u1[k] - u2[k]);
    }
    for (int t = 0; t < 20; ++t) {
        auto f = random_field(full, rng, 0.0, 1.0);
        // U1 subset of U2: both random unions of a disc and a rectangle, U1 cut further
        const double cx = 0.3 + 0.4 * u01(rng), cy = 0.3 + 0.4 * u01(rng), r = 0.15 + 0.2 * u01(rng);
        const Shape big = Shape::unite(Shape::disc(cx, cy, r), Shape::rectangle({0.1, 0.1, 0.1 + 0.5 * u01(rng), 0.6}));
        const Shape small = Shape::minus(big, Shape::disc(cx + 0.1 * (u01(rng) - 0.5), cy, 0.3 * r));
        auto m_big = mask_from_spec(g, big), m_small = mask_from_spec(g, small);
        // domain restriction through infinite weights on the full mask
        auto u_big = solve(assemble(lap, MeasureWeights::pinned_outside(*m_big), full), f);
        auto u_small = solve(assemble(lap, MeasureWeights::pinned_outside(*m_small), full), f);
        for (int k = 0; k < g.size(); ++k) worst_u = std::min(worst_u, u_big[k] - u_small[k]);
    }
    c.expect(worst_pos >= slack, "f >= 0 => u >= 0, min u = " + fmt(worst_pos));
    c.expect(worst_m >= slack, "m1 <= m2 => u1 >= u2, min(u1 - u2) = " + fmt(worst_m));
    c.expect(worst_u >= slack, "U1 in U2 => u_U1 <= u_U2, min(u_U2 - u_U1) = " + fmt(worst_u));
}

// --- 10 ----------------------------------------------------------------------
void c10_determinism(Checks& c) {
    const fs::path d1 = g_workdir / "nosol_a", d2 = g_workdir / "nosol_b";
    fs::remove_all(d1);
    fs::remove_all(d2);
    const int rc1 = run_cli("nosol --out " + d1.string());
    const int rc2 = run_cli("nosol --out " + d2.string());
    c.expect(rc1 == 0 && rc2 == 0, "exit codes " + std::to_string(rc1) + ", " + std::to_string(rc2));
    if (rc1 != 0 || rc2 != 0) return;
    int files = 0;
    bool same = true;
    for (const auto& e : fs::directory_iterator(d1)) {
        if (e.path().extension() != ".csv") continue;
        ++files;
        const fs::path other = d2 / e.path().filename();
        if (!fs::exists(other) || read_file(e.path()) != read_file(other)) {
            same = false;
            c.expect(false, e.path().filename().string() + " differs");
        }
    }
    c.expect(files > 0 && same, std::to_string(files) + " CSV files byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string key = argv[i];
        if (key == "--cli") g_cli = argv[i + 1];
        else if (key == "--workdir") g_workdir = argv[i + 1];
    }
    if (g_cli.empty() || g_workdir.empty()) {
        std::fprintf(stderr, "usage: acceptance --cli <navier_lab> --workdir <dir>\n");
        return 2;
    }
    fs::create_directories(g_workdir);

    const std::vector<Criterion> criteria{
        {1, "manufactured second-order solve", 5.0, c1_manufactured_poisson},
        {2, "manufactured Navier bi-laplacian", 10.0, c2_manufactured_navier},
        {3, "factorization round trip", 1.0, c3_factorization},
        {4, "formulation (ii) discrete check", 0.0, c4_formulation_ii},
        {5, "resolvent algebra", 0.0, c5_resolvent},
        {6, "relaxed recovery / nosol identity", 60.0, c6_nosol},
        {7, "adjoint gradient vs finite differences", 0.0, c7_gradient},
        {8, "homogenization fit", 120.0, c8_homogenization},
        {9, "monotonicity suite", 0.0, c9_monotonicity},
        {10, "determinism of nosol outputs", 0.0, c10_determinism},
    };

    int failed = 0;
    for (const auto& cr : criteria) {
        Checks c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.time_limit > 0.0) c.expect(secs < cr.time_limit, "runtime < " + fmt(cr.time_limit) + " s");
        if (!c.ok) ++failed;
        std::printf("%s [%2d] %s (%.2f s): %s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name.c_str(), secs,
                    c.detail.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
