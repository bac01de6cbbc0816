#include "navier/shape_opt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "navier/error.hpp"

namespace navier {

// ---------------------------------------------------------------------------
// Objective

namespace {

double max_abs_values(const Field& q) { return max_abs(q); }

}  // namespace

Objective Objective::tracking(Field w) {
    Growth g;
    g.p = 2.0;
    g.beta = 2.0;
    g.b.resize(w.size());
    for (int k = 0; k < w.size(); ++k) g.b[k] = 2.0 * w[k] * w[k];
    return Objective(Kind::Tracking, std::move(w), std::move(g));
}

Objective Objective::weighted_quadratic(Field q) {
    Growth g;
    g.p = 2.0;
    g.beta = max_abs_values(q);
    g.b.assign(q.size(), 0.0);
    return Objective(Kind::WeightedQuadratic, std::move(q), std::move(g));
}

Objective Objective::linear(Field q) {
    Growth g;
    g.p = 2.0;
    g.beta = 0.5 * max_abs_values(q);
    g.b.resize(q.size());
    for (int k = 0; k < q.size(); ++k) g.b[k] = 0.5 * std::abs(q[k]);
    return Objective(Kind::Linear, std::move(q), std::move(g));
}

Objective::Objective(Kind kind, Field data, Growth growth)
    : kind_(kind), data_(std::move(data)), growth_(std::move(growth)) {
    validate_growth(*this);
}

double Objective::value(int k, double s) const {
    const double d = data_[k];
    switch (kind_) {
        case Kind::Tracking:
            return (s - d) * (s - d);
        case Kind::WeightedQuadratic:
            return d * s * s;
        case Kind::Linear:
            return d * s;
    }
    return 0.0;
}

double Objective::derivative(int k, double s) const {
    const double d = data_[k];
    switch (kind_) {
        case Kind::Tracking:
            return 2.0 * (s - d);
        case Kind::WeightedQuadratic:
            return 2.0 * d * s;
        case Kind::Linear:
            return d;
    }
    return 0.0;
}

void validate_growth(const Objective& j) {
    const auto& g = j.growth();
    // 2* is infinite in two dimensions: any finite exponent qualifies
    if (!std::isfinite(g.p) || g.p <= 0.0) throw InvalidArgument("growth exponent must be finite and positive");
    if (!(g.beta >= 0.0) || !std::isfinite(g.beta)) throw InvalidArgument("growth constant beta must be >= 0");
    if (static_cast<int>(g.b.size()) != j.data().size()) throw InvalidArgument("growth bound b has wrong size");
    for (double b : g.b) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw InvalidArgument("growth bound b must be finite and >= 0");
    }

    std::vector<double> samples{0.0};
    for (int e = -12; e <= 12; ++e) {
        const double s = std::pow(10.0, e / 4.0);
        samples.push_back(s);
        samples.push_back(-s);
    }
    for (int k = 0; k < j.data().size(); ++k) {
        for (double s : samples) {
            const double lhs = std::abs(j.value(k, s));
            const double rhs = g.b[k] + g.beta * std::pow(std::abs(s), g.p);
            if (lhs > rhs * (1.0 + 1e-12) + 1e-300) {
                char buf[192];
                std::snprintf(buf, sizeof buf,
                              "growth bound violated at node %d, s=%g: |j|=%g > b + beta|s|^p=%g (p=%g)", k, s,
                              lhs, rhs, g.p);
                throw InvalidArgument(buf);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Cost and gradient

namespace {

double integrate(const Objective& j, const Field& u) {
    double s = 0.0;
    for (int k = 0; k < u.size(); ++k) s += j.value(k, u[k]);
    return s * u.grid().cell_area();
}

void require_compatible(const MeasureWeights& m, const Field& f, const Objective& j) {
    if (!(m.grid() == f.grid()) || !(j.data().grid() == f.grid())) {
        throw InvalidArgument("weights, load and objective live on different grids");
    }
}

}  // namespace

double evaluate_J(const MeasureWeights& m, const Quadratic2& a, const Quadratic2& b, const Field& f,
                  const Objective& j, SolverOptions opts) {
    require_compatible(m, f, j);
    return integrate(j, solve_relaxed_system(a, b, m, m, f, opts).u);
}

GradientResult gradient_J(const MeasureWeights& m, const Quadratic2& a, const Quadratic2& b, const Field& f,
                          const Objective& j, SolverOptions opts) {
    require_compatible(m, f, j);
    if (!m.all_finite()) throw InvalidArgument("gradient_J needs finite weights");
    const MaskPtr& mask = f.mask_ptr();
    const SpdSystem sys_b = assemble(b, m, mask, opts);
    const SpdSystem sys_a = assemble(a, m, mask, opts);

    const Field v = solve(sys_b, f);
    const Field u = solve(sys_a, v);

    Field dj(mask);
    for (int k = 0; k < u.size(); ++k) {
        if (mask->is_free(k)) dj.set(k, j.derivative(k, u[k]));
    }
    // adjoints: (K_A + M) p = dJ/du, (K_B + M) q = p, both with lumped loads
    const Field p = solve(sys_a, dj);
    const Field q = solve(sys_b, p);

    GradientResult out;
    out.value = integrate(j, u);
    out.gradient.assign(u.size(), 0.0);
    const double area = f.grid().cell_area();
    for (int r = 0; r < sys_a.unknowns(); ++r) {
        const int k = sys_a.node_of(r);
        out.gradient[k] = -(u[k] * p[k] + v[k] * q[k]) * area;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Optimizer

std::string OptState::to_csv() const {
    std::string s = "iter,J,gradnorm,step\n";
    char buf[128];
    for (std::size_t i = 0; i < J.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, J[i], gradnorm[i], step[i]);
        s += buf;
    }
    return s;
}

OptState optimize(const Quadratic2& a, const Quadratic2& b, const Field& f, const Objective& j,
                  const MeasureWeights& m0, int max_iters, OptOptions opts) {
    if (!m0.all_finite()) throw InvalidArgument("optimize: initial weights must be finite");
    const Grid& g = f.grid();
    const double area = g.cell_area();
    const int n = g.size();

    OptState st{m0, {}, {}, {}, 0, false, false};

    GradientResult gr = gradient_J(st.m, a, b, f, j, opts.solver);
    auto projected_norm = [&](const MeasureWeights& m, const std::vector<double>& grad) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double pg = m[k] - std::max(0.0, m[k] - grad[k] / area);
            s += pg * pg;
        }
        return std::sqrt(s * area);
    };

    double J = gr.value;
    double pgnorm = projected_norm(st.m, gr.gradient);
    st.J.push_back(J);
    st.gradnorm.push_back(pgnorm);
    st.step.push_back(0.0);

    std::vector<double> trial(n);
    for (int it = 1; it <= max_iters; ++it) {
        if (pgnorm <= opts.stop_tol * (1.0 + std::abs(J))) {
            st.converged = true;
            break;
        }
        double t = opts.initial_step;
        bool accepted = false;
        double J_new = J;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            double decrease = 0.0;
            for (int k = 0; k < n; ++k) {
                trial[k] = std::max(0.0, st.m[k] - t * gr.gradient[k] / area);
                decrease += gr.gradient[k] * (trial[k] - st.m[k]);
            }
            const MeasureWeights m_trial(g, trial);
            J_new = evaluate_J(m_trial, a, b, f, j, opts.solver);
            if (J_new <= J + opts.armijo_c * decrease) {
                st.m = m_trial;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            st.line_search_failed = true;
            break;
        }
        gr = gradient_J(st.m, a, b, f, j, opts.solver);
        J = gr.value;
        pgnorm = projected_norm(st.m, gr.gradient);
        st.J.push_back(J);
        st.gradnorm.push_back(pgnorm);
        st.step.push_back(t);
        st.iterations = it;
    }
    if (!st.converged && !st.line_search_failed && pgnorm <= opts.stop_tol * (1.0 + std::abs(J))) {
        st.converged = true;
    }
    return st;
}

// ---------------------------------------------------------------------------
// Non-attainment instance and probe comparison

NosolInstance nosol_instance(const Grid& g) {
    if (!(g.rect() == Rect{0.0, 0.0, 1.0, 1.0})) throw InvalidArgument("nosol instance needs the unit square");
    const MaskPtr mask = full_mask(g);
    constexpr double pi = std::numbers::pi;
    Field w = Field::sample(mask, [](double x, double y) {
        const double s = std::sin(pi * x) * std::sin(pi * y);
        return s * s * s;
    });
    const SpdSystem s1 = assemble(Quadratic2::laplacian(), MeasureWeights::constant(g, 1.0), mask);
    Field f = apply(s1, apply(s1, w));
    return {std::move(w), std::move(f)};
}

std::vector<ProbeDomain> default_probes() {
    std::vector<ProbeDomain> p;
    p.push_back({"full", Shape::full()});
    for (double r : {0.2, 0.3, 0.4, 0.5, 0.6}) {
        char name[32];
        std::snprintf(name, sizeof name, "disc_r%g", r);
        p.push_back({name, Shape::disc(0.5, 0.5, r)});
    }
    for (double s : {0.1, 0.2, 0.3, 0.4}) {
        char name[32];
        std::snprintf(name, sizeof name, "square_h%g", s);
        p.push_back({name, Shape::rectangle({0.5 - s, 0.5 - s, 0.5 + s, 0.5 + s})});
    }
    p.push_back({"band", Shape::rectangle({0.05, 0.2, 0.95, 0.8})});
    p.push_back({"holes_n2", Shape::holes(2, 0.05)});
    p.push_back({"holes_n3", Shape::holes(3, 0.05)});
    p.push_back({"holes_n4", Shape::holes(4, 0.04)});
    return p;
}

std::string DomainComparison::to_csv() const {
    std::string s = "probe,J\n";
    char buf[160];
    for (const auto& p : probes) {
        if (p.skipped) {
            std::snprintf(buf, sizeof buf, "%s,skipped\n", p.name.c_str());
        } else {
            std::snprintf(buf, sizeof buf, "%s,%.17g\n", p.name.c_str(), p.J);
        }
        s += buf;
    }
    std::snprintf(buf, sizeof buf, "relaxed,%.17g\n", relaxed);
    s += buf;
    return s;
}

DomainComparison compare_with_domains(const Quadratic2& a, const Quadratic2& b, const Field& f,
                                      const Objective& j, const std::vector<ProbeDomain>& probes,
                                      const MeasureWeights& relaxed, SolverOptions opts) {
    if (probes.empty()) throw InvalidArgument("compare_with_domains: empty probe list");
    const Grid& g = f.grid();
    DomainComparison out;
    out.best_classical = INFINITY;
    for (const auto& probe : probes) {
        ProbeResult r{probe.name, false, {}, 0.0};
        MaskPtr mask;
        try {
            mask = mask_from_spec(g, probe.shape);
        } catch (const InvalidArgument& e) {
            r.skipped = true;
            r.warning = e.what();
            out.probes.push_back(r);
            continue;
        }
        r.J = evaluate_J(MeasureWeights::pinned_outside(*mask), a, b, f, j, opts);
        if (r.J < out.best_classical) {
            out.best_classical = r.J;
            out.best_name = r.name;
        }
        out.probes.push_back(r);
    }
    out.relaxed = evaluate_J(relaxed, a, b, f, j, opts);
    out.gap = out.best_classical - out.relaxed;
    return out;
}

}  // namespace navier
