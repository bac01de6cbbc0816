#include "navier/homogenization.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>

#include "navier/error.hpp"

namespace navier {

double PerforationRule::radius(int n) const {
    switch (kind) {
        case Kind::Power:
            return scale * std::pow(static_cast<double>(n), -exponent);
        case Kind::Exponential:
            return scale * std::exp(-exponent * static_cast<double>(n) * n);
    }
    return 0.0;
}

std::string PerforationRule::describe() const {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s(%g,%g)", kind == Kind::Power ? "power" : "exp", scale, exponent);
    return buf;
}

MaskPtr perforate(const Grid& g, const PerforationRule& rule, int n) {
    if (n < 1) throw InvalidArgument("perforate: n must be >= 1");
    const double r = rule.radius(n);
    if (!(r > 0.0)) throw InvalidArgument("perforate: radius must be positive");
    const Rect& R = g.rect();
    const double lx = R.x1 - R.x0;
    const double ly = R.y1 - R.y0;
    if (r >= 0.5 * std::min(lx, ly) / n) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "perforate: radius %g does not fit inside a cell at n=%d", r, n);
        throw InvalidArgument(buf);
    }
    if (r < 2.0 * std::max(g.hx(), g.hy())) {
        const int need = static_cast<int>(std::ceil(2.0 * std::max(lx, ly) / r)) + 1;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "radius unresolvable: radius %g at n=%d needs at least %d nodes per axis", r, n, need);
        throw InvalidArgument(buf);
    }
    return mask_from_spec(g, Shape::holes(n, r));
}

FitResult fit_constant_mu(const Quadratic2& a, const Quadratic2& b, const Field& f, const Field& u_target,
                          SolverOptions opts) {
    if (max_abs(u_target) == 0.0) throw InvalidArgument("fit_constant_mu: target is zero");
    const Grid& g = f.grid();

    FitResult out;
    double best_m = 0.0;
    double best_val = INFINITY;
    double lowest = INFINITY;
    double highest = 0.0;
    auto objective = [&](double m) {
        const MeasureWeights w = MeasureWeights::constant(g, m);
        const double d = l2_distance(solve_relaxed_system(a, b, w, w, f, opts).u, u_target);
        ++out.evaluations;
        if (d < best_val) {
            best_val = d;
            best_m = m;
        }
        lowest = std::min(lowest, d);
        highest = std::max(highest, d);
        return d;
    };

    // bracket: grow [lo, hi] by doubling until the objective turns upward
    double lo = 0.0;
    double mid = 1.0;
    double hi = 1.0;
    const double f0 = objective(0.0);
    double fmid = objective(1.0);
    if (fmid > f0) {
        hi = 1.0;
    } else {
        hi = 2.0;
        double fhi = objective(hi);
        while (fhi <= fmid && hi < 1e18) {
            lo = mid;
            mid = hi;
            fmid = fhi;
            hi *= 2.0;
            fhi = objective(hi);
        }
    }

    if (highest - lowest <= 1e-12 * highest) {
        out.flat = true;
        out.m_star = 0.0;
        out.distance = f0;
        return out;
    }

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - invphi * (hi - lo);
    double d = lo + invphi * (hi - lo);
    double fc = objective(c);
    double fd = objective(d);
    while (hi - lo > 1e-4 * std::max(0.5 * (lo + hi), 1e-3)) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = objective(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = objective(d);
        }
    }
    out.m_star = best_m;
    out.distance = best_val;
    return out;
}

std::string ConvergenceTable::to_csv() const {
    std::string s = "n,dist_to_full,dist_to_fitted,m_star\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", r.n, r.dist_to_full, r.dist_to_fitted, r.m_star);
        s += buf;
    }
    return s;
}

ConvergenceTable convergence_experiment(const Quadratic2& a, const Quadratic2& b, const Field& f,
                                        const PerforationRule& rule, const std::vector<int>& ns,
                                        SolverOptions opts) {
    const Grid& g = f.grid();
    std::vector<MaskPtr> masks;
    masks.reserve(ns.size());
    for (int n : ns) masks.push_back(perforate(g, rule, n));

    ConvergenceTable table{{}, solve_navier(a, b, f, f.mask_ptr(), opts).u, {}};

    struct Job {
        ConvergenceRow row;
        Field u;
    };
    std::vector<std::future<Job>> jobs;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
            const int n = ns[i];
            Field u = solve_navier(a, b, f, masks[i], opts).u;
            ConvergenceRow row;
            row.n = n;
            row.radius = rule.radius(n);
            row.free_nodes = masks[i]->free_count();
            row.dist_to_full = l2_distance(u, table.u_full);
            row.dist_to_pinned = l2_norm(u);
            if (max_abs(u) > 0.0) {
                const FitResult fit = fit_constant_mu(a, b, f, u, opts);
                row.m_star = fit.m_star;
                row.fit_flat = fit.flat;
                row.dist_to_fitted = fit.distance;
            }
            return Job{row, std::move(u)};
        }));
    }
    for (auto& j : jobs) {
        Job done = j.get();
        table.rows.push_back(done.row);
        table.u_n.push_back(std::move(done.u));
    }
    return table;
}

std::vector<StabilityCheck> fit_stability(const ConvergenceTable& table) {
    std::vector<StabilityCheck> out;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const auto& p = table.rows[i - 1];
        const auto& q = table.rows[i];
        const double scale = std::max(std::abs(p.m_star), std::abs(q.m_star));
        const double rel = scale > 0.0 ? std::abs(q.m_star - p.m_star) / scale : 0.0;
        out.push_back({p.n, q.n, rel, rel < 0.25});
    }
    return out;
}

}  // namespace navier
