#include "navier/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "navier/fourth_order.hpp"
#include "navier/io.hpp"
#include "navier/relaxed_solver.hpp"
#include "navier/resolvent.hpp"
#include "navier/shape_opt.hpp"

namespace navier::cli {

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Solve, "solve"},         {Command::Factor, "factor"},     {Command::Navier, "navier"},
    {Command::Equiv, "equiv"},         {Command::Homogenize, "homogenize"}, {Command::Optimize, "optimize"},
    {Command::Nosol, "nosol"},
};

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += sep;
        s += parts[i];
    }
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::optional<double> to_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long long> to_integer(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

struct Entry {
    std::string value;
    std::string where;
};

class Reader {
public:
    Reader(std::map<std::string, Entry> entries, std::vector<std::string>& errors)
        : entries_(std::move(entries)), errors_(errors) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }
    const Entry* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    void error(const std::string& key, const std::string& msg) {
        const Entry* e = find(key);
        errors_.push_back((e ? e->where + ": " : std::string()) + msg);
    }

    std::optional<double> number(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        auto v = to_double(e->value);
        if (!v) error(key, "malformed number for '" + key + "': '" + e->value + "'");
        return v;
    }

    std::optional<long long> integer(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        auto v = to_integer(e->value);
        if (!v) error(key, "malformed integer for '" + key + "': '" + e->value + "'");
        return v;
    }

    std::optional<std::vector<double>> numbers(const std::string& key, std::size_t count) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        std::vector<double> out;
        for (const auto& tok : split(e->value, ',')) {
            auto v = to_double(tok);
            if (!v) {
                error(key, "malformed number for '" + key + "': '" + tok + "'");
                return std::nullopt;
            }
            out.push_back(*v);
        }
        if (count && out.size() != count) {
            error(key, "'" + key + "' takes " + std::to_string(count) + " comma-separated numbers");
            return std::nullopt;
        }
        return out;
    }

    std::optional<std::string> text(const std::string& key) const {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        return e->value;
    }

private:
    std::map<std::string, Entry> entries_;
    std::vector<std::string>& errors_;
};

// "kind:payload" or bare "kind"
std::pair<std::string, std::string> tagged(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos) return {s, {}};
    return {trim(std::string_view(s).substr(0, pos)), trim(std::string_view(s).substr(pos + 1))};
}

}  // namespace

std::optional<Command> command_from_name(std::string_view name) {
    for (const auto& [c, n] : kCommands) {
        if (n == name) return c;
    }
    return std::nullopt;
}

std::string_view command_name(Command c) {
    for (const auto& [cc, n] : kCommands) {
        if (cc == c) return n;
    }
    return "?";
}

ConfigError::ConfigError(std::vector<std::string> messages)
    : Error("configuration error: " + join(messages, "; ")), messages_(std::move(messages)) {}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys{
        "nx",  "ny",  "rect",  "quartic", "c40",  "c31",   "c22", "c13",      "c04",    "A",
        "B",   "order", "mask", "weights", "rhs", "seed", "trials", "rule", "ns", "instance",
        "target", "iters", "out",
    };
    return keys;
}

std::pair<Quadratic2, Quadratic2> RunConfig::operator_pair() const {
    if (quartic) {
        const Factorization fz = factor_quartic(*quartic);
        if (swap_order) return {fz.second, fz.first};
        return {fz.first, fz.second};
    }
    const Quadratic2 lap = Quadratic2::laplacian();
    return {a.value_or(lap), b.value_or(a.value_or(lap))};
}

RunConfig parse_config(std::string_view text, Command command, const Overrides& overrides) {
    std::vector<std::string> errors;
    std::map<std::string, Entry> entries;
    const auto& keys = known_keys();
    auto accept = [&](const std::string& key, const std::string& value, const std::string& where) {
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            errors.push_back(where + ": unknown key '" + key + "'");
            return;
        }
        entries[key] = Entry{value, where};
    };

    int lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto nl = text.find('\n', start);
        std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        ++lineno;
        start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            errors.push_back(where + ": expected key=value, got '" + stripped + "'");
            continue;
        }
        accept(trim(std::string_view(stripped).substr(0, eq)), trim(std::string_view(stripped).substr(eq + 1)), where);
    }
    for (const auto& [k, v] : overrides) accept(k, trim(v), "flag --" + k);

    Reader rd(std::move(entries), errors);
    RunConfig cfg;
    cfg.command = command;
    if (command == Command::Nosol || command == Command::Optimize) cfg.nx = cfg.ny = 65;

    if (auto v = rd.integer("nx")) {
        if (*v < 3) rd.error("nx", "nx must be ≥ 3");
        cfg.nx = static_cast<int>(*v);
        cfg.ny = cfg.nx;
    }
    if (auto v = rd.integer("ny")) {
        if (*v < 3) rd.error("ny", "ny must be ≥ 3");
        cfg.ny = static_cast<int>(*v);
    }
    if (auto v = rd.numbers("rect", 4)) {
        cfg.rect = {(*v)[0], (*v)[1], (*v)[2], (*v)[3]};
        if (!(cfg.rect.x1 > cfg.rect.x0) || !(cfg.rect.y1 > cfg.rect.y0)) rd.error("rect", "degenerate rectangle");
    }

    // operator: a quartic (whole or by coefficient) or an explicit A/B pair
    const bool coeff_flags = rd.has("c40") || rd.has("c31") || rd.has("c22") || rd.has("c13") || rd.has("c04");
    if (auto v = rd.numbers("quartic", 5)) cfg.quartic = Quartic2{(*v)[0], (*v)[1], (*v)[2], (*v)[3], (*v)[4]};
    if (coeff_flags) {
        Quartic2 q = cfg.quartic.value_or(Quartic2{0, 0, 0, 0, 0});
        if (auto v = rd.number("c40")) q.c40 = *v;
        if (auto v = rd.number("c31")) q.c31 = *v;
        if (auto v = rd.number("c22")) q.c22 = *v;
        if (auto v = rd.number("c13")) q.c13 = *v;
        if (auto v = rd.number("c04")) q.c04 = *v;
        cfg.quartic = q;
    }
    if (auto v = rd.numbers("A", 3)) cfg.a = Quadratic2{(*v)[0], (*v)[1], (*v)[2]};
    if (auto v = rd.numbers("B", 3)) cfg.b = Quadratic2{(*v)[0], (*v)[1], (*v)[2]};
    const bool has_quartic = rd.has("quartic") || coeff_flags;
    const bool has_pair = rd.has("A") || rd.has("B");
    if (has_quartic && has_pair) {
        errors.push_back("exactly one operator form: give quartic= or A=/B=, not both");
    }
    if (auto o = rd.text("order")) {
        if (*o == "ab") {
            cfg.swap_order = false;
        } else if (*o == "ba") {
            cfg.swap_order = true;
        } else {
            rd.error("order", "order must be 'ab' or 'ba'");
        }
    }

    switch (command) {
        case Command::Solve:
            if (has_quartic) errors.push_back("solve takes a second-order operator A=, not quartic=");
            if (!rd.has("A")) errors.push_back("missing required key 'A'");
            break;
        case Command::Factor:
            if (!has_quartic) errors.push_back("missing required key 'quartic' (or c40..c04)");
            if (has_pair) errors.push_back("factor takes quartic=, not A=/B=");
            break;
        case Command::Navier:
        case Command::Equiv:
        case Command::Homogenize:
            if (!has_quartic && !has_pair) errors.push_back("missing operator: give quartic= or A= and B=");
            if (!has_quartic && rd.has("A") && !rd.has("B")) errors.push_back("missing required key 'B'");
            if (!has_quartic && rd.has("B") && !rd.has("A")) errors.push_back("missing required key 'A'");
            break;
        case Command::Optimize:
        case Command::Nosol:
            break;
    }
    if (cfg.a && !is_elliptic(*cfg.a)) rd.error("A", "A is not elliptic");
    if (cfg.b && !is_elliptic(*cfg.b)) rd.error("B", "B is not elliptic");
    if (cfg.quartic && command != Command::Factor && !(has_quartic && has_pair)) {
        try {
            (void)factor_quartic(*cfg.quartic);
        } catch (const Error& e) {
            errors.push_back(std::string("quartic does not factor: ") + e.what());
        }
    }

    if (auto m = rd.text("mask")) {
        cfg.mask_expr = *m;
        try {
            cfg.mask = parse_shape(*m);
        } catch (const Error& e) {
            rd.error("mask", e.what());
        }
    }

    if (auto w = rd.text("weights")) {
        auto [kind, payload] = tagged(*w);
        if (kind == "file") {
            cfg.weights = {WeightSpec::Kind::File, 0.0, payload};
        } else {
            const std::string num = kind == "const" ? payload : *w;
            auto v = to_double(num);
            if (!v || *v < 0.0) {
                rd.error("weights", "weights must be a nonnegative number, const:<c> or file:<path>");
            } else {
                cfg.weights = {WeightSpec::Kind::Constant, *v, {}};
            }
        }
    }

    if (auto r = rd.text("rhs")) {
        auto [kind, payload] = tagged(*r);
        if (kind == "file") {
            cfg.rhs = {RhsSpec::Kind::File, 0.0, payload};
        } else if (kind == "sinsin") {
            auto v = payload.empty() ? std::optional<double>(1.0) : to_double(payload);
            if (!v) rd.error("rhs", "malformed sinsin amplitude '" + payload + "'");
            cfg.rhs = {RhsSpec::Kind::SinSin, v.value_or(1.0), {}};
        } else {
            const std::string num = kind == "const" ? payload : *r;
            auto v = to_double(num);
            if (!v) rd.error("rhs", "rhs must be a number, const:<c>, sinsin[:<amplitude>] or file:<path>");
            cfg.rhs = {RhsSpec::Kind::Constant, v.value_or(0.0), {}};
        }
    }

    if (auto v = rd.integer("seed")) {
        if (*v < 0) rd.error("seed", "seed must be >= 0");
        cfg.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = rd.integer("trials")) {
        if (*v < 1) rd.error("trials", "trials must be >= 1");
        cfg.trials = static_cast<int>(*v);
    }
    if (auto v = rd.integer("iters")) {
        if (*v < 0) rd.error("iters", "iters must be >= 0");
        cfg.iters = static_cast<int>(*v);
    }

    if (auto r = rd.text("rule")) {
        auto [kind, payload] = tagged(*r);
        auto parts = split(payload, ',');
        std::optional<double> c;
        std::optional<double> p;
        if (parts.size() == 2) {
            c = to_double(parts[0]);
            p = to_double(parts[1]);
        }
        if ((kind != "power" && kind != "exp") || !c || !p || *c <= 0.0) {
            rd.error("rule", "rule must be power:<c>,<p> or exp:<c>,<kappa> with c > 0");
        } else {
            cfg.rule = kind == "power" ? PerforationRule::power(*c, *p) : PerforationRule::exponential(*c, *p);
        }
    }
    if (auto s = rd.text("ns")) {
        cfg.ns.clear();
        for (const auto& tok : split(*s, ',')) {
            auto v = to_integer(tok);
            if (!v || *v < 1) {
                rd.error("ns", "ns must be a comma-separated list of positive integers");
                break;
            }
            cfg.ns.push_back(static_cast<int>(*v));
        }
    }

    if (auto s = rd.text("instance")) {
        if (*s != "nosol" && *s != "tracking-file") rd.error("instance", "instance must be nosol or tracking-file");
        cfg.instance = *s;
    }
    if (auto s = rd.text("target")) cfg.target = *s;
    if (command == Command::Optimize && cfg.instance == "tracking-file" && cfg.target.empty()) {
        errors.push_back("missing required key 'target' for instance=tracking-file");
    }
    if (auto s = rd.text("out")) cfg.out = *s;

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

// ---------------------------------------------------------------------------
// run

namespace {

using Outputs = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void status_line(std::ostream& out, double J, long iters, double residual) {
    out << "status=ok J=" << fmt(J) << " iters=" << iters << " residual=" << fmt(residual) << "\n";
}

// Everything that can fail for configuration reasons is built up front.
struct Setup {
    Grid grid;
    MaskPtr full;
    MaskPtr mask;
};

Setup make_setup(const RunConfig& cfg) {
    Grid g(cfg.nx, cfg.ny, cfg.rect);
    MaskPtr full = full_mask(g);
    MaskPtr mask = mask_from_spec(g, cfg.mask);
    return {g, full, mask};
}

Field make_rhs(const RunConfig& cfg, const MaskPtr& mask) {
    constexpr double pi = std::numbers::pi;
    switch (cfg.rhs.kind) {
        case RhsSpec::Kind::Constant:
            return Field::sample(mask, [&](double, double) { return cfg.rhs.value; });
        case RhsSpec::Kind::SinSin: {
            const Rect& R = mask->grid().rect();
            return Field::sample(mask, [&](double x, double y) {
                return cfg.rhs.value * std::sin(pi * (x - R.x0) / (R.x1 - R.x0)) *
                       std::sin(pi * (y - R.y0) / (R.y1 - R.y0));
            });
        }
        case RhsSpec::Kind::File:
            return field_from_csv(read_file(cfg.rhs.path), mask);
    }
    return Field(mask);
}

MeasureWeights make_weights(const RunConfig& cfg, const Grid& g) {
    if (cfg.weights.kind == WeightSpec::Kind::Constant) return MeasureWeights::constant(g, cfg.weights.value);
    const std::string text = read_file(cfg.weights.path);
    // read through a full mask so boundary values are ignored rather than rejected
    const Field raw = field_from_csv(text, full_mask(g));
    std::vector<double> w(raw.values().begin(), raw.values().end());
    return MeasureWeights(g, std::move(w));
}

int run_solve(const RunConfig& cfg, const Setup& s, std::ostream& out, Outputs& files) {
    const Field f = make_rhs(cfg, s.mask);
    const MeasureWeights m = make_weights(cfg, s.grid);
    const SpdSystem sys = assemble(*cfg.a, m, s.mask);
    const SolveReport rep = solve_report(sys, f);
    files.push_back({"u.csv", field_to_csv(rep.u)});
    files.push_back({"u.pgm", field_to_pgm(rep.u)});
    out << "{\"iterations\": " << rep.iterations << ", \"residual\": " << fmt(rep.residual)
        << ", \"l2_norm\": " << fmt(l2_norm(rep.u)) << "}\n";
    status_line(out, NAN, rep.iterations, rep.residual);
    return 0;
}

int run_factor(const RunConfig& cfg, std::ostream& out) {
    const Quartic2 p = *cfg.quartic;
    const Factorization fz = factor_quartic(p);
    out << "quartic = " << to_string(p) << "\n";
    out << "first   = " << to_string(fz.first) << "\n";
    out << "second  = " << to_string(fz.second) << "\n";
    out << "residual = " << fmt(fz.residual) << "\n";
    out << "order ab: A = first, B = second (B A u = f); order ba swaps them\n";
    status_line(out, NAN, fz.root_iterations, fz.residual);
    return 0;
}

int run_navier(const RunConfig& cfg, const Setup& s, std::ostream& out, Outputs& files) {
    const auto [a, b] = cfg.operator_pair();
    const Field f = make_rhs(cfg, s.mask);
    const NavierSolution sol = solve_navier(a, b, f, s.mask);
    files.push_back({"u.csv", field_to_csv(sol.u)});
    files.push_back({"v.csv", field_to_csv(sol.v)});
    files.push_back({"u.pgm", field_to_pgm(sol.u)});
    files.push_back({"v.pgm", field_to_pgm(sol.v)});
    out << "A = " << to_string(a) << "  B = " << to_string(b) << "\n";
    out << "l2_norm(u) = " << fmt(l2_norm(sol.u)) << "  l2_norm(v) = " << fmt(l2_norm(sol.v)) << "\n";
    status_line(out, NAN, sol.iterations, sol.max_residual);
    return 0;
}

int run_equiv(const RunConfig& cfg, const Setup& s, std::ostream& out, Outputs& files) {
    const auto [a, b] = cfg.operator_pair();
    const Field f = make_rhs(cfg, s.mask);
    const NavierSolution sol = solve_navier(a, b, f, s.mask);
    const auto res = formulation_ii_residuals(sol, f, cfg.trials, cfg.seed);
    std::string table = "# seed=" + std::to_string(cfg.seed) + "\ntrial,residual\n";
    char buf[64];
    for (std::size_t t = 0; t < res.size(); ++t) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g\n", t, res[t]);
        table += buf;
    }
    const MeasureWeights none = MeasureWeights::zero(s.grid);
    const Resolvent ra(a, none, s.mask);
    const Resolvent rb(b, none, s.mask);
    const double single = single_equation_residual(ra, rb, restrict_to(f, s.mask), sol.u, cfg.trials, cfg.seed);
    files.push_back({"equiv.csv", table});
    out << table;
    out << "single_equation_residual=" << fmt(single) << "\n";
    const double worst = res.empty() ? 0.0 : *std::max_element(res.begin(), res.end());
    status_line(out, NAN, static_cast<long>(res.size()), worst);
    return 0;
}

int run_homogenize(const RunConfig& cfg, const Setup& s, std::ostream& out, Outputs& files) {
    const auto [a, b] = cfg.operator_pair();
    const Field f = make_rhs(cfg, s.full);
    const ConvergenceTable table = convergence_experiment(a, b, f, cfg.rule, cfg.ns);
    files.push_back({"convergence.csv", table.to_csv()});
    files.push_back({"u_full.csv", field_to_csv(table.u_full)});
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        files.push_back({"u_n" + std::to_string(table.rows[i].n) + ".csv", field_to_csv(table.u_n[i])});
    }
    out << "rule " << cfg.rule.describe() << "\n" << table.to_csv();
    for (const auto& st : fit_stability(table)) {
        out << "m* stability n=" << st.n_prev << "->" << st.n_next << ": relative change "
            << fmt(st.relative_change) << (st.ok ? " (ok)" : " (above 25%, diagnostic only)") << "\n";
    }
    double worst_fit = 0.0;  // largest fitted-model distance
    for (const auto& row : table.rows) worst_fit = std::max(worst_fit, row.dist_to_fitted);
    status_line(out, NAN, static_cast<long>(table.rows.size()), worst_fit);
    return 0;
}

struct TrackingProblem {
    Quadratic2 a;
    Quadratic2 b;
    Field f;
    Field w;
};

TrackingProblem make_tracking(const RunConfig& cfg, const Setup& s) {
    const auto [a, b] = cfg.operator_pair();
    if (cfg.command == Command::Nosol || cfg.instance == "nosol") {
        NosolInstance inst = nosol_instance(s.grid);
        return {a, b, std::move(inst.f), std::move(inst.w)};
    }
    Field w = field_from_csv(read_file(cfg.target), s.full);
    return {a, b, make_rhs(cfg, s.full), std::move(w)};
}

int run_optimize(const RunConfig& cfg, const TrackingProblem& p, const Setup& s, std::ostream& out,
                 Outputs& files) {
    const Objective j = Objective::tracking(p.w);
    const OptState st = optimize(p.a, p.b, p.f, j, MeasureWeights::zero(s.grid), cfg.iters);
    const NavierSolution sol = solve_relaxed_system(p.a, p.b, st.m, st.m, p.f);
    files.push_back({"optstate.csv", st.to_csv()});
    files.push_back({"m_star.csv", weights_to_csv(st.m)});
    files.push_back({"u_star.csv", field_to_csv(sol.u)});
    if (st.line_search_failed) out << "warning: line search failed after 40 halvings\n";
    out << (st.converged ? "converged" : "iteration cap reached") << " after " << st.iterations << " iterations\n";
    status_line(out, st.J.back(), st.iterations, st.gradnorm.back());
    return 0;
}

int run_nosol(const RunConfig& cfg, const TrackingProblem& p, const Setup& s, std::ostream& out, Outputs& files) {
    const Objective j = Objective::tracking(p.w);
    const OptState st = optimize(p.a, p.b, p.f, j, MeasureWeights::zero(s.grid), cfg.iters);
    // m = 1 is the relaxed minimizer by construction of f
    const MeasureWeights unit = MeasureWeights::constant(s.grid, 1.0);
    const DomainComparison cmp = compare_with_domains(p.a, p.b, p.f, j, default_probes(), unit);
    std::string table = cmp.to_csv();
    table += "optimizer_from_zero," + [&] {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", st.J.back());
        return std::string(buf);
    }() + "\n";
    files.push_back({"gap.csv", table});
    files.push_back({"optstate.csv", st.to_csv()});
    files.push_back({"m_star.csv", weights_to_csv(st.m)});
    files.push_back({"u_star.csv", field_to_csv(solve_relaxed_system(p.a, p.b, st.m, st.m, p.f).u)});

    for (const auto& pr : cmp.probes) {
        if (pr.skipped) out << "warning: probe " << pr.name << " skipped: " << pr.warning << "\n";
    }
    out << table;
    out << "best classical = " << fmt(cmp.best_classical) << " (" << cmp.best_name << ")  relaxed = "
        << fmt(cmp.relaxed) << "  gap = " << fmt(cmp.gap) << "\n";
    status_line(out, cmp.relaxed, st.iterations, st.gradnorm.back());
    return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::optional<Setup> setup;
    std::optional<TrackingProblem> tracking;
    try {
        setup = make_setup(cfg);
        if (cfg.command == Command::Optimize || cfg.command == Command::Nosol) tracking = make_tracking(cfg, *setup);
    } catch (const Error& e) {
        err << "configuration error: " << e.what() << "\n";
        return 2;
    }

    Outputs files;
    std::ostringstream report;
    try {
        int code = 0;
        switch (cfg.command) {
            case Command::Solve:
                code = run_solve(cfg, *setup, report, files);
                break;
            case Command::Factor:
                code = run_factor(cfg, report);
                break;
            case Command::Navier:
                code = run_navier(cfg, *setup, report, files);
                break;
            case Command::Equiv:
                code = run_equiv(cfg, *setup, report, files);
                break;
            case Command::Homogenize:
                code = run_homogenize(cfg, *setup, report, files);
                break;
            case Command::Optimize:
                code = run_optimize(cfg, *tracking, *setup, report, files);
                break;
            case Command::Nosol:
                code = run_nosol(cfg, *tracking, *setup, report, files);
                break;
        }
        if (code != 0) return code;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (!files.empty()) std::filesystem::create_directories(cfg.out);
        for (const auto& [name, contents] : files) write_file_atomic(cfg.out / name, contents);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    out << report.str();
    return 0;
}

}  // namespace navier::cli
