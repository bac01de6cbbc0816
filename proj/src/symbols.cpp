#include "navier/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "navier/error.hpp"

namespace navier {

double Quartic2::symbol(double xi1, double xi2) const noexcept {
    const double x2 = xi1 * xi1;
    const double y2 = xi2 * xi2;
    return c40 * x2 * x2 + c31 * x2 * xi1 * xi2 + c22 * x2 * y2 + c13 * xi1 * xi2 * y2 + c04 * y2 * y2;
}

double ellipticity_margin(const Quadratic2& q) {
    const double mean = 0.5 * (q.a11 + q.a22);
    const double half_diff = 0.5 * (q.a11 - q.a22);
    return mean - std::hypot(half_diff, q.a12);
}

double ellipticity_margin(const Quartic2& p) {
    // The symbol is even, so theta in [0, pi) covers the circle.
    constexpr int samples = 720;
    constexpr double pi = std::numbers::pi;
    const double dtheta = pi / samples;
    auto on_circle = [&](double t) { return p.symbol(std::cos(t), std::sin(t)); };

    int best = 0;
    double best_val = on_circle(0.0);
    for (int s = 1; s < samples; ++s) {
        const double v = on_circle(s * dtheta);
        if (v < best_val) {
            best_val = v;
            best = s;
        }
    }

    // golden-section refinement on the bracketing sample interval
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = (best - 1) * dtheta;
    double b = (best + 1) * dtheta;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = on_circle(c);
    double fd = on_circle(d);
    for (int it = 0; it < 80 && (b - a) > 1e-15; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = on_circle(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = on_circle(d);
        }
    }
    // the axis directions exactly, then treat rounding-level values as zero
    const double m = std::min({best_val, fc, fd, p.c40, p.c04});
    const double scale = std::abs(p.c40) + std::abs(p.c31) + std::abs(p.c22) + std::abs(p.c13) + std::abs(p.c04);
    return std::abs(m) <= 1e-14 * scale ? 0.0 : m;
}

Quadratic2 sign_normalized(const Quadratic2& q) {
    if (q.a11 < 0.0) return {-q.a11, -q.a12, -q.a22};
    return q;
}

Quartic2 sign_normalized(const Quartic2& p) {
    if (p.c40 < 0.0) return {-p.c40, -p.c31, -p.c22, -p.c13, -p.c04};
    return p;
}

Quadratic2 unit_leading(const Quadratic2& q) {
    if (q.a11 == 0.0) throw InvalidArgument("unit_leading: a11 is zero");
    return {1.0, q.a12 / q.a11, q.a22 / q.a11};
}

Quartic2 compose(const Quadratic2& q, const Quadratic2& r) {
    return {
        q.a11 * r.a11,
        2.0 * (q.a11 * r.a12 + q.a12 * r.a11),
        q.a11 * r.a22 + 4.0 * q.a12 * r.a12 + q.a22 * r.a11,
        2.0 * (q.a12 * r.a22 + q.a22 * r.a12),
        q.a22 * r.a22,
    };
}

RootResult quartic_roots(const std::array<double, 5>& c, double tol, int max_iter) {
    using cplx = std::complex<double>;
    if (c[4] == 0.0) throw InvalidArgument("quartic_roots: leading coefficient is zero");
    std::array<double, 4> b{};
    double radius = 1.0;
    for (int k = 0; k < 4; ++k) {
        b[k] = c[k] / c[4];
        radius = std::max(radius, 1.0 + std::abs(b[k]));
    }
    auto eval = [&](cplx t) { return (((t + b[3]) * t + b[2]) * t + b[1]) * t + b[0]; };

    RootResult out{};
    for (int k = 0; k < 4; ++k) {
        out.roots[k] = std::polar(radius, 2.0 * std::numbers::pi * k / 4.0 + 0.4);
    }
    for (int it = 1; it <= max_iter; ++it) {
        double max_step = 0.0;
        for (int k = 0; k < 4; ++k) {
            cplx denom = 1.0;
            for (int j = 0; j < 4; ++j) {
                if (j != k) denom *= out.roots[k] - out.roots[j];
            }
            if (denom == cplx(0.0)) denom = cplx(1e-300);
            const cplx step = eval(out.roots[k]) / denom;
            out.roots[k] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0, std::abs(out.roots[k])));
        }
        out.iterations = it;
        if (max_step <= tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

namespace {

// monic quadratic factors t^2 + s t + q of a monic quartic
struct FactorPair {
    double s1, q1, s2, q2;
};

std::array<double, 4> pair_defect(const FactorPair& f, const std::array<double, 4>& b) {
    return {
        f.s1 + f.s2 - b[3],
        f.q1 + f.q2 + f.s1 * f.s2 - b[2],
        f.s1 * f.q2 + f.s2 * f.q1 - b[1],
        f.q1 * f.q2 - b[0],
    };
}

double max_abs4(const std::array<double, 4>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Newton iteration on the coefficient-matching equations.
FactorPair polish(FactorPair f, const std::array<double, 4>& b) {
    double err = max_abs4(pair_defect(f, b));
    for (int it = 0; it < 30 && err > 0.0; ++it) {
        const auto F = pair_defect(f, b);
        double J[4][5] = {
            {1.0, 0.0, 1.0, 0.0, -F[0]},
            {f.s2, 1.0, f.s1, 1.0, -F[1]},
            {f.q2, f.s2, f.q1, f.s1, -F[2]},
            {0.0, f.q2, 0.0, f.q1, -F[3]},
        };
        bool singular = false;
        for (int col = 0; col < 4; ++col) {
            int piv = col;
            for (int r = col + 1; r < 4; ++r) {
                if (std::abs(J[r][col]) > std::abs(J[piv][col])) piv = r;
            }
            if (std::abs(J[piv][col]) < 1e-13) {
                singular = true;
                break;
            }
            if (piv != col) std::swap(J[piv], J[col]);
            for (int r = col + 1; r < 4; ++r) {
                const double m = J[r][col] / J[col][col];
                for (int k = col; k < 5; ++k) J[r][k] -= m * J[col][k];
            }
        }
        if (singular) break;
        double dx[4];
        for (int r = 3; r >= 0; --r) {
            double s = J[r][4];
            for (int k = r + 1; k < 4; ++k) s -= J[r][k] * dx[k];
            dx[r] = s / J[r][r];
        }
        const FactorPair trial{f.s1 + dx[0], f.q1 + dx[1], f.s2 + dx[2], f.q2 + dx[3]};
        const double trial_err = max_abs4(pair_defect(trial, b));
        if (!(trial_err < err)) break;
        f = trial;
        err = trial_err;
    }
    return f;
}

bool lex_less(const Quadratic2& a, const Quadratic2& b) {
    if (a.a12 != b.a12) return a.a12 < b.a12;
    return a.a22 < b.a22;
}

double reconstruction_residual(const Quartic2& p, const Quadratic2& q, const Quadratic2& r) {
    const Quartic2 c = compose(q, r);
    const double scale = std::max({std::abs(p.c40), std::abs(p.c31), std::abs(p.c22),
                                   std::abs(p.c13), std::abs(p.c04)});
    const double err = std::max({std::abs(c.c40 - p.c40), std::abs(c.c31 - p.c31),
                                 std::abs(c.c22 - p.c22), std::abs(c.c13 - p.c13),
                                 std::abs(c.c04 - p.c04)});
    return err / scale;
}

}  // namespace

Factorization factor_quartic(const Quartic2& p) {
    if (!(ellipticity_margin(p) > 0.0)) throw InvalidArgument("not elliptic: " + to_string(p));

    // P(xi) = xi1^4 p(t), t = xi2 / xi1, with p(t) = c40 + c31 t + ... + c04 t^4.
    const RootResult rr = quartic_roots({p.c40, p.c31, p.c22, p.c13, p.c04});
    const std::array<double, 4> b{p.c40 / p.c04, p.c31 / p.c04, p.c22 / p.c04, p.c13 / p.c04};

    // Ellipticity excludes real roots; each upper-half-plane root is paired
    // with its conjugate, giving t^2 - 2 Re(t) t + |t|^2.
    auto roots = rr.roots;
    std::sort(roots.begin(), roots.end(), [](auto x, auto y) { return x.imag() > y.imag(); });
    const FactorPair from_roots{-2.0 * roots[0].real(), std::norm(roots[0]), -2.0 * roots[1].real(),
                                std::norm(roots[1])};

    std::array<FactorPair, 3> candidates{from_roots, polish(from_roots, b), from_roots};
    int n_candidates = 2;
    // Repeated pair: p(t) / c04 = (t^2 + s t + q)^2 has s = b3 / 2, q = (b2 - s^2) / 2.
    {
        const double s = 0.5 * b[3];
        const double q = 0.5 * (b[2] - s * s);
        candidates[2] = {s, q, s, q};
        ++n_candidates;
    }

    double best_residual = INFINITY;
    Factorization best{};
    for (int c = 0; c < n_candidates; ++c) {
        const FactorPair& f = candidates[c];
        // Conjugate pairs: negative discriminant and positive constant.
        if (!(f.q1 > 0.0 && f.q2 > 0.0 && f.s1 * f.s1 < 4.0 * f.q1 && f.s2 * f.s2 < 4.0 * f.q2)) {
            continue;
        }
        Quadratic2 g1{1.0, 0.5 * f.s1 / f.q1, 1.0 / f.q1};
        Quadratic2 g2{1.0, 0.5 * f.s2 / f.q2, 1.0 / f.q2};
        if (lex_less(g2, g1)) std::swap(g1, g2);
        const Quadratic2 second{p.c40 * g2.a11, p.c40 * g2.a12, p.c40 * g2.a22};
        const double res = reconstruction_residual(p, g1, second);
        if (res < best_residual) {
            best_residual = res;
            best = {g1, second, res, rr.iterations};
        }
    }
    if (!(best_residual <= 1e-8)) {
        throw SolverError("quartic root finder did not converge (residual " +
                              std::to_string(best_residual) + ")",
                          best_residual, rr.iterations);
    }
    return best;
}

std::string to_string(const Quadratic2& q) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(%.12g, %.12g, %.12g)", q.a11, q.a12, q.a22);
    return buf;
}

std::string to_string(const Quartic2& p) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "(%.12g, %.12g, %.12g, %.12g, %.12g)", p.c40, p.c31, p.c22, p.c13,
                  p.c04);
    return buf;
}

}  // namespace navier
