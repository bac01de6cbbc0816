#pragma once

#include <array>
#include <complex>
#include <string>
#include <utility>

namespace navier {

/// Second-order constant-coefficient operator A u = -sum a_ij d_i d_j u with
/// symbol Q(xi) = a11 xi1^2 + 2 a12 xi1 xi2 + a22 xi2^2. The weak form is
/// sum a_ij int d_j u d_i v.
struct Quadratic2 {
    double a11 = 1.0;
    double a12 = 0.0;
    double a22 = 1.0;

    static constexpr Quadratic2 laplacian() { return {1.0, 0.0, 1.0}; }

    double symbol(double xi1, double xi2) const noexcept {
        return a11 * xi1 * xi1 + 2.0 * a12 * xi1 * xi2 + a22 * xi2 * xi2;
    }
    bool operator==(const Quadratic2&) const = default;
};

/// Homogeneous quartic symbol P(xi) = c40 xi1^4 + c31 xi1^3 xi2 + c22 xi1^2 xi2^2
///                                  + c13 xi1 xi2^3 + c04 xi2^4.
struct Quartic2 {
    double c40 = 1.0;
    double c31 = 0.0;
    double c22 = 2.0;
    double c13 = 0.0;
    double c04 = 1.0;

    double symbol(double xi1, double xi2) const noexcept;
    bool operator==(const Quartic2&) const = default;
};

/// Minimum of the symbol over the unit circle; <= 0 means not elliptic.
double ellipticity_margin(const Quadratic2& q);
double ellipticity_margin(const Quartic2& p);

inline bool is_elliptic(const Quadratic2& q) { return ellipticity_margin(q) > 0.0; }
inline bool is_elliptic(const Quartic2& p) { return ellipticity_margin(p) > 0.0; }

/// Flips the overall sign so that the symbol is positive at xi = (1, 0).
Quadratic2 sign_normalized(const Quadratic2& q);
Quartic2 sign_normalized(const Quartic2& p);

/// Rescales q so that a11 = 1 (requires a11 != 0).
Quadratic2 unit_leading(const Quadratic2& q);

/// Polynomial product of the two symbols.
Quartic2 compose(const Quadratic2& q, const Quadratic2& r);

struct Factorization {
    Quadratic2 first;   ///< a11 == 1
    Quadratic2 second;  ///< carries the leading constant c40
    double residual;    ///< max coefficient error of compose(first, second), relative to max |c|
    int root_iterations;
};

/// Splits an elliptic quartic into two real elliptic quadratic factors.
/// Canonical order: the factor whose unit-leading form (1, a12, a22) is
/// lexicographically smaller comes first.
/// Throws InvalidArgument("not elliptic") or SolverError on root-finder failure.
Factorization factor_quartic(const Quartic2& p);

struct RootResult {
    std::array<std::complex<double>, 4> roots;
    int iterations;
    bool converged;
};

/// Durand-Kerner iteration for the four roots of
/// c[0] + c[1] t + c[2] t^2 + c[3] t^3 + c[4] t^4  (c[4] != 0).
RootResult quartic_roots(const std::array<double, 5>& c, double tol = 1e-12, int max_iter = 500);

std::string to_string(const Quadratic2& q);
std::string to_string(const Quartic2& p);

}  // namespace navier
