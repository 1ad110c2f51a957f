#pragma once

#include <span>
#include <vector>

// Special-function kernels for the state catalog: physicists' Hermite
// polynomials, orthonormal Hermite functions, the modified Bessel function of
// the second kind, and log-gamma. Self-contained on purpose: golden fixtures
// must reproduce across platforms, so nothing here calls beyond <cmath>
// elementary functions.

namespace qrp::specfun {

// Physicists' Hermite polynomial H_n(z) via the three-term recurrence
// H_{n+1} = 2 z H_n - 2 n H_{n-1}. Exact in exact arithmetic; no overflow
// guard is needed for n <= 64 at moderate |z| since doubles carry the growth.
double hermite_poly(int n, double z);

// Orthonormal Hermite function h_n(z) = pi^{-1/4} (2^n n!)^{-1/2} H_n(z)
// e^{-z^2/2}, evaluated with the directly normalized recurrence
//   h_{n+1} = z sqrt(2/(n+1)) h_n - sqrt(n/(n+1)) h_{n-1}
// so the 2^n n! factor never materializes (finite for n up to 64 and beyond).
double hermite_function(int n, double z);

// Fills h[0..nmax] with h_k(z).
void hermite_function_series(int nmax, double z, std::span<double> h);

// Fills h[0..nmax] and dh[0..nmax] with h_k(z) and h_k'(z), using
// h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1}.
void hermite_function_series_deriv(int nmax, double z, std::span<double> h,
                                   std::span<double> dh);

// Modified Bessel function of the second kind K_nu(z), z > 0, via the
// integral representation K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt
// with adaptive panel bisection, truncated where the integrand falls below
// 1e-18 of its peak. Relative accuracy <= 1e-9 for z in [1e-6, 50], |nu| <= 2.
// Throws std::domain_error for z <= 0.
double bessel_k(double nu, double z);

// ln Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 terms), reflection
// below 0.5. Relative accuracy <= 1e-12. Throws std::domain_error for x <= 0.
double log_gamma(double x);

}  // namespace qrp::specfun
