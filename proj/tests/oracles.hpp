#pragma once

#include <complex>
#include <functional>
#include <vector>

// Test-only reference implementations, independent of the library's
// evaluation paths: results asserted against these never share code with the
// code under test.

namespace qrp::test_oracles {

// H_n(z) from the Rodrigues form: d^n/dz^n e^{-z^2} = P_n(z) e^{-z^2} with the
// polynomial recurrence P_{n+1} = P_n' - 2 z P_n, evaluated by brute force on
// the coefficient array.
double hermite_rodrigues(int n, double z);

// Gamma(x) by quadrature of the transformed Euler integral
// Gamma(x) = m int_0^inf u^(m x - 1) e^{-u^m} du with m chosen so the
// integrand vanishes at 0 (independent of any Lanczos-type approximation).
double gamma_by_quadrature(double x);

// K_nu(z) by high-resolution composite Simpson on the cosh representation,
// fixed 200k panels (slow, accurate to ~1e-12 relative for moderate z).
double bessel_k_high_res(double nu, double z);

// direct O(N^2) evaluation of phi(p) = (2 pi)^{-1/2} sum psi(x_j) e^{-i x_j p} dx
std::complex<double> dft_point(const std::vector<std::complex<double>>& psi,
                               double x_min, double dx, double p);

// composite trapezoid on a dense uniform grid
double trapezoid(const std::function<double(double)>& f, double a, double b,
                 int n);

}  // namespace qrp::test_oracles
