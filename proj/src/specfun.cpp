#include "qrp/specfun.hpp"

#include <cmath>
#include <stdexcept>

#include "qrp/quadrature.hpp"

namespace qrp::specfun {

double hermite_poly(int n, double z) {
  if (n < 0) throw std::domain_error("hermite_poly: order must be >= 0");
  if (n == 0) return 1.0;
  double hm = 1.0;       // H_0
  double h = 2.0 * z;    // H_1
  for (int k = 1; k < n; ++k) {
    const double hp = 2.0 * z * h - 2.0 * k * hm;
    hm = h;
    h = hp;
  }
  return h;
}

namespace {
const double kPiQuarterInv = 0.7511255444649425;  // pi^(-1/4)
}

double hermite_function(int n, double z) {
  if (n < 0) throw std::domain_error("hermite_function: order must be >= 0");
  double hm = kPiQuarterInv * std::exp(-0.5 * z * z);
  if (n == 0) return hm;
  double h = std::sqrt(2.0) * z * hm;
  for (int k = 1; k < n; ++k) {
    const double hp =
        z * std::sqrt(2.0 / (k + 1)) * h - std::sqrt(k / (k + 1.0)) * hm;
    hm = h;
    h = hp;
  }
  return h;
}

void hermite_function_series(int nmax, double z, std::span<double> h) {
  if (nmax < 0) throw std::domain_error("hermite_function_series: order must be >= 0");
  h[0] = kPiQuarterInv * std::exp(-0.5 * z * z);
  if (nmax >= 1) h[1] = std::sqrt(2.0) * z * h[0];
  for (int k = 1; k < nmax; ++k)
    h[k + 1] = z * std::sqrt(2.0 / (k + 1)) * h[k] - std::sqrt(k / (k + 1.0)) * h[k - 1];
}

void hermite_function_series_deriv(int nmax, double z, std::span<double> h,
                                   std::span<double> dh) {
  std::vector<double> ext(nmax + 2);
  hermite_function_series(nmax + 1, z, ext);
  for (int n = 0; n <= nmax; ++n) {
    h[n] = ext[n];
    const double lower = n >= 1 ? std::sqrt(n / 2.0) * ext[n - 1] : 0.0;
    dh[n] = lower - std::sqrt((n + 1) / 2.0) * ext[n + 1];
  }
}

double bessel_k(double nu, double z) {
  if (z <= 0.0) throw std::domain_error("bessel_k: argument must be positive");
  nu = std::abs(nu);  // K_{-nu} = K_nu
  // truncation point: e^{-z cosh t} cosh(nu t) below 1e-18 of the t=0 value
  double tmax = 1.0;
  while (z * (std::cosh(tmax) - 1.0) - nu * tmax < 45.0 && tmax < 80.0)
    tmax += 0.5;
  auto integrand = [&](double t) {
    return std::exp(-z * std::cosh(t) + z) * std::cosh(nu * t);
  };
  return std::exp(-z) * integrate(integrand, 0.0, tmax, 1e-12, 52);
}

double log_gamma(double x) {
  if (x <= 0.0) throw std::domain_error("log_gamma: argument must be positive");
  // Lanczos, g = 7, 9 coefficients
  static const double g[9] = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) {
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
  }
  const double xm = x - 1.0;
  double a = g[0];
  for (int i = 1; i < 9; ++i) a += g[i] / (xm + i);
  const double t = xm + 7.5;
  return 0.5 * std::log(2.0 * M_PI) + (xm + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace qrp::specfun
