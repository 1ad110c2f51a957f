#include "oracles.hpp"

#include <cmath>

namespace qrp::test_oracles {

double hermite_rodrigues(int n, double z) {
  // P_0 = 1; P_{k+1} = P_k' - 2 z P_k; H_n = (-1)^n P_n
  std::vector<double> p{1.0};
  for (int k = 0; k < n; ++k) {
    std::vector<double> next(p.size() + 1, 0.0);
    for (size_t j = 1; j < p.size(); ++j) next[j - 1] += j * p[j];  // P'
    for (size_t j = 0; j < p.size(); ++j) next[j + 1] -= 2.0 * p[j];  // -2 z P
    p = std::move(next);
  }
  double value = 0.0;
  for (size_t j = p.size(); j-- > 0;) value = value * z + p[j];
  return (n % 2 == 0 ? 1.0 : -1.0) * value;
}

double gamma_by_quadrature(double x) {
  // u = t^(1/m): Gamma(x) = m int_0^inf u^(m x - 1) e^{-u^m} du, m = 4
  const double m = 4.0;
  auto integrand = [&](double u) {
    return std::pow(u, m * x - 1.0) * std::exp(-std::pow(u, m));
  };
  // integrand is smooth, decays like exp(-u^4); dense trapezoid suffices
  return m * trapezoid(integrand, 1e-12, 12.0, 4'000'000);
}

double bessel_k_high_res(double nu, double z) {
  nu = std::abs(nu);
  double tmax = 2.0;
  while (z * (std::cosh(tmax) - 1.0) - nu * tmax < 50.0 && tmax < 60.0)
    tmax += 0.25;
  auto integrand = [&](double t) {
    return std::exp(-z * std::cosh(t) + z) * std::cosh(nu * t);
  };
  // composite Simpson
  const int n = 200'000;
  const double h = tmax / n;
  double sum = integrand(0.0) + integrand(tmax);
  for (int i = 1; i < n; ++i)
    sum += integrand(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return std::exp(-z) * sum * h / 3.0;
}

std::complex<double> dft_point(const std::vector<std::complex<double>>& psi,
                               double x_min, double dx, double p) {
  std::complex<double> acc{0.0, 0.0};
  for (size_t j = 0; j < psi.size(); ++j) {
    const double x = x_min + j * dx;
    acc += psi[j] * std::complex<double>(std::cos(x * p), -std::sin(x * p));
  }
  return acc * dx / std::sqrt(2.0 * M_PI);
}

double trapezoid(const std::function<double(double)>& f, double a, double b,
                 int n) {
  const double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  return sum * h;
}

}  // namespace qrp::test_oracles
