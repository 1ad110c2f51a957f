#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qrp/quadrature.hpp"
#include "qrp/specfun.hpp"

using namespace qrp;
using namespace qrp::specfun;

TEST_CASE("hermite polynomial basics") {
  CHECK(hermite_poly(0, 7.3) == 1.0);
  CHECK(hermite_poly(1, 2.0) == 4.0);
  // H_3(1) = 8 - 12 = -4, frozen from the Rodrigues-form oracle
  CHECK(test_oracles::hermite_rodrigues(3, 1.0) == doctest::Approx(-4.0).epsilon(1e-14));
  CHECK(hermite_poly(3, 1.0) == doctest::Approx(-4.0).epsilon(1e-14));
}

TEST_CASE("hermite polynomial matches the Rodrigues oracle") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> uz(-4.0, 4.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = trial % 12;
    const double z = uz(rng);
    const double want = test_oracles::hermite_rodrigues(n, z);
    const double got = hermite_poly(n, z);
    CHECK(got == doctest::Approx(want).epsilon(1e-11));
  }
}

TEST_CASE("hermite recurrence residual stays small") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uz(-10.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 29);
    const double z = uz(rng);
    const double hm = hermite_poly(n - 1, z);
    const double h = hermite_poly(n, z);
    const double hp = hermite_poly(n + 1, z);
    const double resid = hp - 2 * z * h + 2 * n * hm;
    const double scale = std::abs(hp) + std::abs(2 * z * h) + std::abs(2 * n * hm);
    CHECK(std::abs(resid) <= 1e-8 * std::max(scale, 1.0));
  }
}

TEST_CASE("hermite function values") {
  CHECK(hermite_function(0, 0.0) ==
        doctest::Approx(0.7511255444649425).epsilon(1e-14));  // pi^(-1/4)
  CHECK(hermite_function(1, 0.0) == 0.0);
  // finite far into the classically forbidden region at high order
  CHECK(std::isfinite(hermite_function(64, 11.0)));
  CHECK(hermite_function(64, 0.5) != 0.0);
}

TEST_CASE("hermite functions are orthonormal") {
  for (int m = 0; m <= 12; ++m)
    for (int n = m; n <= 12; ++n) {
      const double overlap = test_oracles::trapezoid(
          [&](double z) { return hermite_function(m, z) * hermite_function(n, z); },
          -20.0, 20.0, 40000);
      const double want = m == n ? 1.0 : 0.0;
      CHECK(std::abs(overlap - want) <= 1e-8);
    }
}

TEST_CASE("hermite 3-5 cross overlap vanishes") {
  const double overlap = test_oracles::trapezoid(
      [](double z) { return hermite_function(3, z) * hermite_function(5, z); },
      -20.0, 20.0, 80000);
  CHECK(std::abs(overlap) <= 1e-10);
}

TEST_CASE("hermite series derivative is consistent") {
  std::vector<double> h(9), dh(9);
  hermite_function_series_deriv(8, 0.37, h, dh);
  for (int n = 0; n <= 8; ++n) {
    CHECK(h[n] == doctest::Approx(hermite_function(n, 0.37)).epsilon(1e-13));
    const double eps = 1e-6;
    const double fd =
        (hermite_function(n, 0.37 + eps) - hermite_function(n, 0.37 - eps)) /
        (2 * eps);
    CHECK(dh[n] == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("bessel K values") {
  // K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
  CHECK(bessel_k(0.5, 1.0) ==
        doctest::Approx(0.46106850444789456).epsilon(1e-10));
  CHECK(bessel_k(0.0, 1.0) ==
        doctest::Approx(0.42102443824070833).epsilon(1e-10));
  CHECK(bessel_k(-0.25, 2.0) == doctest::Approx(bessel_k(0.25, 2.0)).epsilon(1e-14));
  CHECK(bessel_k(1.5, 0.5) == doctest::Approx(3.2251428104997607).epsilon(1e-9));
  CHECK(bessel_k(2.0, 10.0) ==
        doctest::Approx(2.1509817006932769e-5).epsilon(1e-9));
  CHECK(bessel_k(0.25, 1e-5) == doctest::Approx(38.220264538878945).epsilon(1e-9));
  CHECK(bessel_k(1.0, 1e-6) == doctest::Approx(999999.99999278428).epsilon(1e-9));
  CHECK(bessel_k(0.0, 50.0) ==
        doctest::Approx(3.4101677497894955e-23).epsilon(1e-9));
  CHECK_THROWS_AS(bessel_k(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(bessel_k(0.5, -1.0), std::domain_error);
}

TEST_CASE("bessel K matches the high-resolution oracle") {
  for (double nu : {0.0, 0.25, 0.75, 1.25, 2.0})
    for (double z : {0.05, 0.3, 1.0, 4.0, 12.0}) {
      const double want = test_oracles::bessel_k_high_res(nu, z);
      CHECK(bessel_k(nu, z) == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("bessel K satisfies the modified Bessel equation") {
  // z^2 K'' + z K' - (z^2 + nu^2) K = 0, second derivative by differences
  for (double nu : {0.0, 0.5, 1.0, 2.0}) {
    for (double z : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double h = 1e-4 * z;
      const double km = bessel_k(nu, z - h), k0 = bessel_k(nu, z),
                   kp = bessel_k(nu, z + h);
      const double d1 = (kp - km) / (2 * h);
      const double d2 = (kp - 2 * k0 + km) / (h * h);
      const double resid = z * z * d2 + z * d1 - (z * z + nu * nu) * k0;
      CHECK(std::abs(resid) <= 1e-6 * std::max(1.0, std::abs(z * z * k0)));
    }
  }
}

TEST_CASE("log gamma values") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
  const double want = std::log(test_oracles::gamma_by_quadrature(0.75));
  CHECK(want == doctest::Approx(0.20328095143129537).epsilon(1e-9));
  CHECK(log_gamma(0.75) == doctest::Approx(want).epsilon(1e-10));
  CHECK(log_gamma(0.1) == doctest::Approx(2.2527126517342060).epsilon(1e-12));
  CHECK(log_gamma(20.5) == doctest::Approx(40.831500974530798).epsilon(1e-12));
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
}

TEST_CASE("gamma functional equation") {
  for (double x = 0.5; x <= 20.0; x += 0.37) {
    const double lhs = log_gamma(x + 1.0);
    const double rhs = std::log(x) + log_gamma(x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("adaptive quadrature sanity") {
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -10.0, 10.0) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
  CHECK(integrate_line([](double x) { return std::exp(-std::abs(x)); }, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-9));
  // oscillatory power tail vs brute force
  const double brute = test_oracles::trapezoid(
      [](double x) { return std::pow(x, -1.5) * std::cos(0.7 * x); }, 50.0,
      5000.0, 8'000'000);
  const double tail50 = power_tail_oscillatory(1.5, 50.0, 0.7, false);
  const double tail5000 = power_tail_oscillatory(1.5, 5000.0, 0.7, false);
  CHECK(tail50 - tail5000 == doctest::Approx(brute).epsilon(5e-7));
}
