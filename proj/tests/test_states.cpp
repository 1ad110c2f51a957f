#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qrp/states.hpp"

using namespace qrp;
using namespace qrp::states;

namespace {

std::vector<StateSpec> catalog() {
  return {
      make_sho(0, 1.0),
      make_sho(3, 2.0),
      make_sho(7, 0.5),
      make_cauchy(0.0, 1.0),
      make_cauchy(0.5, 2.0),
      make_student(2),
      make_student(5),
      make_hermite({{0.6, 0.0}, {0.0, 0.8}}),
      make_hermite({{0.5, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {-0.5, 0.0}}),
  };
}

}  // namespace

TEST_CASE("constructors validate parameters") {
  CHECK_THROWS_AS(make_sho(-1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_sho(0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_cauchy(0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_student(1), std::invalid_argument);
  CHECK_THROWS_AS(make_hermite({{0.9, 0.0}}), std::invalid_argument);
  CHECK_NOTHROW(make_hermite({{1.0, 0.0}}));
}

TEST_CASE("position density reference values") {
  CHECK(position_density(make_cauchy(0.0, 1.0), 0.0) ==
        doctest::Approx(1.0 / M_PI).epsilon(1e-14));
  CHECK(position_density(make_sho(0, 1.0), 0.0) ==
        doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(position_density(make_student(2), 0.0) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-13));
}

TEST_CASE("position density derivative reference values") {
  CHECK(position_density_derivative(make_cauchy(0.0, 1.0), 1.0 / std::sqrt(3.0)) ==
        doctest::Approx(-3.0 * std::sqrt(3.0) / (8.0 * M_PI)).epsilon(1e-13));
  CHECK(position_density_derivative(make_sho(0, 2.0), 0.0) ==
        doctest::Approx(0.0));
  CHECK(position_density_derivative(make_student(2), 1.0 / std::sqrt(2.0)) ==
        doctest::Approx(-12.0 / (25.0 * std::sqrt(5.0))).epsilon(1e-13));
}

TEST_CASE("analytic and finite-difference derivatives agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-6.0, 6.0);
  for (const auto& s : catalog()) {
    for (int i = 0; i < 100; ++i) {
      const double x = ux(rng);
      const double a = position_density_derivative(s, x, true);
      const double fd = position_density_derivative(s, x, false);
      const double scale = std::max({std::abs(a), std::abs(fd), 1e-6});
      CHECK(std::abs(a - fd) <= 1e-5 * scale);
    }
  }
}

TEST_CASE("densities with x0 = 0 are even") {
  for (const auto& s : catalog()) {
    if (const auto* c = std::get_if<CauchyLorentz>(&s))
      if (c->x0 != 0.0) continue;
    if (std::get_if<HermiteSuperposition>(&s)) continue;  // not parity eigenstates
    for (double x : {0.3, 1.7, 4.2}) {
      CHECK(std::abs(position_density(s, x) - position_density(s, -x)) <= 1e-12);
    }
  }
}

TEST_CASE("momentum density: oscillator ground state is self-dual") {
  const auto s = make_sho(0, 1.0);
  for (double p : {0.0, 0.4, 1.3, 2.7})
    CHECK(momentum_density(s, p) ==
          doctest::Approx(position_density(s, p)).epsilon(1e-13));
}

TEST_CASE("momentum density: oscillator duality in alpha") {
  const auto s = make_sho(4, 3.0);
  const auto dual = make_sho(4, 1.0 / 3.0);
  for (double p = -4.0; p <= 4.0; p += 0.37)
    CHECK(std::abs(momentum_density(s, p) - position_density(dual, p)) <= 1e-10);
}

TEST_CASE("momentum density: first Hermite level") {
  const auto s = make_hermite({{0.0, 0.0}, {1.0, 0.0}});
  for (double p : {0.2, 0.9, 1.9}) {
    const double want = 2.0 / std::sqrt(M_PI) * p * p * std::exp(-p * p);
    CHECK(momentum_density(s, p) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("momentum density: Cauchy closed form vs numeric transform") {
  const auto s = make_cauchy(0.0, 1.0);
  const auto plan = default_plan(s);
  const auto tr = transform_state(s, plan);
  CHECK(tr.converged);
  for (double p : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const int k = static_cast<int>(std::round((p - tr.phi.x_min) / tr.phi.spacing()));
    const double pk = tr.phi.coord(k);
    const double got = std::norm(tr.phi.values[k]);
    const double want = momentum_density(s, pk);
    CHECK(got == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("momentum density: cusp sentinels are non-finite") {
  CHECK(std::isinf(momentum_density(make_cauchy(0.0, 1.0), 0.0)));
  CHECK(std::isnan(momentum_density(make_student(2), 0.0)));
}

TEST_CASE("momentum density: Student-2 profile is finite near the cusp") {
  const auto s = make_student(2);
  const double near = momentum_density(s, 1e-4);
  CHECK(std::isfinite(near));
  CHECK(near > 0.1);
  double prev = momentum_density(s, 0.5);
  for (double p = 1.0; p <= 5.0; p += 0.5) {
    const double cur = momentum_density(s, p);
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("momentum density: x0 only contributes a phase") {
  const auto shifted = make_cauchy(3.0, 1.0);
  const auto centered = make_cauchy(0.0, 1.0);
  for (double p : {0.3, 1.1})
    CHECK(momentum_density(shifted, p) ==
          doctest::Approx(momentum_density(centered, p)).epsilon(1e-14));
}

TEST_CASE("momentum density: Student dof > 2 via quadrature matches the grid") {
  const auto s = make_student(5);
  const auto plan = default_plan(s);
  const auto tr = transform_state(s, plan);
  for (double p : {0.3, 0.8, 1.6}) {
    const int k = static_cast<int>(std::round((p - tr.phi.x_min) / tr.phi.spacing()));
    const double got = momentum_density(s, tr.phi.coord(k));
    CHECK(got == doctest::Approx(std::norm(tr.phi.values[k])).epsilon(1e-7));
  }
}

TEST_CASE("normalization residual across the catalog") {
  for (const auto& s : catalog()) {
    const double tol = std::holds_alternative<CauchyLorentz>(s) ? 1e-6 : 1e-8;
    CHECK(normalization_residual(s) <= tol);
  }
}

TEST_CASE("momentum densities integrate to one") {
  for (const auto& s : {make_sho(2, 1.5), make_student(2),
                        make_hermite({{0.6, 0.0}, {0.0, 0.8}})}) {
    auto g = [&](double p) {
      const double v = momentum_density(s, p);
      return std::isfinite(v) ? v : 0.0;
    };
    const double total = test_oracles::trapezoid(g, -30.0, 30.0, 600000);
    CHECK(std::abs(total - 1.0) <= 1e-6);
  }
  // Cauchy carries an integrable log^2 cusp; midpoint grid avoids p = 0
  const auto cauchy = make_cauchy(0.0, 1.0);
  double total = 0.0;
  const int n = 2'000'000;
  const double P = 40.0, h = P / n;
  for (int i = 0; i < n; ++i) total += momentum_density(cauchy, (i + 0.5) * h) * h;
  CHECK(std::abs(2.0 * total - 1.0) <= 1e-5);
}

TEST_CASE("plans record heavy tails") {
  const auto plan_c = default_plan(make_cauchy(0.0, 1.0));
  CHECK(plan_c.window_tail_mass ==
        doctest::Approx(2.0 * (0.5 - std::atan(2000.0) / M_PI)).epsilon(1e-12));
  CHECK(plan_c.tail.present);
  const auto plan_g = default_plan(make_sho(2, 1.0));
  CHECK(plan_g.window_tail_mass == 0.0);
  CHECK(!plan_g.tail.present);
}
