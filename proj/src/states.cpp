#include "qrp/states.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qrp/quadrature.hpp"
#include "qrp/specfun.hpp"

namespace qrp::states {

namespace {

using specfun::bessel_k;
using specfun::hermite_function_series_deriv;
using specfun::log_gamma;

double student_norm_const(int dof) {
  return std::exp(log_gamma((dof + 1) / 2.0) - log_gamma(dof / 2.0)) /
         std::sqrt(dof * M_PI);
}

// h_level and h_level' at z
void sho_basis(int level, double z, double& h, double& dh) {
  std::vector<double> hv(level + 1), dv(level + 1);
  hermite_function_series_deriv(level, z, hv, dv);
  h = hv[level];
  dh = dv[level];
}

struct SuperpositionValue {
  std::complex<double> psi;
  std::complex<double> dpsi;
};

SuperpositionValue superposition_eval(const std::vector<std::complex<double>>& c,
                                      double z) {
  const int nmax = static_cast<int>(c.size()) - 1;
  std::vector<double> h(nmax + 1), dh(nmax + 1);
  hermite_function_series_deriv(nmax, z, h, dh);
  SuperpositionValue v{{0.0, 0.0}, {0.0, 0.0}};
  for (int k = 0; k <= nmax; ++k) {
    v.psi += c[k] * h[k];
    v.dpsi += c[k] * dh[k];
  }
  return v;
}

std::vector<std::complex<double>> momentum_coeffs(
    const std::vector<std::complex<double>>& c) {
  // transform eigenfunction property: h_k -> (-i)^k h_k
  static const std::complex<double> phases[4] = {
      {1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  std::vector<std::complex<double>> d(c.size());
  for (size_t k = 0; k < c.size(); ++k) d[k] = phases[k % 4] * c[k];
  return d;
}

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

StateSpec make_sho(int level, double alpha) {
  if (level < 0) throw std::invalid_argument("sho: level must be >= 0");
  if (level > 64) throw std::invalid_argument("sho: level must be <= 64");
  if (!(alpha > 0.0)) throw std::invalid_argument("sho: alpha must be positive");
  return Sho{level, alpha};
}

StateSpec make_cauchy(double x0, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("cauchy: gamma must be positive");
  if (!std::isfinite(x0)) throw std::invalid_argument("cauchy: x0 must be finite");
  return CauchyLorentz{x0, gamma};
}

StateSpec make_student(int dof) {
  if (dof < 2) throw std::invalid_argument("student: dof must be >= 2");
  return StudentT{dof};
}

StateSpec make_hermite(std::vector<std::complex<double>> coeffs) {
  if (coeffs.empty() || coeffs.size() > 65)
    throw std::invalid_argument("hermite: need 1..65 coefficients");
  double n2 = 0.0;
  for (const auto& c : coeffs) n2 += std::norm(c);
  if (std::abs(n2 - 1.0) > 1e-12)
    throw std::invalid_argument("hermite: coefficients must have unit norm");
  return HermiteSuperposition{std::move(coeffs)};
}

double position_density(const StateSpec& s, double x) {
  return std::visit(
      [x](const auto& st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Sho>) {
          const double z = std::sqrt(st.alpha) * x;
          double h, dh;
          sho_basis(st.level, z, h, dh);
          return std::sqrt(st.alpha) * h * h;
        } else if constexpr (std::is_same_v<T, CauchyLorentz>) {
          const double u = x - st.x0;
          return (st.gamma / M_PI) / (u * u + st.gamma * st.gamma);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          return student_norm_const(st.dof) *
                 std::pow(1.0 + x * x / st.dof, -(st.dof + 1) / 2.0);
        } else {
          return std::norm(superposition_eval(st.coeffs, x).psi);
        }
      },
      s);
}

double position_density_derivative(const StateSpec& s, double x,
                                   bool use_analytic) {
  if (!use_analytic) {
    const double h = std::max(1e-6, 1e-8 * std::abs(x));
    return (position_density(s, x + h) - position_density(s, x - h)) / (2 * h);
  }
  return std::visit(
      [x](const auto& st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Sho>) {
          const double z = std::sqrt(st.alpha) * x;
          double h, dh;
          sho_basis(st.level, z, h, dh);
          return 2.0 * st.alpha * h * dh;
        } else if constexpr (std::is_same_v<T, CauchyLorentz>) {
          const double u = x - st.x0;
          const double d = u * u + st.gamma * st.gamma;
          return -(2.0 * st.gamma / M_PI) * u / (d * d);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          const int n = st.dof;
          return -student_norm_const(n) * ((n + 1.0) / n) * x *
                 std::pow(1.0 + x * x / n, -(n + 3) / 2.0);
        } else {
          const auto v = superposition_eval(st.coeffs, x);
          return 2.0 * std::real(std::conj(v.psi) * v.dpsi);
        }
      },
      s);
}

double momentum_density(const StateSpec& s, double p) {
  return std::visit(
      [p, &s](const auto& st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Sho>) {
          return position_density(Sho{st.level, 1.0 / st.alpha}, p);
        } else if constexpr (std::is_same_v<T, CauchyLorentz>) {
          if (p == 0.0) return kInf;  // K_0 diverges at the origin
          const double k0 = bessel_k(0.0, st.gamma * std::abs(p));
          return (2.0 * st.gamma / (M_PI * M_PI)) * k0 * k0;
        } else if constexpr (std::is_same_v<T, StudentT>) {
          if (st.dof == 2) {
            if (p == 0.0) return kNan;  // cusp value, never extrapolated
            const double ap = std::abs(p);
            const double k = bessel_k(0.25, std::sqrt(2.0) * ap);
            const double g34 = std::exp(log_gamma(0.75));
            return std::pow(2.0, 0.25) * std::sqrt(ap) * k * k / (g34 * g34);
          }
          const TransformPlan plan = default_plan(s);
          auto psi_line = [&st](double x) {
            return std::sqrt(student_norm_const(st.dof)) *
                   std::pow(1.0 + x * x / st.dof, -(st.dof + 1) / 4.0);
          };
          const double phi =
              fourier::transform_point_even(psi_line, p, plan.x_max, plan.tail);
          return phi * phi;
        } else {
          const auto d = momentum_coeffs(st.coeffs);
          return std::norm(superposition_eval(d, p).psi);
        }
      },
      s);
}

double momentum_density_derivative(const StateSpec& s, double p) {
  return std::visit(
      [p](const auto& st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Sho>) {
          return position_density_derivative(Sho{st.level, 1.0 / st.alpha}, p);
        } else if constexpr (std::is_same_v<T, CauchyLorentz>) {
          if (p == 0.0) return kNan;
          const double sign = p > 0 ? 1.0 : -1.0;
          const double z = st.gamma * std::abs(p);
          // d/dz K_0 = -K_1
          return -sign * (4.0 * st.gamma * st.gamma / (M_PI * M_PI)) *
                 bessel_k(0.0, z) * bessel_k(1.0, z);
        } else if constexpr (std::is_same_v<T, StudentT>) {
          if (st.dof != 2)
            throw std::invalid_argument(
                "momentum_density_derivative: no analytic form for dof > 2");
          if (p == 0.0) return kNan;
          const double sign = p > 0 ? 1.0 : -1.0;
          const double ap = std::abs(p);
          const double z = std::sqrt(2.0) * ap;
          const double g34 = std::exp(log_gamma(0.75));
          const double c = std::pow(2.0, 0.25) / (g34 * g34);
          const double k = bessel_k(0.25, z);
          // d/dz K_nu = -(K_{nu-1} + K_{nu+1}) / 2
          const double kp = -0.5 * (bessel_k(0.75, z) + bessel_k(1.25, z));
          return sign * c *
                 (k * k / (2.0 * std::sqrt(ap)) +
                  std::sqrt(ap) * 2.0 * k * kp * std::sqrt(2.0));
        } else {
          const auto d = momentum_coeffs(st.coeffs);
          const auto v = superposition_eval(d, p);
          return 2.0 * std::real(std::conj(v.psi) * v.dpsi);
        }
      },
      s);
}

std::complex<double> wavefunction(const StateSpec& s, double x) {
  return std::visit(
      [x](const auto& st) -> std::complex<double> {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Sho>) {
          const double z = std::sqrt(st.alpha) * x;
          double h, dh;
          sho_basis(st.level, z, h, dh);
          return std::pow(st.alpha, 0.25) * h;
        } else if constexpr (std::is_same_v<T, CauchyLorentz>) {
          const double u = x - st.x0;
          return std::sqrt((st.gamma / M_PI) / (u * u + st.gamma * st.gamma));
        } else if constexpr (std::is_same_v<T, StudentT>) {
          return std::sqrt(student_norm_const(st.dof)) *
                 std::pow(1.0 + x * x / st.dof, -(st.dof + 1) / 4.0);
        } else {
          return superposition_eval(st.coeffs, x).psi;
        }
      },
      s);
}

double support_radius(const StateSpec& s) {
  return std::visit(
      [](const auto& st) -> double {
        using T = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<T, Sho>) {
          return (std::sqrt(2.0 * st.level + 1.0) + 10.0) / std::sqrt(st.alpha);
        } else if constexpr (std::is_same_v<T, CauchyLorentz>) {
          return std::abs(st.x0) + 2000.0 * st.gamma;
        } else if constexpr (std::is_same_v<T, StudentT>) {
          // double until the analytic tail mass of f drops below 1e-12
          const int n = st.dof;
          const double c = student_norm_const(n);
          double X = 20.0;
          while (X < 1e7) {
            const double tail =
                2.0 * c * std::pow(n, (n + 1) / 2.0) * std::pow(X, -(double)n) / n;
            if (tail < 1e-12) break;
            X *= 2.0;
          }
          return X;
        } else {
          const int deg = static_cast<int>(st.coeffs.size()) - 1;
          return std::sqrt(2.0 * deg + 1.0) + 10.0;
        }
      },
      s);
}

fourier::PowerTail wavefunction_tail(const StateSpec& s) {
  fourier::PowerTail t;
  if (const auto* c = std::get_if<CauchyLorentz>(&s)) {
    // sqrt(gamma/pi) |x|^-1 (1 + gamma^2/x^2)^{-1/2}
    //   ~ A |x|^-1 - (A gamma^2 / 2) |x|^-3
    t.present = true;
    t.amplitude = std::sqrt(c->gamma / M_PI);
    t.exponent = 1.0;
    t.second_amplitude = -t.amplitude * c->gamma * c->gamma / 2.0;
    t.second_exponent = 3.0;
    t.start = 50.0 * c->gamma + std::abs(c->x0);
    return t;
  }
  if (const auto* st = std::get_if<StudentT>(&s)) {
    const int n = st->dof;
    if (n > 20) return t;  // tails numerically zero inside any sane window
    // sqrt(c_n) n^{(n+1)/4} |x|^{-(n+1)/2} (1 + n/x^2)^{-(n+1)/4}
    t.present = true;
    const double a =
        std::sqrt(student_norm_const(n)) * std::pow(n, (n + 1) / 4.0);
    t.amplitude = a;
    t.exponent = (n + 1) / 2.0;
    t.second_amplitude = -a * (n + 1) * n / 4.0;
    t.second_exponent = t.exponent + 2.0;
    t.start = 60.0;
    return t;
  }
  return t;
}

TransformPlan default_plan(const StateSpec& s) {
  TransformPlan plan;
  plan.tail = wavefunction_tail(s);
  if (const auto* c = std::get_if<CauchyLorentz>(&s)) {
    plan.x_min = -2000.0;
    plan.x_max = 2000.0;
    plan.n_points = 1 << 18;
    // int_X^inf f dx per side = 1/2 - atan(X/gamma)/pi
    const double X = plan.x_max - std::abs(c->x0);
    plan.window_tail_mass = 2.0 * (0.5 - std::atan(X / c->gamma) / M_PI);
    return plan;
  }
  if (const auto* st = std::get_if<StudentT>(&s)) {
    const int n = st->dof;
    if (n <= 6) {
      plan.x_min = -2000.0;
      plan.x_max = 2000.0;
      plan.n_points = 1 << 18;
    } else if (n <= 30) {
      plan.x_min = -400.0;
      plan.x_max = 400.0;
      plan.n_points = 1 << 16;
    } else {
      plan.x_min = -120.0;
      plan.x_max = 120.0;
      plan.n_points = 1 << 15;
    }
    const double c = student_norm_const(n);
    plan.window_tail_mass =
        2.0 * c * std::pow(n, (n + 1) / 2.0) * std::pow(plan.x_max, -(double)n) / n;
    if (plan.tail.present) plan.tail.start = std::min(plan.tail.start, plan.x_max / 4.0);
    return plan;
  }
  // Gaussian-weighted families: [-40, 40] x 2^14 keeps tail mass < 1e-300
  return plan;
}

fourier::TransformResult transform_state(const StateSpec& s,
                                         const TransformPlan& plan) {
  const SampledFunction psi = sample(
      [&s](double x) { return wavefunction(s, x); }, plan.x_min, plan.x_max,
      plan.n_points, AxisKind::position);
  fourier::TransformOptions opts;
  opts.tail = plan.tail;
  opts.window_tail_mass = plan.window_tail_mass;
  opts.check_normalization = true;
  return fourier::to_momentum(psi, opts);
}

double normalization_residual(const StateSpec& s) {
  const double R = support_radius(s);
  if (const auto* c = std::get_if<CauchyLorentz>(&s)) {
    const double X = 200.0 * c->gamma;
    const double body = integrate(
        [&s](double x) { return position_density(s, x); }, c->x0 - X, c->x0 + X,
        1e-12);
    const double tail = 2.0 * (0.5 - std::atan(X / c->gamma) / M_PI);
    return std::abs(1.0 - body - tail);
  }
  if (const auto* st = std::get_if<StudentT>(&s)) {
    const int n = st->dof;
    const double X = std::min(R, 4000.0);
    const double body = integrate(
        [&s](double x) { return position_density(s, x); }, -X, X, 1e-12);
    // leading tail of f beyond X: c n^{(n+1)/2} x^{-(n+1)} (1 - (n+1)n/(2x^2))
    const double c = student_norm_const(n);
    const double lead = std::pow(n, (n + 1) / 2.0) *
                        (std::pow(X, -(double)n) / n -
                         ((n + 1) * n / 2.0) * std::pow(X, -(double)n - 2) / (n + 2));
    const double tail = 2.0 * c * lead;
    return std::abs(1.0 - body - tail);
  }
  const double body = integrate(
      [&s](double x) { return position_density(s, x); }, -R, R, 1e-12);
  return std::abs(1.0 - body);
}

}  // namespace qrp::states
