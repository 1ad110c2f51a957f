#include "qrp/reciprocity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "qrp/quadrature.hpp"
#include "qrp/specfun.hpp"

namespace qrp::reciprocity {

namespace {

using states::CauchyLorentz;
using states::HermiteSuperposition;
using states::Sho;
using states::StateSpec;
using states::StudentT;

constexpr double kInf = std::numeric_limits<double>::infinity();

lipschitz::Density position_callables(const StateSpec& s) {
  return {[&s](double x) { return states::position_density(s, x); },
          [&s](double x) { return states::position_density_derivative(s, x); }};
}

lipschitz::Density momentum_callables(const StateSpec& s) {
  return {[&s](double p) { return states::momentum_density(s, p); },
          [&s](double p) { return states::momentum_density_derivative(s, p); }};
}

// window outside which |f'| is negligible relative to its supremum
double position_lc_radius(const StateSpec& s) {
  if (const auto* c = std::get_if<CauchyLorentz>(&s))
    return std::abs(c->x0) + 60.0 * c->gamma;
  if (const auto* st = std::get_if<StudentT>(&s))
    return 40.0 * std::sqrt(static_cast<double>(st->dof));
  return states::support_radius(s);
}

lipschitz::LipschitzEstimate position_lc(const StateSpec& s,
                                         const lipschitz::Options& lc) {
  const double R = position_lc_radius(s);
  double center = 0.0;
  if (const auto* c = std::get_if<CauchyLorentz>(&s)) center = c->x0;
  return lipschitz::lipschitz_constant(position_callables(s),
                                       {center - R, center + R}, lc);
}

// Student-t dof>2: momentum density from the transform grid; bracketing on a
// monotone-cubic interpolant of the grid, final values from direct quadrature
// of the transform integral so interpolation error never reaches the result.
class GridDensity {
 public:
  GridDensity(std::vector<double> p, std::vector<double> g)
      : p_(std::move(p)), g_(std::move(g)) {
    // Fritsch-Carlson monotone cubic slopes
    const size_t n = p_.size();
    slopes_.resize(n);
    std::vector<double> d(n - 1);
    for (size_t i = 0; i + 1 < n; ++i)
      d[i] = (g_[i + 1] - g_[i]) / (p_[i + 1] - p_[i]);
    slopes_[0] = d[0];
    slopes_[n - 1] = d[n - 2];
    for (size_t i = 1; i + 1 < n; ++i)
      slopes_[i] = (d[i - 1] * d[i] <= 0.0) ? 0.0 : 0.5 * (d[i - 1] + d[i]);
    for (size_t i = 0; i + 1 < n; ++i) {
      if (d[i] == 0.0) {
        slopes_[i] = slopes_[i + 1] = 0.0;
        continue;
      }
      const double a = slopes_[i] / d[i], b = slopes_[i + 1] / d[i];
      const double s = a * a + b * b;
      if (s > 9.0) {
        const double t = 3.0 / std::sqrt(s);
        slopes_[i] = t * a * d[i];
        slopes_[i + 1] = t * b * d[i];
      }
    }
  }

  double value(double x) const {
    const auto [i, t, h] = locate(x);
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    return h00 * g_[i] + h10 * h * slopes_[i] + h01 * g_[i + 1] +
           h11 * h * slopes_[i + 1];
  }

  double derivative(double x) const {
    const auto [i, t, h] = locate(x);
    const double d00 = 6 * t * (t - 1);
    const double d10 = (1 - t) * (1 - 3 * t);
    const double d01 = -d00;
    const double d11 = t * (3 * t - 2);
    return (d00 * g_[i] + d01 * g_[i + 1]) / h + d10 * slopes_[i] +
           d11 * slopes_[i + 1];
  }

 private:
  std::tuple<size_t, double, double> locate(double x) const {
    const auto it = std::upper_bound(p_.begin(), p_.end(), x);
    size_t i = it == p_.begin() ? 0 : (it - p_.begin()) - 1;
    i = std::min(i, p_.size() - 2);
    const double h = p_[i + 1] - p_[i];
    return {i, (x - p_[i]) / h, h};
  }

  std::vector<double> p_, g_, slopes_;
};

lipschitz::LipschitzEstimate student_momentum_lc(const StudentT& st,
                                                 const StateSpec& s,
                                                 const states::TransformPlan& plan,
                                                 const lipschitz::Options& lc) {
  const auto tr = states::transform_state(s, plan);
  const auto& phi = tr.phi;

  // keep the part of the conjugate grid carrying density
  std::vector<double> p, g;
  double gmax = 0.0;
  for (int k = 0; k < phi.n_points; ++k)
    gmax = std::max(gmax, std::norm(phi.values[k]));
  for (int k = 0; k < phi.n_points; ++k) {
    const double gv = std::norm(phi.values[k]);
    if (gv > 1e-14 * gmax || std::abs(phi.coord(k)) < 1.0) {
      p.push_back(phi.coord(k));
      g.push_back(gv);
    }
  }
  const double lo = std::max(p.front(), -30.0);
  const double hi = std::min(p.back(), 30.0);
  GridDensity interp(std::move(p), std::move(g));

  lipschitz::Options bracket_opts = lc;
  bracket_opts.coarse_points = std::min(lc.coarse_points, 1 << 15);
  lipschitz::Density interp_density{
      [&interp](double x) { return interp.value(x); },
      [&interp](double x) { return interp.derivative(x); }};
  const auto bracket =
      lipschitz::lipschitz_constant(interp_density, {lo, hi}, bracket_opts);

  // refine by quadrature: g'(p) = 2 phi(p) phi'(p), psi real even
  auto psi = [&s](double x) { return states::wavefunction(s, x).real(); };
  auto gprime = [&](double pp) {
    const double ap = std::abs(pp);
    const double f = fourier::transform_point_even(psi, ap, plan.x_max, plan.tail);
    const double fd =
        fourier::transform_point_even_deriv(psi, ap, plan.x_max, plan.tail);
    return 2.0 * f * fd;
  };
  lipschitz::Density quad_density{{}, gprime};

  const double dp = 2.0 * M_PI / (plan.n_points * (plan.x_max - plan.x_min) /
                                  (plan.n_points - 1.0));
  const double pc = std::abs(bracket.argmax_x);
  lipschitz::Options fine = lc;
  fine.coarse_points = 64;
  auto refined = lipschitz::lipschitz_constant(
      quad_density, {std::max(pc - 2 * dp, 1e-9), pc + 2 * dp}, fine);

  // one-sided probe toward p = 0: for small dof the supremum is the cusp limit
  if (st.dof <= 6) {
    for (double pp : {dp, dp / 4, dp / 16, dp / 64}) {
      const double v = std::abs(gprime(pp));
      if (v > refined.value) {
        refined.value = v;
        refined.argmax_x = pp;
      }
    }
  }
  refined.coarse_grid_points = bracket.coarse_grid_points;
  return refined;
}

double checked_product(double eta_x, double eta_p) {
  return std::sqrt(eta_x * eta_p);
}

}  // namespace

std::pair<double, double> divergence_sweep_range(const StateSpec& s) {
  if (std::holds_alternative<StudentT>(s)) return {1e-2, 1e-1};
  return {1e-3, 1e-1};
}

ReciprocityResult reciprocity_product(const StateSpec& s, const Options& opts) {
  ReciprocityResult r;
  r.x_estimate = position_lc(s, opts.lc);
  r.eta_x = r.x_estimate.value;
  r.plan = states::default_plan(s);

  const bool divergent_family =
      std::holds_alternative<CauchyLorentz>(s) ||
      (std::holds_alternative<StudentT>(s) && std::get<StudentT>(s).dof == 2);

  if (divergent_family) {
    auto [eps_min, eps_max] = divergence_sweep_range(s);
    if (opts.sweep_eps_min > 0.0) eps_min = opts.sweep_eps_min;
    if (opts.sweep_eps_max > 0.0) eps_max = opts.sweep_eps_max;
    lipschitz::Options sweep_opts = opts.lc;
    sweep_opts.coarse_points = std::min(opts.lc.coarse_points, 1 << 12);
    double outer = 30.0;
    if (const auto* c = std::get_if<CauchyLorentz>(&s)) outer = 30.0 / c->gamma;
    r.divergence_sweep = lipschitz::epsilon_sweep(
        momentum_callables(s), eps_min, eps_max, opts.sweep_points, outer,
        sweep_opts);
    const auto model = std::holds_alternative<CauchyLorentz>(s)
                           ? lipschitz::DivergenceModel::linear_in_inverse_epsilon
                           : lipschitz::DivergenceModel::quadratic_in_log_inverse_epsilon;
    r.divergence_fit = lipschitz::fit_divergence(r.divergence_sweep, model);
    r.divergent = true;
    // grid-limited lower bound at the smallest probed epsilon
    r.p_estimate.value = r.divergence_sweep.back().second;
    r.p_estimate.argmax_x = r.divergence_sweep.back().first;
    r.p_estimate.divergent = true;
    r.eta_p = r.p_estimate.value;
    r.product_tilde = kInf;
    return r;
  }

  if (const auto* sho = std::get_if<Sho>(&s)) {
    const StateSpec dual = states::make_sho(sho->level, 1.0 / sho->alpha);
    r.p_estimate = position_lc(dual, opts.lc);
  } else if (const auto* st = std::get_if<StudentT>(&s)) {
    r.p_estimate = student_momentum_lc(*st, s, r.plan, opts.lc);
  } else {
    // Hermite superposition: momentum density is analytic
    const double R = states::support_radius(s);
    r.p_estimate = lipschitz::lipschitz_constant(momentum_callables(s),
                                                 {-R, R}, opts.lc);
  }
  r.eta_p = r.p_estimate.value;
  r.product_tilde = checked_product(r.eta_x, r.eta_p);
  return r;
}

std::vector<std::pair<int, double>> sho_level_scan(int n_max, double alpha,
                                                   const Options& opts) {
  if (n_max < 0 || n_max > 64)
    throw std::invalid_argument("sho_level_scan: n_max must be in [0, 64]");
  std::vector<std::pair<int, double>> out(n_max + 1);
  int threads = opts.threads > 0 ? opts.threads
                                 : (int)std::thread::hardware_concurrency();
  threads = std::max(1, std::min(threads, n_max + 1));
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int n = next.fetch_add(1);
      if (n > n_max) return;
      const auto res = reciprocity_product(states::make_sho(n, alpha), opts);
      out[n] = {n, res.product_tilde};
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

std::vector<std::pair<int, double>> student_dof_scan(
    const std::vector<int>& dofs, const Options& opts) {
  for (int d : dofs)
    if (d < 3)
      throw std::invalid_argument("student_dof_scan: each dof must be >= 3");
  std::vector<std::pair<int, double>> out;
  out.reserve(dofs.size());
  for (int d : dofs) {
    const auto res = reciprocity_product(states::make_student(d), opts);
    out.emplace_back(d, res.product_tilde);
  }
  return out;
}

double uncertainty_product(const StateSpec& s) {
  if (std::holds_alternative<CauchyLorentz>(s) ||
      (std::holds_alternative<StudentT>(s) && std::get<StudentT>(s).dof == 2))
    throw std::domain_error("infinite variance");

  const double R = std::min(states::support_radius(s), 4000.0);
  auto f = [&s](double x) { return states::position_density(s, x); };
  double mean_x = integrate([&](double x) { return x * f(x); }, -R, R, 1e-12);
  double x2 = integrate([&](double x) { return x * x * f(x); }, -R, R, 1e-12);

  if (const auto* st = std::get_if<StudentT>(&s)) {
    // analytic tail of int x^2 f beyond the quadrature window
    const int n = st->dof;
    const double X = R;
    const double c = std::exp(specfun::log_gamma((n + 1) / 2.0) -
                              specfun::log_gamma(n / 2.0)) /
                     std::sqrt(n * M_PI);
    x2 += 2.0 * c * std::pow(n, (n + 1) / 2.0) * std::pow(X, -(n - 2.0)) / (n - 2.0);
  }
  const double var_x = x2 - mean_x * mean_x;

  double var_p;
  if (const auto* st = std::get_if<StudentT>(&s)) {
    const auto plan = states::default_plan(s);
    const auto tr = states::transform_state(s, plan);
    double sum = 0.0;
    for (int k = 0; k < tr.phi.n_points; ++k) {
      const double p = tr.phi.coord(k);
      const double w = (k == 0 || k == tr.phi.n_points - 1) ? 0.5 : 1.0;
      sum += w * p * p * std::norm(tr.phi.values[k]);
    }
    var_p = sum * tr.phi.spacing();
    (void)st;
  } else {
    auto g = [&s](double p) { return states::momentum_density(s, p); };
    double Rp = R;
    if (const auto* sho = std::get_if<Sho>(&s))
      Rp = (std::sqrt(2.0 * sho->level + 1.0) + 10.0) * std::sqrt(sho->alpha);
    const double mean_p =
        integrate([&](double p) { return p * g(p); }, -Rp, Rp, 1e-12);
    const double p2 =
        integrate([&](double p) { return p * p * g(p); }, -Rp, Rp, 1e-12);
    var_p = p2 - mean_p * mean_p;
  }
  if (!(var_x > 0.0) || !(var_p > 0.0))
    throw std::runtime_error("uncertainty_product: non-positive variance");
  return std::sqrt(var_x * var_p);
}

}  // namespace qrp::reciprocity
