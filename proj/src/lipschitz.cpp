#include "qrp/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrp::lipschitz {

namespace {

constexpr double kGolden = 0.6180339887498949;

double eval_derivative(const Density& f, double x) {
  if (f.derivative) return f.derivative(x);
  const double h = std::max(1e-6, 1e-8 * std::abs(x));
  return (f.value(x + h) - f.value(x - h)) / (2.0 * h);
}

// golden-section maximum of |f'| on [a, b]; returns {x, |f'(x)|}
std::pair<double, double> golden_max_abs_deriv(const Density& f, double a,
                                               double b, double rel_tol) {
  auto s = [&](double x) { return std::abs(eval_derivative(f, x)); };
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = s(c), fd = s(d);
  for (int it = 0; it < 200; ++it) {
    if (b - a <= rel_tol * (1.0 + std::abs(a) + std::abs(b))) break;
    if (fc > fd) {
      b = d; d = c; fd = fc;
      c = b - kGolden * (b - a);
      fc = s(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + kGolden * (b - a);
      fd = s(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

struct CoarseScan {
  std::vector<double> x;
  std::vector<double> deriv;          // f'(x_i); NaN where non-finite
  std::vector<int> singular;          // flagged cusp cells (index of left edge)
  double best = 0.0;
  int best_index = 0;
};

CoarseScan coarse_scan(const Density& f, double lo, double hi, int n,
                       double cusp_factor) {
  CoarseScan scan;
  scan.x.resize(n);
  scan.deriv.resize(n);
  const double h = (hi - lo) / (n - 1);
  int bad = 0;
  for (int i = 0; i < n; ++i) {
    scan.x[i] = lo + i * h;
    double d = eval_derivative(f, scan.x[i]);
    if (!std::isfinite(d)) {
      ++bad;
      d = std::numeric_limits<double>::quiet_NaN();
    }
    scan.deriv[i] = d;
    const double a = std::abs(d);
    if (std::isfinite(a) && a > scan.best) {
      scan.best = a;
      scan.best_index = i;
    }
  }
  if (bad > 2)
    throw std::runtime_error("lipschitz_constant: density returns non-finite values");

  // cusp candidates: second difference of f (first difference of f') far
  // above the median, or non-finite samples
  std::vector<double> jumps(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const double j = std::abs(scan.deriv[i + 1] - scan.deriv[i]);
    jumps[i] = std::isfinite(j) ? j : std::numeric_limits<double>::infinity();
  }
  std::vector<double> sorted = jumps;
  std::nth_element(sorted.begin(), sorted.begin() + (n - 1) / 2, sorted.end());
  const double median = std::max(sorted[(n - 1) / 2], 1e-300);
  for (int i = 0; i + 1 < n; ++i) {
    if (jumps[i] > cusp_factor * median || !std::isfinite(scan.deriv[i]) ||
        !std::isfinite(scan.deriv[i + 1]))
      scan.singular.push_back(i);
  }
  return scan;
}

// locate the singular point inside [a, b] by sign-change bisection of f'
// (falling back to the steeper side), then measure the one-sided growth of
// |f'| approaching it.
struct CuspProbe {
  double value = 0.0;     // largest |f'| seen on the approach
  double argmax = 0.0;
  bool divergent = false;
};

CuspProbe probe_cusp(const Density& f, double a, double b, double lo, double hi,
                     double growth_limit) {
  const double h0 = b - a;
  double fa = eval_derivative(f, a);
  double fb = eval_derivative(f, b);
  for (int it = 0; it < 16; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = eval_derivative(f, m);
    const bool sign_split = std::isfinite(fa) && std::isfinite(fm) &&
                            std::signbit(fa) != std::signbit(fm);
    if (sign_split || !std::isfinite(fm) ||
        (std::isfinite(fa) && std::isfinite(fb) &&
         std::abs(fa) >= std::abs(fb))) {
      b = m; fb = fm;
    } else {
      a = m; fa = fm;
    }
  }
  const double c = 0.5 * (a + b);

  CuspProbe probe;
  double level_value[3] = {0, 0, 0};
  for (int level = 0; level < 3; ++level) {
    const double r = h0 * std::pow(16.0, -level);
    for (double sgn : {-1.0, 1.0}) {
      const double x = c + sgn * r;
      if (x < lo || x > hi) continue;
      const double d = eval_derivative(f, x);
      if (!std::isfinite(d)) continue;
      level_value[level] = std::max(level_value[level], std::abs(d));
      if (std::abs(d) > probe.value) {
        probe.value = std::abs(d);
        probe.argmax = x;
      }
    }
  }
  if (level_value[0] > 0.0 &&
      level_value[2] > growth_limit * level_value[0])
    probe.divergent = true;
  return probe;
}

LipschitzEstimate estimate_on_interval(const Density& f, double lo, double hi,
                                       const Options& opts) {
  if (!(lo < hi)) throw std::invalid_argument("lipschitz_constant: empty domain");
  if (!f.value && !f.derivative)
    throw std::invalid_argument("lipschitz_constant: no callable supplied");

  const int n = std::max(opts.coarse_points, 16);
  CoarseScan scan = coarse_scan(f, lo, hi, n, opts.cusp_second_diff_factor);
  const double h = (hi - lo) / (n - 1);

  LipschitzEstimate est;
  est.coarse_grid_points = n;
  est.value = scan.best;
  est.argmax_x = scan.x[scan.best_index];

  // candidate cells: local maxima of |f'| plus both boundary cells
  std::vector<std::pair<double, int>> candidates;
  auto mag = [&](int i) {
    const double d = scan.deriv[i];
    return std::isfinite(d) ? std::abs(d) : 0.0;
  };
  for (int i = 1; i + 1 < n; ++i)
    if (mag(i) >= mag(i - 1) && mag(i) >= mag(i + 1))
      candidates.push_back({mag(i), i});
  candidates.push_back({mag(0), 0});
  candidates.push_back({mag(n - 1), n - 1});
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  const int top = std::min<int>(opts.refine_top, candidates.size());
  for (int k = 0; k < top; ++k) {
    const int i = candidates[k].second;
    const double a = std::max(lo, scan.x[i] - h);
    const double b = std::min(hi, scan.x[i] + h);
    const auto [x, v] = golden_max_abs_deriv(f, a, b, opts.refine_rel_tol);
    if (v > est.value) {
      est.value = v;
      est.argmax_x = x;
    }
  }
  est.refined = true;

  for (int i : scan.singular) {
    const double a = std::max(lo, scan.x[i] - h);
    const double b = std::min(hi, scan.x[std::min(i + 1, n - 1)] + h);
    const CuspProbe probe = probe_cusp(f, a, b, lo, hi, opts.divergence_growth);
    if (probe.value > est.value) {
      est.value = probe.value;
      est.argmax_x = probe.argmax;
    }
    if (probe.divergent) est.divergent = true;
  }
  return est;
}

double expand_support(const Density& f, double scale_hint, bool positive_side) {
  double L = std::max(std::abs(scale_hint), 1.0);
  const double sign = positive_side ? 1.0 : -1.0;
  // reference magnitude from a sparse interior scan
  double peak = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double x = sign * L * i / 64.0;
    const double d = eval_derivative(f, x);
    if (std::isfinite(d)) peak = std::max(peak, std::abs(d));
  }
  peak = std::max(peak, 1e-300);
  for (int it = 0; it < 40; ++it) {
    const double d = eval_derivative(f, sign * L);
    if (std::isfinite(d) && std::abs(d) <= 1e-13 * peak) return sign * L;
    L *= 2.0;
  }
  return sign * L;
}

}  // namespace

LipschitzEstimate lipschitz_constant(const Density& f, Domain domain,
                                     const Options& opts) {
  double lo = domain.lo, hi = domain.hi;
  if (std::isinf(lo)) lo = expand_support(f, domain.scale_hint, false);
  if (std::isinf(hi)) hi = expand_support(f, domain.scale_hint, true);
  return estimate_on_interval(f, lo, hi, opts);
}

LipschitzEstimate lipschitz_on_punctured(const Density& f, double eps,
                                         double outer, const Options& opts) {
  if (!(eps > 0.0))
    throw std::invalid_argument("lipschitz_on_punctured: epsilon must be positive");
  if (!(outer > eps))
    throw std::invalid_argument("lipschitz_on_punctured: outer must exceed epsilon");
  Options half = opts;
  half.coarse_points = std::max(opts.coarse_points / 2, 16);
  const LipschitzEstimate right = estimate_on_interval(f, eps, outer, half);
  const LipschitzEstimate left = estimate_on_interval(f, -outer, -eps, half);
  LipschitzEstimate est = right.value >= left.value ? right : left;
  est.coarse_grid_points = left.coarse_grid_points + right.coarse_grid_points;
  est.divergent = left.divergent || right.divergent;
  return est;
}

double pair_ratio_validator(const Density& f, Domain domain, long n_pairs,
                            std::uint64_t seed) {
  if (n_pairs < 1)
    throw std::invalid_argument("pair_ratio_validator: need at least one pair");
  double lo = domain.lo, hi = domain.hi;
  if (std::isinf(lo)) lo = expand_support(f, domain.scale_hint, false);
  if (std::isinf(hi)) hi = expand_support(f, domain.scale_hint, true);

  const long grid_pairs = std::min<long>(n_pairs, 1L << 16);
  const double h = (hi - lo) / grid_pairs;
  double best = 0.0;
  int bad = 0;
  auto slope = [&](double x1, double x2) {
    const double f1 = f.value(x1), f2 = f.value(x2);
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
      ++bad;
      return 0.0;
    }
    return std::abs(f1 - f2) / std::abs(x1 - x2);
  };
  double prev = f.value(lo);
  for (long i = 1; i <= grid_pairs; ++i) {
    const double x = lo + i * h;
    const double cur = f.value(x);
    if (std::isfinite(prev) && std::isfinite(cur))
      best = std::max(best, std::abs(cur - prev) / h);
    else
      ++bad;
    prev = cur;
  }

  // stratified random pairs with sub-cell gaps
  std::uint64_t state = seed;
  auto next_u01 = [&state]() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return (z >> 11) * 0x1.0p-53;
  };
  const long random_pairs = n_pairs;
  for (long i = 0; i < random_pairs; ++i) {
    const double stratum = lo + (hi - lo) * (i + next_u01()) / random_pairs;
    const double gap = (0.05 + 3.95 * next_u01()) * h;
    const double x2 = std::min(stratum + gap, hi);
    if (x2 > stratum) best = std::max(best, slope(stratum, x2));
  }
  if (bad > 2 + random_pairs / 16)
    throw std::runtime_error("pair_ratio_validator: density returns non-finite values");
  return best;
}

DivergenceFit fit_divergence(const std::vector<std::pair<double, double>>& samples,
                             DivergenceModel model) {
  if (samples.size() < 4)
    throw std::invalid_argument("fit_divergence: need at least 4 samples");
  for (size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].first < samples[i - 1].first))
      throw std::invalid_argument("fit_divergence: epsilons must be strictly decreasing");
  for (const auto& [eps, lc] : samples)
    if (!(eps > 0.0) || !std::isfinite(lc))
      throw std::invalid_argument("fit_divergence: bad sample");

  const int terms = model == DivergenceModel::linear_in_inverse_epsilon ? 2 : 3;
  const size_t m = samples.size();
  std::vector<std::vector<long double>> design(m, std::vector<long double>(terms));
  std::vector<long double> y(m);
  for (size_t i = 0; i < m; ++i) {
    const double eps = samples[i].first;
    y[i] = samples[i].second;
    if (model == DivergenceModel::linear_in_inverse_epsilon) {
      design[i][0] = 1.0L / eps;
      design[i][1] = 1.0L;
    } else {
      const long double u = std::log(1.0 / eps);
      design[i][0] = u * u;
      design[i][1] = u;
      design[i][2] = 1.0L;
    }
  }
  // normal equations, partial-pivot elimination
  std::vector<std::vector<long double>> ata(terms, std::vector<long double>(terms, 0.0L));
  std::vector<long double> aty(terms, 0.0L);
  for (size_t i = 0; i < m; ++i)
    for (int r = 0; r < terms; ++r) {
      aty[r] += design[i][r] * y[i];
      for (int c = 0; c < terms; ++c) ata[r][c] += design[i][r] * design[i][c];
    }
  for (int col = 0; col < terms; ++col) {
    int pivot = col;
    for (int r = col + 1; r < terms; ++r)
      if (std::abs((double)ata[r][col]) > std::abs((double)ata[pivot][col])) pivot = r;
    std::swap(ata[col], ata[pivot]);
    std::swap(aty[col], aty[pivot]);
    if (std::abs((double)ata[col][col]) < 1e-280)
      throw std::runtime_error("fit_divergence: design matrix is rank deficient");
    for (int r = col + 1; r < terms; ++r) {
      const long double factor = ata[r][col] / ata[col][col];
      for (int c = col; c < terms; ++c) ata[r][c] -= factor * ata[col][c];
      aty[r] -= factor * aty[col];
    }
  }
  std::vector<long double> beta(terms);
  for (int r = terms - 1; r >= 0; --r) {
    long double s = aty[r];
    for (int c = r + 1; c < terms; ++c) s -= ata[r][c] * beta[c];
    beta[r] = s / ata[r][r];
  }

  long double mean = 0.0L;
  for (size_t i = 0; i < m; ++i) mean += y[i];
  mean /= m;
  long double ss_res = 0.0L, ss_tot = 0.0L;
  for (size_t i = 0; i < m; ++i) {
    long double fit = 0.0L;
    for (int c = 0; c < terms; ++c) fit += design[i][c] * beta[c];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  DivergenceFit out;
  out.model = model;
  out.coefficients.assign(beta.begin(), beta.end());
  out.r_squared = ss_tot > 0.0L ? (double)(1.0L - ss_res / ss_tot)
                                : (ss_res == 0.0L ? 1.0 : 0.0);
  return out;
}

std::vector<std::pair<double, double>> epsilon_sweep(const Density& f,
                                                     double eps_min,
                                                     double eps_max, int points,
                                                     double outer,
                                                     const Options& opts) {
  if (!(0.0 < eps_min && eps_min < eps_max))
    throw std::invalid_argument("epsilon_sweep: need 0 < eps_min < eps_max");
  if (points < 2) throw std::invalid_argument("epsilon_sweep: need >= 2 points");
  std::vector<std::pair<double, double>> out;
  out.reserve(points);
  const double lmax = std::log(eps_max), lmin = std::log(eps_min);
  for (int i = 0; i < points; ++i) {
    const double eps = std::exp(lmax + (lmin - lmax) * i / (points - 1));
    out.emplace_back(eps, lipschitz_on_punctured(f, eps, outer, opts).value);
  }
  return out;
}

}  // namespace qrp::lipschitz
