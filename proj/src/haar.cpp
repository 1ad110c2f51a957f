#include "qrp/haar.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "qrp/specfun.hpp"

namespace qrp::haar {

namespace {

// splitmix64; the per-index stream folds the index into the seed so draws are
// independent of evaluation order
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

struct Rng {
  std::uint64_t state;
  Rng(std::uint64_t seed, std::uint64_t index)
      : state(mix64(seed) ^ mix64(0xA511E9B3C0FE2905ull + index)) {}
  double uniform() {  // (0, 1]
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    return ((z >> 11) + 1) * 0x1.0p-53;
  }
  // Box-Muller pair
  void normal_pair(double& a, double& b) {
    const double u1 = uniform(), u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    a = r * std::cos(2.0 * M_PI * u2);
    b = r * std::sin(2.0 * M_PI * u2);
  }
};

std::vector<std::complex<double>> draw_coeffs(const SearchConfig& config,
                                              long index) {
  Rng rng(config.seed, static_cast<std::uint64_t>(index));
  const int dim = config.degree + 1;
  std::vector<std::complex<double>> c(dim);
  double a, b;
  if (config.field == Field::complex) {
    for (int k = 0; k < dim; ++k) {
      rng.normal_pair(a, b);
      c[k] = {a, b};
    }
  } else {
    for (int k = 0; k < dim; k += 2) {
      rng.normal_pair(a, b);
      c[k] = a;
      if (k + 1 < dim) c[k + 1] = b;
    }
  }
  double n2 = 0.0;
  for (const auto& v : c) n2 += std::norm(v);
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& v : c) v *= inv;
  return c;
}

// Basis tables on a fixed grid for fast sup|f'| evaluation; one instance per
// worker thread (the eval buffers are mutable scratch).
class EtaWorkspace {
 public:
  EtaWorkspace(int degree, int n_points = 4096, double radius = 12.0)
      : degree_(degree), n_(n_points), radius_(radius) {
    h_.resize((degree + 1) * n_points);
    dh_.resize((degree + 1) * n_points);
    x_.resize(n_points);
    std::vector<double> hv(degree + 2), dv(degree + 2);
    for (int i = 0; i < n_points; ++i) {
      x_[i] = -radius + 2.0 * radius * i / (n_points - 1);
      specfun::hermite_function_series_deriv(degree, x_[i], hv, dv);
      for (int k = 0; k <= degree; ++k) {
        h_[k * n_points + i] = hv[k];
        dh_[k * n_points + i] = dv[k];
      }
    }
    psi_re_.resize(n_points);
    psi_im_.resize(n_points);
    dpsi_re_.resize(n_points);
    dpsi_im_.resize(n_points);
  }

  int degree() const { return degree_; }

  // sup_x |d/dx |sum_k c_k h_k(x)|^2|
  double eta(std::span<const std::complex<double>> c) {
    std::fill(psi_re_.begin(), psi_re_.end(), 0.0);
    std::fill(psi_im_.begin(), psi_im_.end(), 0.0);
    std::fill(dpsi_re_.begin(), dpsi_re_.end(), 0.0);
    std::fill(dpsi_im_.begin(), dpsi_im_.end(), 0.0);
    for (int k = 0; k <= degree_; ++k) {
      const double cr = c[k].real(), ci = c[k].imag();
      const double* hk = &h_[k * n_];
      const double* dk = &dh_[k * n_];
      for (int i = 0; i < n_; ++i) {
        psi_re_[i] += cr * hk[i];
        psi_im_[i] += ci * hk[i];
        dpsi_re_[i] += cr * dk[i];
        dpsi_im_[i] += ci * dk[i];
      }
    }
    // top local maxima of |f'|, then golden refinement with exact evals
    double best1 = -1.0, best2 = -1.0, best3 = -1.0;
    int idx1 = 0, idx2 = 0, idx3 = 0;
    double prev = fprime_mag(0);
    double cur = fprime_mag(1);
    for (int i = 1; i + 1 < n_; ++i) {
      const double next = fprime_mag(i + 1);
      if (cur >= prev && cur >= next) {
        if (cur > best1) {
          best3 = best2; idx3 = idx2;
          best2 = best1; idx2 = idx1;
          best1 = cur; idx1 = i;
        } else if (cur > best2) {
          best3 = best2; idx3 = idx2;
          best2 = cur; idx2 = i;
        } else if (cur > best3) {
          best3 = cur; idx3 = i;
        }
      }
      prev = cur;
      cur = next;
    }
    double out = std::max(best1, 0.0);
    const double cell = x_[1] - x_[0];
    for (auto [b, idx] : {std::pair{best1, idx1}, {best2, idx2}, {best3, idx3}}) {
      if (b < 0.0) continue;
      out = std::max(out, refine(c, x_[idx] - cell, x_[idx] + cell));
    }
    return out;
  }

  double eta_exact(std::span<const std::complex<double>> c, double x) const {
    std::vector<double> hv(degree_ + 2), dv(degree_ + 2);
    specfun::hermite_function_series_deriv(degree_, x, hv, dv);
    std::complex<double> psi{0, 0}, dpsi{0, 0};
    for (int k = 0; k <= degree_; ++k) {
      psi += c[k] * hv[k];
      dpsi += c[k] * dv[k];
    }
    return std::abs(2.0 * std::real(std::conj(psi) * dpsi));
  }

 private:
  double fprime_mag(int i) const {
    return std::abs(2.0 * (psi_re_[i] * dpsi_re_[i] + psi_im_[i] * dpsi_im_[i]));
  }

  double refine(std::span<const std::complex<double>> c, double a, double b) const {
    constexpr double kGolden = 0.6180339887498949;
    double lo = std::max(a, -radius_), hi = std::min(b, radius_);
    double p = hi - kGolden * (hi - lo);
    double q = lo + kGolden * (hi - lo);
    double fp = eta_exact(c, p), fq = eta_exact(c, q);
    for (int it = 0; it < 40 && hi - lo > 1e-7; ++it) {
      if (fp > fq) {
        hi = q; q = p; fq = fp;
        p = hi - kGolden * (hi - lo);
        fp = eta_exact(c, p);
      } else {
        lo = p; p = q; fp = fq;
        q = lo + kGolden * (hi - lo);
        fq = eta_exact(c, q);
      }
    }
    return std::max(fp, fq);
  }

  int degree_, n_;
  double radius_;
  std::vector<double> x_, h_, dh_;
  std::vector<double> psi_re_, psi_im_, dpsi_re_, dpsi_im_;
};

std::vector<std::complex<double>> rotate_to_momentum(
    std::span<const std::complex<double>> c) {
  static const std::complex<double> phases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  std::vector<std::complex<double>> d(c.size());
  for (size_t k = 0; k < c.size(); ++k) d[k] = phases[k % 4] * c[k];
  return d;
}

double objective_value(EtaWorkspace& ws, Objective objective,
                       std::span<const std::complex<double>> c) {
  if (objective == Objective::uncertainty) return uncertainty_from_coeffs(c);
  const double ex = ws.eta(c);
  const auto d = rotate_to_momentum(c);
  const double ep = ws.eta(d);
  return std::sqrt(ex * ep);
}

// evaluates objective for indices [0, n) in parallel, values retained per
// index so prefix minima (history) are deterministic under any thread count
void evaluate_block(const SearchConfig& config, Objective objective, long begin,
                    long end, std::vector<double>& values) {
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, threads);
  std::atomic<long> next{begin};
  auto worker = [&]() {
    EtaWorkspace ws(config.degree);
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= end) return;
      const auto c = draw_coeffs(config, i);
      values[i] = objective_value(ws, objective, c);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

SearchResult run_search(const SearchConfig& config, Objective objective) {
  validate(config);
  SearchResult result;
  std::vector<double> values;

  long n = config.num_samples;
  long evaluated = 0;
  double prev_min = 0.0;
  for (int round = 0;; ++round) {
    values.resize(n);
    evaluate_block(config, objective, evaluated, n, values);
    evaluated = n;
    if (!config.doubling) break;
    const double cur_min = *std::min_element(values.begin(), values.end());
    if (round > 0 && std::abs(prev_min - cur_min) < kDoublingThreshold) {
      result.converged = true;
      break;
    }
    prev_min = cur_min;
    if (n >= (1L << 22)) {  // budget guard; unconverged is reported, not hidden
      result.converged = false;
      break;
    }
    n *= 2;
  }

  // running minima at doubling checkpoints from 100
  double running = values[0];
  long best_index = 0;
  long checkpoint = 100;
  for (long i = 0; i < evaluated; ++i) {
    if (values[i] < running) {
      running = values[i];
      best_index = i;
    }
    if (i + 1 == checkpoint || i + 1 == evaluated) {
      result.history.emplace_back(i + 1, running);
      checkpoint *= 2;
    }
  }
  result.min_product = running;
  result.samples_used = evaluated;
  result.argmin_coeffs = draw_coeffs(config, best_index);
  if (!config.doubling) result.converged = true;
  return result;
}

}  // namespace

void validate(const SearchConfig& config) {
  if (config.degree < 2 || config.degree > 8)
    throw std::invalid_argument("haar: degree must be in [2, 8]");
  if (config.num_samples < 100)
    throw std::invalid_argument("haar: num_samples must be >= 100");
}

states::StateSpec sample_state(const SearchConfig& config, long index) {
  validate(config);
  if (index < 0 || index >= config.num_samples)
    throw std::invalid_argument("sample_state: index out of range");
  return states::make_hermite(draw_coeffs(config, index));
}

SearchResult minimize_reciprocity(const SearchConfig& config) {
  return run_search(config, Objective::reciprocity);
}

SearchResult minimize_uncertainty(const SearchConfig& config) {
  return run_search(config, Objective::uncertainty);
}

double uncertainty_from_coeffs(std::span<const std::complex<double>> coeffs) {
  const int dim = static_cast<int>(coeffs.size());
  // x h_k = sqrt(k/2) h_{k-1} + sqrt((k+1)/2) h_{k+1}
  // p h_k = -i sqrt(k/2) h_{k-1} + i sqrt((k+1)/2) h_{k+1}
  std::vector<std::complex<double>> xc(dim + 1, 0.0), pc(dim + 1, 0.0);
  const std::complex<double> im{0.0, 1.0};
  for (int k = 0; k < dim; ++k) {
    const double dn = std::sqrt(k / 2.0), up = std::sqrt((k + 1) / 2.0);
    if (k >= 1) {
      xc[k - 1] += dn * coeffs[k];
      pc[k - 1] += -im * dn * coeffs[k];
    }
    xc[k + 1] += up * coeffs[k];
    pc[k + 1] += im * up * coeffs[k];
  }
  double mean_x = 0.0, mean_p = 0.0, x2 = 0.0, p2 = 0.0;
  for (int k = 0; k < dim + 1; ++k) {
    if (k < dim) {
      mean_x += std::real(std::conj(coeffs[k]) * xc[k]);
      mean_p += std::real(std::conj(coeffs[k]) * pc[k]);
    }
    x2 += std::norm(xc[k]);
    p2 += std::norm(pc[k]);
  }
  return std::sqrt((x2 - mean_x * mean_x) * (p2 - mean_p * mean_p));
}

double reciprocity_from_coeffs(std::span<const std::complex<double>> coeffs) {
  EtaWorkspace ws(static_cast<int>(coeffs.size()) - 1);
  const double ex = ws.eta(coeffs);
  const auto d = rotate_to_momentum(coeffs);
  return std::sqrt(ex * ws.eta(d));
}

PolishResult polish_minimum(const SearchResult& seed_result, Objective objective,
                            int max_evaluations) {
  PolishResult out;
  out.coeffs = seed_result.argmin_coeffs;
  const int dim = static_cast<int>(out.coeffs.size());
  EtaWorkspace ws(dim - 1);
  int evals = 0;
  auto value_of = [&](const std::vector<std::complex<double>>& c) {
    ++evals;
    return objective_value(ws, objective, c);
  };
  out.value = value_of(out.coeffs);

  double step = 0.05;
  constexpr double kGolden = 0.6180339887498949;
  while (evals < max_evaluations && step > 1e-7) {
    bool improved = false;
    for (int k = 0; k < 2 * dim && evals < max_evaluations; ++k) {
      const int coeff = k / 2;
      const bool imag_part = k % 2;
      auto probe = [&](double t) {
        auto c = out.coeffs;
        c[coeff] += imag_part ? std::complex<double>(0, t)
                              : std::complex<double>(t, 0);
        double n2 = 0.0;
        for (const auto& v : c) n2 += std::norm(v);
        const double inv = 1.0 / std::sqrt(n2);
        for (auto& v : c) v *= inv;
        return std::pair{value_of(c), c};
      };
      // golden section on t in [-step, step]
      double lo = -step, hi = step;
      auto [vbest, cbest] = std::pair{out.value, out.coeffs};
      for (int it = 0; it < 8 && evals < max_evaluations; ++it) {
        const double p = hi - kGolden * (hi - lo);
        const double q = lo + kGolden * (hi - lo);
        auto [vp, cp] = probe(p);
        auto [vq, cq] = probe(q);
        if (vp < vbest) { vbest = vp; cbest = cp; }
        if (vq < vbest) { vbest = vq; cbest = cq; }
        if (vp < vq) hi = q; else lo = p;
      }
      if (vbest < out.value - 1e-15) {
        out.value = vbest;
        out.coeffs = cbest;
        improved = true;
      }
    }
    if (!improved) step *= 0.25;
  }
  out.evaluations = evals;
  return out;
}

}  // namespace qrp::haar
