#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

// Estimation of Lipschitz constants of probability densities on intervals,
// the full line, and punctured domains R_eps = (-inf,-eps] u [eps,inf), plus
// divergence-model fitting. For a differentiable density the Lipschitz
// constant is sup |f'| (mean value theorem), so the estimator maximizes the
// derivative magnitude: a coarse scan followed by local refinement, with
// cusp flagging and one-sided probing for densities that blow up.

namespace qrp::lipschitz {

// Density callable with optional analytic derivative; with no derivative the
// estimator falls back to central differences, step max(1e-6, 1e-8 |x|).
struct Density {
  std::function<double(double)> value;
  std::function<double(double)> derivative;  // may be empty
};

// [lo, hi]; either side may be infinite, in which case the effective support
// is found by doubling from scale_hint until the derivative is negligible.
struct Domain {
  double lo;
  double hi;
  double scale_hint = 1.0;
};

struct Options {
  int coarse_points = 1 << 16;
  int refine_top = 8;                     // local maxima refined per estimate
  double refine_rel_tol = 1e-10;
  double divergence_growth = 10.0;        // flag threshold across two levels
  double cusp_second_diff_factor = 1e6;   // vs median second difference
};

struct LipschitzEstimate {
  double value = 0.0;       // sup |f'|; grid-limited lower bound if divergent
  double argmax_x = 0.0;
  int coarse_grid_points = 0;
  bool refined = false;
  bool divergent = false;
};

// Two-stage estimate of sup |f'| over the domain. Throws std::invalid_argument
// for an empty domain and std::runtime_error when f/f' return non-finite
// values away from isolated singular points.
LipschitzEstimate lipschitz_constant(const Density& f, Domain domain,
                                     const Options& opts = {});

// Same estimator on |x| >= eps, outer truncation at |x| = outer. The boundary
// points +-eps enter the supremum with their one-sided derivatives.
LipschitzEstimate lipschitz_on_punctured(const Density& f, double eps,
                                         double outer,
                                         const Options& opts = {});

// Lower-bound witness: max of |f(x1)-f(x2)|/|x1-x2| over all adjacent pairs of
// a uniform grid plus stratified random pairs. Never exceeds the derivative
// supremum of a differentiable f by more than rounding.
double pair_ratio_validator(const Density& f, Domain domain, long n_pairs,
                            std::uint64_t seed = 0x9e3779b9u);

enum class DivergenceModel {
  linear_in_inverse_epsilon,      // lc ~ a / eps + b
  quadratic_in_log_inverse_epsilon  // lc ~ a u^2 + b u + c, u = ln(1/eps)
};

struct DivergenceFit {
  DivergenceModel model;
  std::vector<double> coefficients;  // highest order first
  double r_squared = 0.0;
};

// Least-squares fit of (epsilon, lc) samples; epsilons must be strictly
// decreasing, at least 4 samples. Throws std::runtime_error if the normal
// equations are rank deficient.
DivergenceFit fit_divergence(const std::vector<std::pair<double, double>>& samples,
                             DivergenceModel model);

// LC of f on R_eps for `points` log-spaced epsilons from eps_max down to
// eps_min (strictly decreasing, ready for fit_divergence).
std::vector<std::pair<double, double>> epsilon_sweep(const Density& f,
                                                     double eps_min,
                                                     double eps_max, int points,
                                                     double outer,
                                                     const Options& opts = {});

}  // namespace qrp::lipschitz
