#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qrp/lipschitz.hpp"
#include "qrp/states.hpp"

// The reciprocity product sqrt(eta_x eta_p) of the square roots of the
// Lipschitz constants of the position and momentum densities, in units of
// 1/hbar (hbar = 1), together with the comparison uncertainty product.

namespace qrp::reciprocity {

struct Options {
  lipschitz::Options lc;
  int sweep_points = 24;
  // per-family defaults resolved in divergence_sweep_range; 0 means default
  double sweep_eps_min = 0.0;
  double sweep_eps_max = 0.0;
  int threads = 0;  // 0: hardware concurrency
};

struct ReciprocityResult {
  double eta_x = 0.0;
  double eta_p = 0.0;
  double product_tilde = 0.0;  // +inf sentinel when divergent
  bool divergent = false;
  lipschitz::LipschitzEstimate x_estimate;
  lipschitz::LipschitzEstimate p_estimate;
  // attached for divergent momentum densities so figures can plot the blow-up
  std::vector<std::pair<double, double>> divergence_sweep;
  std::optional<lipschitz::DivergenceFit> divergence_fit;
  states::TransformPlan plan;
};

// Divergence-probe window for a state's momentum density. The Cauchy blow-up
// is probed on [1e-3, 1e-1]; the Student dof=2 blow-up on [1e-2, 1e-1], where
// its quadratic-in-log growth model is calibrated.
std::pair<double, double> divergence_sweep_range(const states::StateSpec& s);

ReciprocityResult reciprocity_product(const states::StateSpec& s,
                                      const Options& opts = {});

// Products for oscillator levels 0..n_max (alpha-independent by dilation
// invariance; computed at the given alpha).
std::vector<std::pair<int, double>> sho_level_scan(int n_max, double alpha,
                                                   const Options& opts = {});

// Products per Student-t degrees-of-freedom value (each dof >= 3).
std::vector<std::pair<int, double>> student_dof_scan(
    const std::vector<int>& dofs, const Options& opts = {});

// Delta x Delta p in units of hbar via quadrature of the densities. Throws
// std::domain_error("infinite variance") for CauchyLorentz and StudentT dof=2.
double uncertainty_product(const states::StateSpec& s);

}  // namespace qrp::reciprocity
