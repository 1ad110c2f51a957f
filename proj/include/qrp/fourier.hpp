#pragma once

#include <complex>
#include <functional>

#include "qrp/sampled_function.hpp"

// Numerical approximation of the continuous transform
//   phi(p) = (2 pi hbar)^(-1/2) int psi(x) e^{-i x p / hbar} dx
// on the conjugate grid of a position grid, with the continuum measure and
// shift-phase corrections applied so the discrete result converges to the
// continuum transform as the grid refines. hbar = 1 throughout.

namespace qrp::fourier {

// |x|^(-s) asymptotics of a (real, centered) wavefunction beyond |x| = start:
//   psi(x) ~ amplitude |x|^-exponent + second_amplitude |x|^-second_exponent.
// Used to correct truncation of heavy-tailed integrands.
struct PowerTail {
  bool present = false;
  double amplitude = 0.0;
  double exponent = 0.0;
  double second_amplitude = 0.0;
  double second_exponent = 0.0;
  double start = 0.0;
};

struct TransformOptions {
  PowerTail tail;
  // below this |p| the analytic tail correction is skipped (slowly convergent)
  double tail_correction_min_p = 0.1;
  bool check_normalization = true;       // grid norm + tail mass within 1e-6 of 1
  double window_tail_mass = 0.0;         // |psi|^2 mass outside the window
};

struct TransformResult {
  SampledFunction phi;
  // change of int |phi|^2 when the grid resolution is halved; > 1e-6 means the
  // sampling has not converged
  double refinement_norm_change = 0.0;
  bool converged = true;
};

TransformResult to_momentum(const SampledFunction& psi,
                            const TransformOptions& opts = {});

// |int |psi|^2 dx - int |phi|^2 dp| with the recorded off-window mass added to
// the position side. Grid sums alone agree to rounding by Parseval, so the
// residual surfaces exactly the truncation deficit of the window.
double plancherel_residual(const SampledFunction& psi,
                           const SampledFunction& phi,
                           double window_tail_mass = 0.0);

// Direct quadrature of the transform at a single p for a real, even psi:
//   phi(p) = sqrt(2/pi) int_0^inf psi(x) cos(p x) dx        (hbar = 1)
// with the power-tail handled analytically beyond x_radius. Slow path; used
// where interpolation error is unacceptable (derivative refinement).
double transform_point_even(const std::function<double(double)>& psi, double p,
                            double x_radius, const PowerTail& tail = {});

// d phi/dp for the same class of inputs:
//   phi'(p) = -sqrt(2/pi) int_0^inf x psi(x) sin(p x) dx
double transform_point_even_deriv(const std::function<double(double)>& psi,
                                  double p, double x_radius,
                                  const PowerTail& tail = {});

}  // namespace qrp::fourier
