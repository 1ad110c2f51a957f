#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "qrp/fourier.hpp"

// The catalog of one-dimensional quantum states under study, with
// position-space densities, analytic derivatives, and momentum-space
// densities via analytic shortcuts or the transform module. Units: hbar = 1,
// lengths dimensionless; every reported product is in units of 1/hbar.

namespace qrp::states {

// Harmonic-oscillator eigenstate, alpha = m omega / hbar (1/length^2).
struct Sho {
  int level = 0;
  double alpha = 1.0;
};

// Position density (gamma/pi) / ((x-x0)^2 + gamma^2).
struct CauchyLorentz {
  double x0 = 0.0;
  double gamma = 1.0;
};

// Position density is the Student's t distribution with dof degrees of freedom.
struct StudentT {
  int dof = 2;
};

// psi(x) = sum_k c_k h_k(x) over orthonormal Hermite functions (alpha = 1;
// the product of Lipschitz constants is dilation invariant, so the scale
// choice is immaterial). sum |c_k|^2 = 1 within 1e-12.
struct HermiteSuperposition {
  std::vector<std::complex<double>> coeffs;
};

using StateSpec = std::variant<Sho, CauchyLorentz, StudentT, HermiteSuperposition>;

// Validating constructors; throw std::invalid_argument on bad parameters.
StateSpec make_sho(int level, double alpha);
StateSpec make_cauchy(double x0, double gamma);
StateSpec make_student(int dof);
StateSpec make_hermite(std::vector<std::complex<double>> coeffs);

// f(x) = |psi(x)|^2.
double position_density(const StateSpec& s, double x);

// Analytic f'(x) for the closed-form families; central finite differences
// (step max(1e-6, 1e-8 |x|)) for HermiteSuperposition when use_analytic is
// false. Both paths agree to 1e-5 relative (asserted in tests).
double position_density_derivative(const StateSpec& s, double x,
                                   bool use_analytic = true);

// g(p) = |phi(p)|^2. Analytic shortcuts: SHO by self-duality (alpha -> 1/alpha),
// HermiteSuperposition via the transform eigenfunction property (coefficients
// rotated by (-i)^k), CauchyLorentz via g(p) = (2 gamma / pi^2) K_0(gamma|p|)^2,
// StudentT dof=2 via the K_{1/4} closed form. StudentT dof>2 goes through
// direct quadrature of the transform integral (slow, pointwise).
// At exactly p = 0 the Cauchy density returns +infinity (it diverges) and the
// dof=2 Student density returns NaN (finite by continuity, never extrapolated).
double momentum_density(const StateSpec& s, double p);

// Analytic g'(p); available for every family except StudentT dof>2 (throws).
double momentum_density_derivative(const StateSpec& s, double p);

// |1 - int f dx| under adaptive quadrature, analytic tail corrections for the
// heavy-tailed families. <= 1e-8 for the catalog (<= 1e-6 for Cauchy).
double normalization_residual(const StateSpec& s);

// psi(x) in position representation (real for every catalog family except
// complex Hermite superpositions).
std::complex<double> wavefunction(const StateSpec& s, double x);

// Half-width of the interval outside which the position density and its
// derivative are negligible for quadrature purposes (not a hard support).
double support_radius(const StateSpec& s);

// Power-law wavefunction tail parameters for the heavy-tailed families
// (Cauchy, Student with small dof); tail.present == false otherwise.
fourier::PowerTail wavefunction_tail(const StateSpec& s);

// Grid choice for numeric transforms of this state: window wide enough that
// the recorded |psi|^2 tail mass is negligible or analytically corrected.
struct TransformPlan {
  double x_min = -40.0;
  double x_max = 40.0;
  int n_points = 1 << 14;
  double hbar = 1.0;
  double window_tail_mass = 0.0;
  fourier::PowerTail tail;
};
TransformPlan default_plan(const StateSpec& s);

// Samples psi on the plan's grid and transforms it, enforcing the
// normalization precondition (grid norm + recorded tail mass within 1e-6 of 1).
fourier::TransformResult transform_state(const StateSpec& s,
                                         const TransformPlan& plan);

}  // namespace qrp::states
