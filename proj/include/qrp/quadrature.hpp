#pragma once

#include <functional>

// Adaptive quadrature used throughout the library. Gauss-Kronrod 7/15 panels
// with recursive bisection; suitable for smooth integrands to ~1e-12 relative.

namespace qrp {

using RealFn = std::function<double(double)>;

// Integral of f over [a, b]. rel_tol is relative to the running whole-interval
// estimate, with a tiny absolute floor so that zero integrals terminate.
double integrate(const RealFn& f, double a, double b, double rel_tol = 1e-11,
                 int max_depth = 48);

// Integral of f over the whole line for integrands that decay at infinity.
// Expands [-R, R] by doubling from the hint until the increment from the last
// doubling is below rel_tol of the total.
double integrate_line(const RealFn& f, double radius_hint, double rel_tol = 1e-10);

// Integral of f(x) cos(p x) (or sin) over [a, b], splitting into panels no
// longer than a few periods so the adaptive rule converges on oscillatory
// integrands.
double integrate_oscillatory(const RealFn& f, double a, double b, double p,
                             bool use_sin, double rel_tol = 1e-11);

// int_X^inf x^(-s) cos(p x) dx (use_sin: sine kernel) for p > 0, s > 1.
// Three-term integration-by-parts asymptotics, accurate for p*X >~ 4; below
// that the range is extended numerically before switching to the asymptotic
// form. For p == 0 the cosine form reduces to X^(1-s)/(s-1).
double power_tail_oscillatory(double s, double X, double p, bool use_sin);

}  // namespace qrp
