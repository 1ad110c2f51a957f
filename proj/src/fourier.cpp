#include "qrp/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "qrp/quadrature.hpp"

namespace qrp::fourier {

namespace {

std::mutex g_fftw_mutex;  // fftw plan creation is not thread-safe

// in-place forward DFT, out_k = sum_j in_j e^{-2 pi i j k / N}
void dft_forward(std::vector<std::complex<double>>& buf) {
  const int n = static_cast<int>(buf.size());
  fftw_complex* data = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    plan = fftw_plan_dft_1d(n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
  }
}

// tail contribution to phi(p) for a real even psi with power-law tails:
// (2/sqrt(2 pi)) * int_X^inf tail(x) cos(p x) dx
double tail_phi_correction(const PowerTail& tail, double X, double p) {
  double c = tail.amplitude * power_tail_oscillatory(tail.exponent, X, p, false);
  if (tail.second_amplitude != 0.0)
    c += tail.second_amplitude *
         power_tail_oscillatory(tail.second_exponent, X, p, false);
  return 2.0 * c / std::sqrt(2.0 * M_PI);
}

SampledFunction conjugate_transform(const SampledFunction& psi) {
  const int n = psi.n_points;
  const double dx = psi.spacing();
  const double dp = 2.0 * M_PI / (n * dx);

  std::vector<std::complex<double>> buf(n);
  for (int j = 0; j < n; ++j)
    buf[j] = (j % 2 == 0 ? 1.0 : -1.0) * psi.values[j];
  dft_forward(buf);

  SampledFunction phi;
  phi.axis = AxisKind::momentum;
  phi.n_points = n;
  phi.x_min = -(n / 2) * dp;
  phi.x_max = phi.x_min + (n - 1) * dp;
  phi.values.resize(n);
  const double measure = dx / std::sqrt(2.0 * M_PI);
  for (int k = 0; k < n; ++k) {
    const double p = phi.x_min + k * dp;
    const std::complex<double> shift{std::cos(psi.x_min * p),
                                     -std::sin(psi.x_min * p)};
    phi.values[k] = measure * shift * buf[k];
  }
  return phi;
}

}  // namespace

TransformResult to_momentum(const SampledFunction& psi,
                            const TransformOptions& opts) {
  if (psi.axis != AxisKind::position)
    throw std::invalid_argument("to_momentum: input must be a position grid");
  if (!is_power_of_two(psi.n_points) || psi.n_points < 16)
    throw std::invalid_argument("to_momentum: n_points must be a power of two");
  if (opts.check_normalization) {
    const double total = psi.norm() + opts.window_tail_mass;
    if (std::abs(total - 1.0) > 1e-6)
      throw std::invalid_argument("to_momentum: input not normalized on its grid");
  }

  TransformResult result;
  result.phi = conjugate_transform(psi);

  if (opts.tail.present) {
    if (opts.tail.start > psi.x_max)
      throw std::invalid_argument("to_momentum: tail must start inside the window");
    for (int k = 0; k < result.phi.n_points; ++k) {
      const double p = result.phi.coord(k);
      if (std::abs(p) >= opts.tail_correction_min_p)
        result.phi.values[k] +=
            tail_phi_correction(opts.tail, psi.x_max, std::abs(p));
    }
  }

  // resolution check: drop every other sample and compare momentum norms
  if (psi.n_points >= 32) {
    SampledFunction half;
    half.axis = AxisKind::position;
    half.n_points = psi.n_points / 2;
    half.x_min = psi.x_min;
    half.x_max = psi.x_min + (psi.n_points - 2) * psi.spacing();
    half.values.resize(half.n_points);
    for (int j = 0; j < half.n_points; ++j) half.values[j] = psi.values[2 * j];
    const SampledFunction phi_half = conjugate_transform(half);
    result.refinement_norm_change =
        std::abs(result.phi.norm() - phi_half.norm());
    result.converged = result.refinement_norm_change <= 1e-6;
  }
  return result;
}

double plancherel_residual(const SampledFunction& psi,
                           const SampledFunction& phi,
                           double window_tail_mass) {
  return std::abs(psi.norm() + window_tail_mass - phi.norm());
}

double transform_point_even(const std::function<double(double)>& psi, double p,
                            double x_radius, const PowerTail& tail) {
  p = std::abs(p);
  double r = integrate_oscillatory(psi, 0.0, x_radius, p, false, 1e-12);
  if (tail.present) {
    r += tail.amplitude * power_tail_oscillatory(tail.exponent, x_radius, p, false);
    if (tail.second_amplitude != 0.0)
      r += tail.second_amplitude *
           power_tail_oscillatory(tail.second_exponent, x_radius, p, false);
  }
  return std::sqrt(2.0 / M_PI) * r;
}

double transform_point_even_deriv(const std::function<double(double)>& psi,
                                  double p, double x_radius,
                                  const PowerTail& tail) {
  const double sign = p < 0 ? -1.0 : 1.0;
  p = std::abs(p);
  auto xpsi = [&](double x) { return x * psi(x); };
  double r = integrate_oscillatory(xpsi, 0.0, x_radius, p, true, 1e-12);
  if (tail.present) {
    // x * A x^-s = A x^-(s-1)
    r += tail.amplitude *
         power_tail_oscillatory(tail.exponent - 1.0, x_radius, p, true);
    if (tail.second_amplitude != 0.0)
      r += tail.second_amplitude *
           power_tail_oscillatory(tail.second_exponent - 1.0, x_radius, p, true);
  }
  return -sign * std::sqrt(2.0 / M_PI) * r;
}

}  // namespace qrp::fourier
