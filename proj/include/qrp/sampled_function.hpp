#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace qrp {

enum class AxisKind { position, momentum };

// A complex function tabulated on a uniform grid. n_points is a power of two
// (>= 1024) so the conjugate grid of a transform is well defined.
struct SampledFunction {
  double x_min = 0.0;
  double x_max = 0.0;
  int n_points = 0;
  AxisKind axis = AxisKind::position;
  std::vector<std::complex<double>> values;

  double spacing() const { return (x_max - x_min) / (n_points - 1); }
  double coord(int i) const { return x_min + i * spacing(); }

  // trapezoid integral of |v|^2 over the grid
  double norm() const;
};

// Samples f on [x_min, x_max] with n_points points (throws unless n_points is
// a power of two >= 1024, or >= 16 with allow_small for refinement studies).
SampledFunction sample(const std::function<std::complex<double>(double)>& f,
                       double x_min, double x_max, int n_points,
                       AxisKind axis = AxisKind::position,
                       bool allow_small = false);

bool is_power_of_two(int n);

}  // namespace qrp
