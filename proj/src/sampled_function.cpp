#include "qrp/sampled_function.hpp"

#include <cmath>
#include <stdexcept>

namespace qrp {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

double SampledFunction::norm() const {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (int i = 0; i < n_points; ++i) {
    const double w = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
    s += w * std::norm(values[i]);
  }
  return s * spacing();
}

SampledFunction sample(const std::function<std::complex<double>(double)>& f,
                       double x_min, double x_max, int n_points, AxisKind axis,
                       bool allow_small) {
  if (!(x_min < x_max))
    throw std::invalid_argument("sample: x_min must be below x_max");
  if (!is_power_of_two(n_points) || n_points < (allow_small ? 16 : 1024))
    throw std::invalid_argument("sample: n_points must be a power of two >= 1024");
  SampledFunction s;
  s.x_min = x_min;
  s.x_max = x_max;
  s.n_points = n_points;
  s.axis = axis;
  s.values.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const std::complex<double> v = f(s.coord(i));
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::runtime_error("sample: non-finite value on grid");
    s.values[i] = v;
  }
  return s;
}

}  // namespace qrp
