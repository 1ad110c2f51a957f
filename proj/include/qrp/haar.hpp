#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qrp/states.hpp"

// Rotation-invariant (Haar) sampling of Hermite-function superpositions and
// minimization of the reciprocity product over the sample, plus the
// variance-product cross-check with closed-form moments.

namespace qrp::haar {

enum class Field { real, complex };
enum class Objective { reciprocity, uncertainty };

struct SearchConfig {
  int degree = 2;               // superpositions over h_0..h_degree, 2..8
  long num_samples = 3200;      // >= 100
  std::uint64_t seed = 0;
  Field field = Field::complex;
  bool doubling = false;        // double N until the running min stabilizes
  int threads = 0;              // 0: hardware concurrency
};

struct SearchResult {
  double min_product = 0.0;
  std::vector<std::complex<double>> argmin_coeffs;
  long samples_used = 0;
  bool converged = true;
  std::vector<std::pair<long, double>> history;  // (N, running min)
};

// running-min change between doublings below this means converged
inline constexpr double kDoublingThreshold = 0.005;

void validate(const SearchConfig& config);

// Coefficient vector for sample `index`: independent standard Gaussian
// components normalized to the unit sphere (real or complex per config).
// The stream is derived from (seed, index), so results do not depend on
// evaluation order; identical (seed, index) reproduces bit-identical draws.
states::StateSpec sample_state(const SearchConfig& config, long index);

// Minimum reciprocity product over the sample; the momentum side uses the
// transform eigenfunction property, no numeric transform involved.
SearchResult minimize_reciprocity(const SearchConfig& config);

// Same search with Delta x Delta p (units of hbar) as objective, moments in
// closed form from ladder matrix elements in the h_k basis.
SearchResult minimize_uncertainty(const SearchConfig& config);

// Delta x Delta p for a unit coefficient vector, closed form.
double uncertainty_from_coeffs(std::span<const std::complex<double>> coeffs);

// Reciprocity product for a coefficient vector via the search's fast
// derivative-supremum path (matches reciprocity_product to ~1e-8).
double reciprocity_from_coeffs(std::span<const std::complex<double>> coeffs);

// Derivative-free local refinement of a search minimum (coordinate-wise
// golden section on sphere charts, bounded evaluation budget). An extension
// of the raw Monte-Carlo search; reported separately, never merged into it.
struct PolishResult {
  double value = 0.0;
  std::vector<std::complex<double>> coeffs;
  int evaluations = 0;
};
PolishResult polish_minimum(const SearchResult& seed_result, Objective objective,
                            int max_evaluations = 200);

}  // namespace qrp::haar
