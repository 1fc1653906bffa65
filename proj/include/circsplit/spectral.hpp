#pragma once

#include <cstdint>
#include <vector>

#include "circsplit/circulant.hpp"

namespace circsplit {

enum class RatioMode { exact, grid };

struct RatioSample {
  double theta = 0.0;
  double numerator = 0.0;  // signed
  double denominator = 0.0;
};

// Relative spectral error of a signing: max |lambda_1 - lambda_2| / lambda over the
// nonzero spectrum. Exact mode enumerates the n-1 eigenvalue angles; grid mode scans
// M = oversample * max(gens) uniform angles and reports the Bernstein inflation factor
// (1 - 2*pi*max_gen/M)^-1 that certifies the continuum supremum. The factor is only
// reported; max_ratio stays the raw scan maximum.
struct SpectralErrorReport {
  double max_ratio = 0.0;
  double argmax_theta = 0.0;
  RatioMode mode = RatioMode::exact;
  double bernstein_inflation = 1.0;
  std::int64_t points = 0;  // angles evaluated
  std::vector<RatioSample> samples;

  double certified() const { return max_ratio * bernstein_inflation; }
};

// Entry j is 2 * sum_s (1 - cos(a_s * 2*pi*j/n)); entry 0 is exactly 0.
std::vector<double> laplacian_eigenvalues(const CirculantGraph& g, bool parallel = true);

SpectralErrorReport spectral_ratio(const CirculantGraph& g, const Signing& x,
                                   RatioMode mode = RatioMode::exact,
                                   std::int64_t grid_oversample = 32,
                                   std::int64_t sample_cap = 4096, bool parallel = true);

// (2/d)(1 - 1/n): every d-regular n-vertex graph has an edge resistance at least this.
double er_degree_lower_bound(std::int64_t n, double d);

// 1/(2*sqrt(d)): no signing of a d-regular graph beats this relative error.
double partition_error_floor(std::int64_t d);

}  // namespace circsplit
