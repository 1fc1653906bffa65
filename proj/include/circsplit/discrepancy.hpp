#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "circsplit/circulant.hpp"

namespace circsplit {

struct ConstraintSystem {
  std::int64_t dim = 0;
  std::vector<std::vector<double>> vectors;  // m rows of length dim, entries in [-1, 1]
  std::vector<double> thresholds;            // c_j >= 0; bound is c_j * ||v_j||_2
};

// sum_j exp(-c_j^2/16) <= n_alive/16. Sufficient for the walk to succeed with
// constant probability; not required by partial_color itself (see callers).
bool validate_thresholds(const std::vector<double>& thresholds, std::int64_t n_alive);

struct WalkOptions {
  double delta = 1.0 / 64.0;
  std::int64_t restart_cap = 0;   // 0: default_restart_cap(n, m)
  double step_override = 0.0;     // 0: delta / (4*sqrt(ln(nm/delta)))
  std::uint64_t seed = 0;
  std::int64_t check_interval = 256;  // steps between full constraint re-evaluations
};

std::int64_t default_restart_cap(std::int64_t n, std::int64_t m);

// Gaussian edge walk from x0. Returns x in [-1,1]^n with
//   (a) |<v_j, x - x0>| <= c_j * ||v_j||_2 (norms over the alive coordinates of x0),
//   (b) |x_i| >= 1 - delta for at least half the alive coordinates of x0,
// and frozen coordinates of x0 unchanged. Restarts internally with derived seeds;
// throws RestartCapExceeded when the cap is exhausted.
std::vector<double> partial_color(const ConstraintSystem& sys, const std::vector<double>& x0,
                                  const WalkOptions& opts);

// Independent recomputation of both postconditions above.
bool verify_partial_coloring(const ConstraintSystem& sys, const std::vector<double>& x0,
                             const std::vector<double>& x, double delta);

// Maps the current alive count to the m per-row thresholds.
using ThresholdSchedule = std::function<std::vector<double>(std::int64_t)>;

// Repeats partial_color until at most stop_threshold coordinates remain alive, then
// signs the stragglers +1 and rounds every near-frozen coordinate to its sign.
// The schedule must pass validate_thresholds at every alive count visited.
Signing iterate_to_full_signing(std::int64_t dim, const std::vector<std::vector<double>>& vectors,
                                const ThresholdSchedule& schedule, double delta,
                                std::int64_t stop_threshold, std::uint64_t seed,
                                std::int64_t restart_cap = 0, double step_override = 0.0);

}  // namespace circsplit
