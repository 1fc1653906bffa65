#pragma once

#include <cstdint>
#include <vector>

#include "circsplit/circulant.hpp"

namespace circsplit {

// Effective resistance across any edge generated by ±a:
// (1/n) * sum_{j=1}^{n-1} (1 - cos(2*pi*j*a/n)) / sum_s (1 - cos(2*pi*j*a_s/n)).
double edge_effective_resistance(const CirculantGraph& g, std::int64_t a, bool parallel = true);

double max_edge_effective_resistance(const CirculantGraph& g, bool parallel = true);

struct QuadratureOptions {
  std::int64_t max_nodes = std::int64_t(1) << 27;      // dense periodic-mean budget
  std::int64_t lattice_nodes = std::int64_t(1) << 24;  // per window when subsampling
};

// n -> infinity limit of edge_effective_resistance: (1/2pi) * integral of
// (1 - cos(a*t)) / sum_s (1 - cos(a_s*t)), with the integrand extended by
// a^2 / sum_s a_s^2 wherever the denominator falls below 1e-12.
// Dense equispaced means with doubling while 8*max(gens) nodes fit max_nodes;
// a deterministic stride-lattice subsample with a three-window stability check
// otherwise. quad_tol is the absolute tolerance in both regimes.
double limit_effective_resistance(const std::vector<std::int64_t>& gens, std::int64_t a,
                                  double quad_tol, const QuadratureOptions& opts = {});

// All generators in one pass over the shared denominator; same order as gens.
std::vector<double> limit_resistance_all(const std::vector<std::int64_t>& gens, double quad_tol,
                                         const QuadratureOptions& opts = {});

double max_limit_resistance(const std::vector<std::int64_t>& gens, double quad_tol,
                            const QuadratureOptions& opts = {});

}  // namespace circsplit
