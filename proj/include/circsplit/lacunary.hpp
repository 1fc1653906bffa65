#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <utility>
#include <vector>

#include "circsplit/circulant.hpp"

namespace circsplit {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

// Generators with a_k / (a_1 + ... + a_{k-1}) > gap for every k >= 2.
struct GapFamily {
  std::int64_t K = 0;
  std::vector<std::int64_t> gens;
  double gap = 0.0;
};

// Gap used by the lower-bound construction: 4 * log6(K).
double standard_gap(std::int64_t K);

// Greedy a_1 = 1, a_k = floor(gap * prefix) + 1, bumped until strictly above gap.
GapFamily make_gap_family(std::int64_t K, double gap);

// Largest even p with a_k > p * (a_1 + ... + a_{k-1}) for all k >= 2; the closed
// moment formula is certified only up to this p. K = 1 families report a large cap.
std::int64_t moment_validity_bound(const GapFamily& fam);

// Mean of (sum_k x_k cos(a_k t))^p over the circle, as an exact rational:
// 2^-p * sum over ordered even compositions p_1+...+p_l = p of
// p! / ((p_1/2)! ... (p_l/2)!)^2 * C(K, l). Signing-independent.
BigRational cosine_power_moment_exact(std::int64_t K, std::int64_t p);

// ((p-1)!!, p!/(2^{p/2} (p/2)!)) — the two sides of the Gaussian moment identity.
std::pair<BigInt, BigInt> double_factorial_identity(std::int64_t p);

// Equispaced mean of (sum_k x_k cos(a_k t))^p with at least 16*p*a_K nodes, plus a
// doubled-grid agreement check against quad_tol.
double cosine_power_moment_quadrature(const GapFamily& fam, const Signing& x, std::int64_t p,
                                      double quad_tol,
                                      std::int64_t node_cap = std::int64_t(1) << 28);

struct MomentRatioReport {
  double ratio = 0.0;  // moment / ((K/2)^{p/2} (p-1)!!)
  double lower = 0.0;  // 1 - 8*log6(K)^2/K
  double upper = 0.0;  // 1 + log6(K)/(K - log6(K)) * K^{log6 4} / 2
  bool within() const { return ratio >= lower && ratio <= upper; }
};

MomentRatioReport moment_gaussian_ratio(std::int64_t K, std::int64_t p);

struct TailSampleReport {
  double max_abs = 0.0;
  double exceed_fraction = 0.0;
  double threshold = 0.0;  // (1/4) * sqrt(K * log6 K)
};

// Samples |S(t)| = |sum_k x_k cos(a_k t)| at n_samples uniform angles.
TailSampleReport signed_sum_tail_sample(const GapFamily& fam, const Signing& x,
                                        std::int64_t n_samples, std::uint64_t seed);

struct TailSweepReport {
  double min_exceed_fraction = 1.0;
  double min_max_abs = 0.0;
  std::uint64_t worst_class = 0;  // class with the smallest exceed fraction
  double threshold = 0.0;
};

// signed_sum_tail_sample over every one of the 2^{K-1} sign classes (x_1 = +1),
// sharing one angle table and walking classes in Gray-code order.
TailSweepReport signed_sum_tail_sweep(const GapFamily& fam, std::int64_t n_samples,
                                      std::uint64_t seed);

struct MinMaxResult {
  double min_max = 0.0;
  Signing witness;
  double stability_rel = 0.0;    // grid-doubling relative change at the winner
  double witness_abs_sum = 0.0;  // |sum x_k| of the winning class
  std::int64_t classes_scanned_full = 0;
};

// min over sign classes (x_1 = +1) of max_t |sum_k x_k (1 - cos(a_k t))|.
// Deterministic two-phase prune: a coarse grid lower-bounds every class, the coarse
// argmin is scanned at grid_per_period points per fastest period to get an upper
// bound, and only classes whose coarse value stays below it are scanned in full.
MinMaxResult min_max_over_signings(const GapFamily& fam, std::int64_t grid_per_period = 64);

}  // namespace circsplit
