#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "circsplit/circulant.hpp"
#include "circsplit/discrepancy.hpp"
#include "circsplit/spectral.hpp"

namespace circsplit {

// Generators (a + s*b) mod n for s = 1..k.
struct Progression {
  std::int64_t a = 0;
  std::int64_t b = 1;
  std::int64_t k = 1;
  std::int64_t n = 0;
};

// Folded residue of each progression term, position s = 1..k -> index s-1.
std::vector<std::int64_t> progression_residues(const Progression& p);

// The circulant graph on the folded residues; throws InvalidSpec when residues
// collide, vanish, or hit n/2.
CirculantGraph progression_graph(const Progression& p);

struct PartitionConfig {
  double alpha = 0.9;
  std::int64_t L = 0;              // 0: ceil(38*log2 k)
  double delta = 0.0;              // 0: 1/k
  std::int64_t stop_threshold = 0; // 0: max(2, ceil(log2 k))
  double budget_lambda = 50.0;     // units of sqrt(k)
  double budget_moment = 33.0;     // units of log2 k
  std::int64_t candidates = 0;     // 0: by k (32/16/8/6/2)
  double walk_step = 0.0;          // 0: delta/sqrt(ln(k*m/delta)) chosen by the driver
  std::int64_t restart_cap = 0;    // 0: solver default
  std::int64_t grid_oversample = 32;

  // Copy with the k-dependent zero fields filled in.
  PartitionConfig resolved(std::int64_t k) const;

  static PartitionConfig defaults(std::int64_t k) { return PartitionConfig{}.resolved(k); }

  // Constants from the asymptotic analysis: stop at 32(L+1) alive coordinates and
  // keep the solver's own step size. Terminates immediately for every desk-scale k.
  static PartitionConfig asymptotic_profile(std::int64_t k);
};

struct ConditionReport {
  double lambda_max = 0.0;   // max |trig sum| over the verification grid
  double moment_max = 0.0;   // max |sum x_s (s/k)^l| over l = 0..L
  double budget_lambda = 0.0;  // absolute: cfg.budget_lambda * sqrt(k)
  double budget_moment = 0.0;  // absolute: cfg.budget_moment * log2 k
  bool lambda_pass = false;
  bool moment_pass = false;
  bool passes() const { return lambda_pass && moment_pass; }
};

enum class AngleBand { bulk, near_zero };

struct AngleInfo {
  AngleBand band = AngleBand::bulk;
  double residue = 0.0;  // b*theta reduced to (-pi, pi]
};

// near_zero iff |b*theta mod 2pi|, folded to (-pi, pi], is at most alpha/k.
AngleInfo classify_theta(double theta, std::int64_t b, std::int64_t k, double alpha = 0.9);

// Same split for the exact angle 2*pi*j/n, reduced in integer arithmetic.
AngleInfo classify_theta_rational(std::int64_t j, std::int64_t n, std::int64_t b, std::int64_t k,
                                  double alpha = 0.9);

// (sum_{s=1..k} cos(s*t))^2 + (sum sin(s*t))^2, closed geometric forms away from
// sin(t/2) = 0 and direct summation near it.
double cosine_sum_energy(std::int64_t k, double theta_hat);

// Rows 1..7k: (cos(s*t_j)) at t_j = 2*pi*(j-1)/(7k); rows 7k+1..14k: sine analogues;
// rows 14k+1..14k+L+1: ((s/k)^l) for l = 0..L.
ConstraintSystem build_constraint_system(std::int64_t k, std::int64_t L);

// Thresholds for the system above at a given alive count: trig rows get
// 7*sqrt(ln(14k/alive)); monomial rows get 0 whenever the exp(-c^2/16) budget
// affords all L+1 of them, else the 10 lowest-degree rows get the tight share and
// the rest a looser one. Always passes validate_thresholds.
std::vector<double> threshold_schedule(std::int64_t k, std::int64_t L, std::int64_t alive);

std::pair<double, bool> lambda_condition_check(const Signing& x, std::int64_t k,
                                               double budget_lambda);
std::pair<double, bool> moment_condition_check(const Signing& x, std::int64_t k, std::int64_t L,
                                               double budget_moment);

ConditionReport check_conditions(const Signing& x, std::int64_t k, std::int64_t L,
                                 double budget_lambda, double budget_moment);

struct SmallAngleParts {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;     // signed sums at the signing
  double b1p = 0.0, b2p = 0.0, b3p = 0.0;  // all-ones counterparts
};

// b1 = sum x_s (1 - cos(s*t)), b2 = sum x_s sin(s*t), b3 = sum x_s, at the reduced
// residue t of b*theta. Throws AngleNotNearZero for bulk angles.
SmallAngleParts taylor_split(const Signing& x, const Progression& p, double theta);

struct PartitionResult {
  Signing signing;  // by progression position s = 1..k
  ConditionReport condition;
  SpectralErrorReport spectral;
  std::uint64_t chosen_seed = 0;
  std::int64_t candidate_index = 0;
};

// Signs the progression generators: builds the constraint family, runs the iterated
// partial coloring once per candidate seed, verifies each candidate's exact-mode
// ratio, and returns the best condition-passing candidate.
PartitionResult partition_progression(const Progression& p, const PartitionConfig& cfg,
                                      std::uint64_t seed);

}  // namespace circsplit
