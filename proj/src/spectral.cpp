#include "circsplit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "circsplit/errors.hpp"
#include "circsplit/kernels.hpp"
#include "circsplit/util.hpp"

namespace circsplit {

namespace {

constexpr std::int64_t kCosTableCap = std::int64_t(1) << 22;

// Shared evaluator for both ratio modes: signed numerator and denominator of the
// relative eigenvalue deviation at angle 2*pi*r/modulus for residues r = a_s*idx.
struct RatioEval {
  const std::vector<std::int64_t>& gens;
  const Signing& x;
  std::int64_t modulus;
  std::vector<double> table;  // cos(2*pi*r/modulus), empty when modulus too large
  bool big;                   // residue products need 128-bit reduction

  RatioEval(const std::vector<std::int64_t>& gens_, const Signing& x_, std::int64_t modulus_)
      : gens(gens_), x(x_), modulus(modulus_) {
    big = modulus > (std::int64_t(1) << 31);
    if (modulus <= kCosTableCap) {
      table.resize(static_cast<std::size_t>(modulus));
      const double w = 2.0 * std::numbers::pi / static_cast<double>(modulus);
#pragma omp parallel for schedule(static)
      for (std::int64_t r = 0; r < modulus; ++r)
        table[static_cast<std::size_t>(r)] = std::cos(w * static_cast<double>(r));
    }
  }

  double cos_at(std::int64_t r) const {
    if (!table.empty()) return table[static_cast<std::size_t>(r)];
    return std::cos(2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(modulus));
  }

  void num_den(std::int64_t idx, double& num, double& den) const {
    num = 0.0;
    den = 0.0;
    for (std::size_t s = 0; s < gens.size(); ++s) {
      std::int64_t r;
      if (big) {
        r = static_cast<std::int64_t>(mulmod_u64(static_cast<std::uint64_t>(gens[s]),
                                                 static_cast<std::uint64_t>(idx),
                                                 static_cast<std::uint64_t>(modulus)));
      } else {
        r = (gens[s] * idx) % modulus;
      }
      const double t = 1.0 - cos_at(r);
      den += t;
      num += x[s] > 0 ? t : -t;
    }
  }

  double ratio(std::int64_t idx) const {
    double num, den;
    num_den(idx, num, den);
    return std::fabs(num) / den;
  }
};

}  // namespace

std::vector<double> laplacian_eigenvalues(const CirculantGraph& g, bool parallel) {
  std::vector<double> eig(static_cast<std::size_t>(g.n), 0.0);
  Signing ones(static_cast<std::size_t>(g.k()), 1);
  RatioEval ev(g.gens, ones, g.n);
#pragma omp parallel for schedule(static) if (parallel && g.n > 1024)
  for (std::int64_t j = 1; j < g.n; ++j) {
    double num, den;
    ev.num_den(j, num, den);
    eig[static_cast<std::size_t>(j)] = 2.0 * den;
  }
  return eig;
}

SpectralErrorReport spectral_ratio(const CirculantGraph& g, const Signing& x, RatioMode mode,
                                   std::int64_t grid_oversample, std::int64_t sample_cap,
                                   bool parallel) {
  if (static_cast<std::int64_t>(x.size()) != g.k())
    fail(Errc::invalid_spec, "signing length " + std::to_string(x.size()) +
                                 " does not match generator count " + std::to_string(g.k()));
  for (auto v : x)
    if (v != 1 && v != -1) fail(Errc::invalid_spec, "signing entries must be +1 or -1");

  SpectralErrorReport rep;
  rep.mode = mode;

  std::int64_t modulus;
  if (mode == RatioMode::exact) {
    modulus = g.n;
  } else {
    if (grid_oversample < 8) fail(Errc::invalid_spec, "grid oversample must be at least 8");
    const std::int64_t a_max = g.gens.back();
    modulus = grid_oversample * a_max;
    rep.bernstein_inflation =
        1.0 / (1.0 - 2.0 * std::numbers::pi * static_cast<double>(a_max) /
                         static_cast<double>(modulus));
  }
  rep.points = modulus - 1;

  RatioEval ev(g.gens, x, modulus);
  MaxLoc best =
      argmax_blocked(std::int64_t(1), modulus, [&](std::int64_t j) { return ev.ratio(j); },
                     parallel);
  rep.max_ratio = best.value;
  const double w = 2.0 * std::numbers::pi / static_cast<double>(modulus);
  rep.argmax_theta = w * static_cast<double>(best.index);

  const std::int64_t stride =
      std::max<std::int64_t>(1, (modulus - 1) / std::max<std::int64_t>(1, sample_cap));
  bool argmax_sampled = false;
  for (std::int64_t j = 1; j < modulus; j += stride) {
    double num, den;
    ev.num_den(j, num, den);
    rep.samples.push_back({w * static_cast<double>(j), num, den});
    if (j == best.index) argmax_sampled = true;
  }
  if (!argmax_sampled) {
    double num, den;
    ev.num_den(best.index, num, den);
    auto pos = rep.samples.begin();
    while (pos != rep.samples.end() && pos->theta < rep.argmax_theta) ++pos;
    rep.samples.insert(pos, {rep.argmax_theta, num, den});
  }
  return rep;
}

double er_degree_lower_bound(std::int64_t n, double d) {
  if (n < 2 || d <= 0.0) fail(Errc::invalid_spec, "need n >= 2 and d > 0");
  return (2.0 / d) * (1.0 - 1.0 / static_cast<double>(n));
}

double partition_error_floor(std::int64_t d) {
  if (d < 1) fail(Errc::invalid_spec, "degree must be positive");
  return 1.0 / (2.0 * std::sqrt(static_cast<double>(d)));
}

}  // namespace circsplit
