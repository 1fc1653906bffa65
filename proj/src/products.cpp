#include "circsplit/products.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "circsplit/circulant.hpp"
#include "circsplit/errors.hpp"
#include "circsplit/kernels.hpp"
#include "circsplit/rng.hpp"

namespace circsplit {

namespace {

using i128 = __int128;

// Lattice index of the span of the given integer rows inside Z^d.
// Returns 0 when the rows do not span a full-rank sublattice.
std::int64_t lattice_index(std::vector<std::vector<i128>> rows, std::size_t d) {
  std::size_t rank = 0;
  i128 index = 1;
  for (std::size_t col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][col] == 0) ++piv;
    if (piv == rows.size()) return 0;
    std::swap(rows[rank], rows[piv]);
    for (std::size_t i = rank + 1; i < rows.size(); ++i) {
      while (rows[i][col] != 0) {
        const i128 q = rows[rank][col] / rows[i][col];
        for (std::size_t c = col; c < d; ++c) rows[rank][c] -= q * rows[i][c];
        std::swap(rows[rank], rows[i]);
      }
    }
    if (rows[rank][col] < 0)
      for (std::size_t c = col; c < d; ++c) rows[rank][c] = -rows[rank][c];
    index *= rows[rank][col];
    ++rank;
  }
  if (rank < d) return 0;
  return static_cast<std::int64_t>(index);
}

void check_product_signing(const ProductSpec& spec, const ProductSigning& signs) {
  if (signs.per_factor.size() != spec.ks.size())
    fail(Errc::invalid_spec, "signing factor count does not match the spec");
  for (std::size_t h = 0; h < signs.per_factor.size(); ++h) {
    if (static_cast<std::int64_t>(signs.per_factor[h].size()) != spec.ks[h])
      fail(Errc::invalid_spec, "signing length mismatch in factor " + std::to_string(h));
    for (std::int8_t v : signs.per_factor[h])
      if (v != 1 && v != -1) fail(Errc::invalid_spec, "signing entries must be +1 or -1");
  }
}

}  // namespace

void validate_product_spec(const ProductSpec& spec) {
  if (spec.n < 3) fail(Errc::invalid_spec, "cycle length must be at least 3");
  const std::size_t d = spec.ks.size();
  if (d < 1 || d > 16) fail(Errc::invalid_spec, "need between 1 and 16 factors");
  for (std::int64_t k : spec.ks)
    if (k < 1 || 2 * k >= spec.n)
      fail(Errc::invalid_spec, "factor width must satisfy 1 <= k <= (n-1)/2");
  if (spec.kind == ProductKind::tensor) {
    std::vector<std::vector<i128>> rows;
    for (std::size_t h = 0; h < d; ++h) {
      std::vector<i128> r(d, 0);
      r[h] = 2;
      rows.push_back(r);
      r[h] = spec.n;
      rows.push_back(std::move(r));
    }
    std::vector<i128> parity(d, 1);
    std::size_t combos = 1;
    for (std::int64_t k : spec.ks) combos *= k >= 2 ? 2 : 1;
    for (std::size_t mask = 0; mask < combos; ++mask) {
      std::size_t bit = 0;
      for (std::size_t h = 0; h < d; ++h) {
        if (spec.ks[h] >= 2) {
          parity[h] = (mask >> bit) & 1 ? 2 : 1;
          ++bit;
        }
      }
      rows.push_back(parity);
    }
    if (lattice_index(std::move(rows), d) != 1)
      fail(Errc::disconnected_graph, "tensor generators do not connect the torus");
  }
}

SpectralErrorReport product_spectral_ratio(const ProductSpec& spec, const ProductSigning& signs,
                                           std::int64_t enum_cap, bool parallel) {
  validate_product_spec(spec);
  check_product_signing(spec, signs);
  const std::size_t d = spec.ks.size();
  const std::int64_t n = spec.n;

  if (d == 1) {
    std::vector<std::int64_t> gens(static_cast<std::size_t>(spec.ks[0]));
    for (std::int64_t s = 1; s <= spec.ks[0]; ++s) gens[static_cast<std::size_t>(s - 1)] = s;
    const CirculantGraph g = canonical_circulant(n, gens);
    return spectral_ratio(g, signs.per_factor[0], RatioMode::exact, 32, 4096, parallel);
  }

  std::int64_t total = 1;
  for (std::size_t h = 0; h < d; ++h) {
    if (total > enum_cap / n) fail(Errc::enumeration_cap_exceeded, "n^d exceeds the cap");
    total *= n;
  }

  // Per-factor signed and unsigned cosine sums over one cycle of characters.
  std::vector<std::vector<double>> B(d), U(d);
  std::vector<double> A(d), kd(d);
  {
    std::vector<double> ct(static_cast<std::size_t>(n));
    for (std::int64_t t = 0; t < n; ++t)
      ct[static_cast<std::size_t>(t)] =
          std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n));
    for (std::size_t h = 0; h < d; ++h) {
      B[h].assign(static_cast<std::size_t>(n), 0.0);
      U[h].assign(static_cast<std::size_t>(n), 0.0);
      const std::int64_t kh = spec.ks[h];
      kd[h] = static_cast<double>(kh);
      double a = 0.0;
      for (std::int64_t s = 1; s <= kh; ++s)
        a += signs.per_factor[h][static_cast<std::size_t>(s - 1)] > 0 ? 1.0 : -1.0;
      A[h] = a;
      for (std::int64_t j = 0; j < n; ++j) {
        double b = 0.0, u = 0.0;
        for (std::int64_t s = 1; s <= kh; ++s) {
          const double c = ct[static_cast<std::size_t>((s * j) % n)];
          u += c;
          b += signs.per_factor[h][static_cast<std::size_t>(s - 1)] > 0 ? c : -c;
        }
        B[h][static_cast<std::size_t>(j)] = b;
        U[h][static_cast<std::size_t>(j)] = u;
      }
    }
  }

  const bool tensor = spec.kind == ProductKind::tensor;
  auto num_den = [&](std::int64_t idx, double& num, double& den) {
    std::int64_t rest = idx;
    if (tensor) {
      double pb = 1.0, pu = 1.0, pa = 1.0, pk = 1.0;
      for (std::size_t h = 0; h < d; ++h) {
        const std::size_t j = static_cast<std::size_t>(rest % n);
        rest /= n;
        pb *= B[h][j];
        pu *= U[h][j];
        pa *= A[h];
        pk *= kd[h];
      }
      num = pa - pb;
      den = pk - pu;
    } else {
      num = 0.0;
      den = 0.0;
      for (std::size_t h = 0; h < d; ++h) {
        const std::size_t j = static_cast<std::size_t>(rest % n);
        rest /= n;
        num += A[h] - B[h][j];
        den += kd[h] - U[h][j];
      }
    }
  };
  auto ratio_at = [&](std::int64_t idx) {
    double num = 0.0, den = 0.0;
    num_den(idx, num, den);
    if (den <= 0.0) return -1.0;
    return std::fabs(num) / den;
  };

  const MaxLoc best = argmax_blocked(std::int64_t(1), total, ratio_at, parallel);
  if (best.value < 0.0) fail(Errc::disconnected_graph, "vanishing denominator off the trivial character");

  SpectralErrorReport rep;
  rep.max_ratio = best.value;
  rep.argmax_theta = static_cast<double>(best.index);
  rep.mode = RatioMode::exact;
  rep.bernstein_inflation = 1.0;
  rep.points = total - 1;
  const std::int64_t stride = std::max<std::int64_t>(1, (total - 1) / 4096);
  bool saw_best = false;
  for (std::int64_t idx = 1; idx < total; idx += stride) {
    double num = 0.0, den = 0.0;
    num_den(idx, num, den);
    rep.samples.push_back({static_cast<double>(idx), num, den});
    saw_best = saw_best || idx == best.index;
  }
  if (!saw_best) {
    double num = 0.0, den = 0.0;
    num_den(best.index, num, den);
    rep.samples.push_back({static_cast<double>(best.index), num, den});
    std::sort(rep.samples.begin(), rep.samples.end(),
              [](const RatioSample& a, const RatioSample& b) { return a.theta < b.theta; });
  }
  return rep;
}

ProductPartitionResult partition_product(const ProductSpec& spec, const PartitionConfig& cfg,
                                         std::uint64_t seed) {
  validate_product_spec(spec);
  ProductPartitionResult res;
  for (std::size_t h = 0; h < spec.ks.size(); ++h) {
    Progression pr;
    pr.a = 0;
    pr.b = 1;
    pr.k = spec.ks[h];
    pr.n = spec.n;
    PartitionResult r =
        partition_progression(pr, cfg, mix_seed(seed, 11 + static_cast<std::uint64_t>(h)));
    res.factor_conditions.push_back(r.condition);
    res.factor_ratios.push_back(r.spectral.certified());
    res.signing.per_factor.push_back(std::move(r.signing));
  }
  res.spectral = product_spectral_ratio(spec, res.signing);
  return res;
}

}  // namespace circsplit
