#pragma once

#include <cstdint>
#include <vector>

#include "circsplit/ap_partition.hpp"
#include "circsplit/circulant.hpp"
#include "circsplit/spectral.hpp"

namespace circsplit {

enum class ProductKind { cartesian, tensor };

// d factors X_h = X(Z_n, ±{1..k_h}) over the common modulus n, combined by graph
// Cartesian product or tensor product on Z_n^d.
struct ProductSpec {
  ProductKind kind = ProductKind::cartesian;
  std::int64_t n = 0;
  std::vector<std::int64_t> ks;

  std::int64_t d() const { return static_cast<std::int64_t>(ks.size()); }
};

struct ProductSigning {
  std::vector<Signing> per_factor;
};

// Shape checks plus connectivity. Tensor connectivity is decided by the index of the
// integer lattice spanned by the generator tuples together with n*e_h.
void validate_product_spec(const ProductSpec& spec);

// Exact max over j in Z_n^d \ {0} of the relative signed eigenvalue deviation.
// Cartesian: |sum_h (A_h - B_h[j_h])| / sum_h (k_h - U_h[j_h]); tensor:
// |prod_h A_h - prod_h B_h[j_h]| / (K - prod_h U_h[j_h]), where A_h = sum_s y_{h,s},
// B_h[j] = sum_s y_{h,s} cos(2*pi*j*s/n), U_h[j] = sum_s cos(2*pi*j*s/n), K = prod k_h.
// d = 1 delegates to spectral_ratio. In the report, angle fields hold the flat index
// of j (mixed radix, j_1 fastest) instead of an angle.
SpectralErrorReport product_spectral_ratio(const ProductSpec& spec, const ProductSigning& signs,
                                           std::int64_t enum_cap = std::int64_t(1) << 26,
                                           bool parallel = true);

struct ProductPartitionResult {
  ProductSigning signing;
  std::vector<ConditionReport> factor_conditions;
  std::vector<double> factor_ratios;  // exact-mode per-factor ratios
  SpectralErrorReport spectral;
};

// Signs each factor independently via partition_progression (a=0, b=1, k=k_h) with a
// derived seed, then verifies the assembled product signing.
ProductPartitionResult partition_product(const ProductSpec& spec, const PartitionConfig& cfg,
                                         std::uint64_t seed);

}  // namespace circsplit
