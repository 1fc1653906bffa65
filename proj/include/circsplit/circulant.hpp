#pragma once

#include <cstdint>
#include <vector>

namespace circsplit {

// Cyclic-group Cayley graph on Z_n with symmetric connection set {±a_1, …, ±a_k}.
// Generators are stored as canonical representatives, strictly increasing in [1, n/2).
struct CirculantGraph {
  std::int64_t n = 0;
  std::vector<std::int64_t> gens;

  std::int64_t k() const { return static_cast<std::int64_t>(gens.size()); }
  std::int64_t degree() const { return 2 * k(); }
};

// ±1 sign per generator pair; encodes the two-subgraph edge partition.
using Signing = std::vector<std::int8_t>;

// Reduce raw generators mod n, fold to [1, n/2), dedupe, sort, check connectivity.
CirculantGraph canonical_circulant(std::int64_t n, const std::vector<std::int64_t>& raw_gens);

}  // namespace circsplit
