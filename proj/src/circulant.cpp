#include "circsplit/circulant.hpp"

#include <algorithm>
#include <string>

#include "circsplit/errors.hpp"
#include "circsplit/util.hpp"

namespace circsplit {

CirculantGraph canonical_circulant(std::int64_t n, const std::vector<std::int64_t>& raw_gens) {
  if (n < 3) fail(Errc::invalid_spec, "group order must be at least 3, got " + std::to_string(n));
  if (raw_gens.empty()) fail(Errc::empty_generators, "generator list is empty");

  std::vector<std::int64_t> gens;
  gens.reserve(raw_gens.size());
  for (std::int64_t raw : raw_gens) {
    std::int64_t r = raw % n;
    if (r < 0) r += n;
    if (r == 0)
      fail(Errc::invalid_spec, "generator " + std::to_string(raw) + " reduces to 0 mod n");
    if (2 * r == n)
      fail(Errc::self_inverse_generator,
           "generator " + std::to_string(raw) + " equals n/2 = " + std::to_string(r));
    if (2 * r > n) r = n - r;
    gens.push_back(r);
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  std::int64_t g = n;
  for (std::int64_t a : gens) g = gcd_i64(g, a);
  if (g != 1)
    fail(Errc::disconnected_graph,
         "gcd of generators with n is " + std::to_string(g) + "; graph is disconnected");

  return CirculantGraph{n, std::move(gens)};
}

}  // namespace circsplit
