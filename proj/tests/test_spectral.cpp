#include <cmath>
#include <numbers>

#include "circsplit/circulant.hpp"
#include "circsplit/errors.hpp"
#include "circsplit/rng.hpp"
#include "circsplit/spectral.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace circsplit;

namespace {

Signing random_signing(Xoshiro256pp& rng, std::int64_t k) {
  Signing x(static_cast<std::size_t>(k));
  for (auto& v : x) v = rng.next() & 1 ? 1 : -1;
  return x;
}

}  // namespace

TEST_CASE("pentagon split ratio is 1/sqrt(5)") {
  const CirculantGraph g = canonical_circulant(5, {1, 2});
  const auto rep = spectral_ratio(g, Signing{1, -1});
  CHECK(rep.max_ratio == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
  CHECK(rep.mode == RatioMode::exact);
  CHECK(rep.bernstein_inflation == 1.0);
  CHECK(rep.certified() == rep.max_ratio);
  CHECK(rep.points == 4);
}

TEST_CASE("all-ones signing has ratio exactly one") {
  Xoshiro256pp rng(3);
  for (int rep = 0; rep < 6; ++rep) {
    const CirculantGraph g = oracles::random_connected_circulant(rng, 300);
    const Signing ones(static_cast<std::size_t>(g.k()), 1);
    CHECK(spectral_ratio(g, ones).max_ratio == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("ratio is invariant under global sign flip") {
  Xoshiro256pp rng(9);
  for (int rep = 0; rep < 6; ++rep) {
    const CirculantGraph g = oracles::random_connected_circulant(rng, 300);
    Signing x = random_signing(rng, g.k());
    Signing nx = x;
    for (auto& v : nx) v = static_cast<std::int8_t>(-v);
    const auto a = spectral_ratio(g, x);
    const auto b = spectral_ratio(g, nx);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.argmax_theta == b.argmax_theta);
  }
}

TEST_CASE("ratio agrees with a dense eigen-oracle") {
  Xoshiro256pp rng(31);
  for (std::int64_t k = 2; k <= 4; ++k) {
    const std::int64_t n = 21 + 2 * static_cast<std::int64_t>(rng.next() % 20);
    std::vector<std::int64_t> gens;
    for (std::int64_t s = 1; s <= k; ++s) gens.push_back(s);
    const CirculantGraph g = canonical_circulant(n, gens);
    const Signing x = random_signing(rng, k);
    ProductSpec spec;
    spec.kind = ProductKind::cartesian;
    spec.n = n;
    spec.ks = {k};
    ProductSigning y;
    y.per_factor = {x};
    const double dense = oracles::product_ratio_dense(spec, y);
    CHECK(spectral_ratio(g, x).max_ratio == doctest::Approx(dense).epsilon(1e-8));
  }
}

TEST_CASE("grid mode certifies at least the exact maximum") {
  Xoshiro256pp rng(41);
  for (int rep = 0; rep < 6; ++rep) {
    const CirculantGraph g = oracles::random_connected_circulant(rng, 2000);
    const Signing x = random_signing(rng, g.k());
    const auto exact = spectral_ratio(g, x, RatioMode::exact);
    const auto grid = spectral_ratio(g, x, RatioMode::grid, 32);
    CHECK(grid.bernstein_inflation > 1.0);
    CHECK(grid.certified() >= exact.max_ratio * (1.0 - 1e-9));
    CHECK(grid.points == 32 * g.gens.back() - 1);
  }
}

TEST_CASE("grid mode rejects oversample below 8") {
  const CirculantGraph g = canonical_circulant(12, {1, 5});
  try {
    spectral_ratio(g, Signing{1, -1}, RatioMode::grid, 4);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_spec);
  }
}

TEST_CASE("signing validation") {
  const CirculantGraph g = canonical_circulant(12, {1, 5});
  CHECK_THROWS_AS(spectral_ratio(g, Signing{1}), Error);
  CHECK_THROWS_AS(spectral_ratio(g, Signing{1, 0}), Error);
}

TEST_CASE("samples cover the argmax and stay theta-sorted") {
  const CirculantGraph g = canonical_circulant(4099, {1, 7, 19});
  Xoshiro256pp rng(55);
  const Signing x = random_signing(rng, 3);
  const auto rep = spectral_ratio(g, x);
  REQUIRE(!rep.samples.empty());
  bool saw = false;
  double best = 0.0;
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    if (i) CHECK(rep.samples[i].theta > rep.samples[i - 1].theta);
    CHECK(rep.samples[i].denominator > 0.0);
    const double r = std::fabs(rep.samples[i].numerator) / rep.samples[i].denominator;
    best = std::max(best, r);
    if (std::fabs(rep.samples[i].theta - rep.argmax_theta) < 1e-15) saw = true;
  }
  CHECK(saw);
  CHECK(best == doctest::Approx(rep.max_ratio).epsilon(1e-12));
}

TEST_CASE("degree lower bound and error floor constants") {
  CHECK(er_degree_lower_bound(5, 4.0) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(partition_error_floor(8) == doctest::Approx(1.0 / (2.0 * std::sqrt(8.0))).epsilon(1e-15));
}

TEST_CASE("no signing of a small circulant beats the error floor") {
  for (std::int64_t k = 2; k <= 4; ++k) {
    const std::int64_t n = 4 * k + 1;
    std::vector<std::int64_t> gens;
    for (std::int64_t s = 1; s <= k; ++s) gens.push_back(s);
    const CirculantGraph g = canonical_circulant(n, gens);
    const auto [opt, witness] = oracles::brute_force_optimum(g);
    CHECK(opt >= partition_error_floor(2 * k));
    CHECK(static_cast<std::int64_t>(witness.size()) == k);
  }
}
