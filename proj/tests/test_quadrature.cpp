#include <cmath>
#include <numeric>

#include "circsplit/circulant.hpp"
#include "circsplit/errors.hpp"
#include "circsplit/resistance.hpp"
#include "circsplit/rng.hpp"
#include "circsplit/util.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace circsplit;

TEST_CASE("cycle edge resistance is (n-1)/n") {
  for (std::int64_t n = 4; n <= 64; ++n) {
    const CirculantGraph g = canonical_circulant(n, {1});
    const double want = static_cast<double>(n - 1) / static_cast<double>(n);
    CHECK(edge_effective_resistance(g, 1) == doctest::Approx(want).epsilon(1e-12));
    CHECK(max_edge_effective_resistance(g) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("complete graph edge resistance is 2/n") {
  for (std::int64_t n : {5, 7, 9, 21, 63}) {
    std::vector<std::int64_t> gens;
    for (std::int64_t s = 1; s <= (n - 1) / 2; ++s) gens.push_back(s);
    const CirculantGraph g = canonical_circulant(n, gens);
    for (std::int64_t a : {std::int64_t(1), (n - 1) / 2}) {
      CHECK(edge_effective_resistance(g, a) ==
            doctest::Approx(2.0 / static_cast<double>(n)).epsilon(1e-11));
    }
  }
}

TEST_CASE("edge resistance matches the pseudoinverse") {
  Xoshiro256pp rng(101);
  for (int rep = 0; rep < 10; ++rep) {
    const CirculantGraph g = oracles::random_connected_circulant(rng, 200);
    for (std::int64_t a : g.gens)
      CHECK(edge_effective_resistance(g, a) == doctest::Approx(oracles::er_pinv(g, a)).epsilon(1e-8));
  }
}

TEST_CASE("resistance rejects a non-generator") {
  const CirculantGraph g = canonical_circulant(12, {1, 5});
  try {
    edge_effective_resistance(g, 3);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::generator_not_in_graph);
  }
}

TEST_CASE("generator resistances sum to (n-1)/n") {
  Xoshiro256pp rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const CirculantGraph g = oracles::random_connected_circulant(rng, 500);
    double sum = 0.0;
    for (std::int64_t a : g.gens) sum += edge_effective_resistance(g, a);
    const double want = static_cast<double>(g.n - 1) / static_cast<double>(g.n);
    CHECK(sum == doctest::Approx(want).epsilon(1e-9));
  }
}

TEST_CASE("limit resistance of (1,2) at generator 1 is 1/sqrt(5)") {
  const double v = limit_effective_resistance({1, 2}, 1, 1e-9);
  CHECK(v == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-8));
}

TEST_CASE("limit resistances sum to one") {
  for (const auto& gens :
       {std::vector<std::int64_t>{1, 2, 3}, {1, 4, 9}, {2, 5}, {1, 6, 36}}) {
    const auto all = limit_resistance_all(gens, 1e-9);
    const double sum = std::accumulate(all.begin(), all.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("finite graphs approach the limit") {
  const double lim = limit_effective_resistance({1, 2}, 1, 1e-9);
  const CirculantGraph g = canonical_circulant(20001, {1, 2});
  CHECK(edge_effective_resistance(g, 1) == doctest::Approx(lim).epsilon(1e-3));
}

TEST_CASE("limit quadrature is deterministic") {
  const double a = limit_effective_resistance({1, 5, 26}, 5, 1e-8);
  const double b = limit_effective_resistance({1, 5, 26}, 5, 1e-8);
  CHECK(a == b);
}

TEST_CASE("lattice subsampling stays close to the dense value") {
  QuadratureOptions opts;
  opts.max_nodes = 4;  // force the lattice path
  const double coarse = max_limit_resistance({1, 2}, 1e-6, opts);
  const double dense = max_limit_resistance({1, 2}, 1e-9);
  CHECK(std::fabs(coarse - dense) <= 5e-3);
  CHECK(coarse == max_limit_resistance({1, 2}, 1e-6, opts));
}

TEST_CASE("impossible node budgets raise nonconvergence") {
  QuadratureOptions opts;
  opts.max_nodes = 4;
  opts.lattice_nodes = 16;
  try {
    limit_effective_resistance({1, 2}, 1, 1e-12, opts);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::quadrature_nonconvergence);
  }
}

TEST_CASE("limit rejects bad families") {
  try {
    limit_effective_resistance({2, 4}, 2, 1e-6);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::disconnected_graph);
  }
  try {
    limit_effective_resistance({1, 2}, 3, 1e-6);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::generator_not_in_graph);
  }
}
