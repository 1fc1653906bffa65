#include <cmath>
#include <numbers>

#include "circsplit/ap_partition.hpp"
#include "circsplit/errors.hpp"
#include "circsplit/rng.hpp"
#include "circsplit/util.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace circsplit;

TEST_CASE("progression residues fold and validate") {
  CHECK(progression_residues({0, 1, 4, 17}) == std::vector<std::int64_t>{1, 2, 3, 4});
  CHECK(progression_residues({3, 7, 3, 50}) == std::vector<std::int64_t>{10, 17, 24});
  CHECK(progression_residues({0, 3, 3, 10}) == std::vector<std::int64_t>{3, 4, 1});

  try {
    progression_residues({0, 5, 2, 10});  // s=2 lands on 0 mod 10
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_spec);
  }
  try {
    progression_residues({0, 5, 1, 10});  // n/2
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_spec);
  }
  try {
    progression_residues({0, 3, 2, 9});  // 3 and 6 collide after folding
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_spec);
  }
  try {
    progression_residues({2, 4, 3, 18});  // {6, 8, 4}: gcd 2
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::disconnected_graph);
  }
}

TEST_CASE("angle classification, real and rational") {
  const double pi = std::numbers::pi;
  auto a = classify_theta(0.2, 1, 4);
  CHECK(a.band == AngleBand::near_zero);
  CHECK(a.residue == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(classify_theta(0.3, 1, 4).band == AngleBand::bulk);
  CHECK(classify_theta(2.0 * pi - 0.1, 1, 4).band == AngleBand::near_zero);
  CHECK(classify_theta(2.0 * pi - 0.1, 1, 4).residue == doctest::Approx(-0.1).epsilon(1e-12));
  CHECK(classify_theta(2.0 * pi / 7.0, 7, 16).band == AngleBand::near_zero);
  CHECK(classify_theta(0.9 / 4.0, 1, 4).band == AngleBand::near_zero);  // boundary inclusive

  CHECK(classify_theta_rational(1, 100, 1, 4).band == AngleBand::near_zero);
  CHECK(classify_theta_rational(1, 100, 1, 4).residue ==
        doctest::Approx(2.0 * pi / 100.0).epsilon(1e-15));
  CHECK(classify_theta_rational(99, 100, 1, 4).residue ==
        doctest::Approx(-2.0 * pi / 100.0).epsilon(1e-15));
  CHECK(classify_theta_rational(25, 100, 1, 4).band == AngleBand::bulk);

  Xoshiro256pp rng(13);
  for (int rep = 0; rep < 200; ++rep) {
    const std::int64_t n = 101 + static_cast<std::int64_t>(rng.next() % 5000);
    const std::int64_t j = 1 + static_cast<std::int64_t>(rng.next() % (n - 1));
    const std::int64_t b = 1 + static_cast<std::int64_t>(rng.next() % 9);
    const auto r = classify_theta_rational(j, n, b, 16);
    const auto c = classify_theta(2.0 * pi * static_cast<double>(j) / static_cast<double>(n), b, 16);
    CHECK(r.residue == doctest::Approx(c.residue).epsilon(1e-9));
    if (std::fabs(std::fabs(r.residue) - 0.9 / 16.0) > 1e-6) CHECK(r.band == c.band);
  }
}

TEST_CASE("cosine sum energy closed form") {
  CHECK(cosine_sum_energy(7, 0.0) == doctest::Approx(49.0).epsilon(1e-14));
  for (std::int64_t k : {2, 3, 4}) {
    CHECK(cosine_sum_energy(k, std::numbers::pi) <= 1.0 + 1e-12);
  }
  Xoshiro256pp rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const std::int64_t k = 2 + static_cast<std::int64_t>(rng.next() % 60);
    const double t = 1e-4 + rng.uniform01() * (std::numbers::pi - 2e-4);
    double c = 0.0, s = 0.0;
    for (std::int64_t q = 1; q <= k; ++q) {
      c += std::cos(static_cast<double>(q) * t);
      s += std::sin(static_cast<double>(q) * t);
    }
    CHECK(cosine_sum_energy(k, t) == doctest::Approx(c * c + s * s).epsilon(1e-9));
  }
}

TEST_CASE("constraint family shape") {
  const ConstraintSystem sys = build_constraint_system(2, 1);
  CHECK(sys.dim == 2);
  REQUIRE(sys.vectors.size() == 30);
  CHECK(sys.vectors[0][0] == doctest::Approx(1.0));
  CHECK(sys.vectors[0][1] == doctest::Approx(1.0));
  const double t = 2.0 * std::numbers::pi / 14.0;
  CHECK(sys.vectors[1][0] == doctest::Approx(std::cos(t)));
  CHECK(sys.vectors[1][1] == doctest::Approx(std::cos(2.0 * t)));
  CHECK(sys.vectors[14][0] == doctest::Approx(0.0));  // sine row at theta = 0
  CHECK(sys.vectors[15][1] == doctest::Approx(std::sin(2.0 * t)));
  CHECK(sys.vectors[28][0] == doctest::Approx(1.0));  // degree-0 monomial
  CHECK(sys.vectors[29][0] == doctest::Approx(0.5));
  CHECK(sys.vectors[29][1] == doctest::Approx(1.0));
  for (const auto& row : sys.vectors)
    for (double v : row) CHECK(std::fabs(v) <= 1.0 + 1e-12);
}

TEST_CASE("threshold schedule passes its own budget check") {
  for (std::int64_t k : {16, 64, 256}) {
    const std::int64_t L = static_cast<std::int64_t>(std::ceil(38.0 * std::log2(double(k))));
    for (std::int64_t alive = k; alive >= 2; alive /= 2) {
      const auto thr = threshold_schedule(k, L, alive);
      REQUIRE(static_cast<std::int64_t>(thr.size()) == 14 * k + L + 1);
      CHECK(validate_thresholds(thr, alive));
    }
  }
  const auto thr = threshold_schedule(256, 305, 256);
  CHECK(thr[0] == doctest::Approx(7.0 * std::sqrt(std::log(14.0))).epsilon(1e-12));
  CHECK(thr[14 * 256] < thr[14 * 256 + 20]);  // low-degree rows get the tighter cap
}

TEST_CASE("config resolution") {
  const PartitionConfig c = PartitionConfig::defaults(16);
  CHECK(c.L == 152);
  CHECK(c.delta == doctest::Approx(1.0 / 16.0));
  CHECK(c.stop_threshold == 4);
  CHECK(c.candidates == 16);
  CHECK(c.alpha == 0.9);

  PartitionConfig pinned;
  pinned.L = 7;
  pinned.candidates = 3;
  const PartitionConfig r = pinned.resolved(64);
  CHECK(r.L == 7);
  CHECK(r.candidates == 3);
  CHECK(r.stop_threshold == 6);

  const PartitionConfig a = PartitionConfig::asymptotic_profile(16);
  CHECK(a.stop_threshold == 32 * (a.L + 1));
  CHECK(a.candidates == 1);
}

TEST_CASE("taylor split reconstructs the numerator near zero") {
  Xoshiro256pp rng(29);
  const Progression p{3, 7, 16, 2003};
  for (int rep = 0; rep < 50; ++rep) {
    Signing x(16);
    for (auto& v : x) v = rng.next() & 1 ? 1 : -1;
    const double t = (rng.uniform01() - 0.5) * 2.0 * (0.9 / 16.0) * 0.99;
    if (std::fabs(t) < 1e-8) continue;
    const std::int64_t q = static_cast<std::int64_t>(rng.next() % 7);
    const double theta = (2.0 * std::numbers::pi * static_cast<double>(q) + t) / 7.0;
    if (theta <= 0.0 || theta >= 2.0 * std::numbers::pi) continue;
    const auto parts = taylor_split(x, p, theta);

    double direct = 0.0, direct_p = 0.0;
    for (std::int64_t s = 1; s <= 16; ++s) {
      const double term = 1.0 - std::cos(static_cast<double>(3 + 7 * s) * theta);
      direct += (x[static_cast<std::size_t>(s - 1)] > 0 ? 1.0 : -1.0) * term;
      direct_p += term;
    }
    const double ca = std::cos(3.0 * theta), sa = std::sin(3.0 * theta);
    const double num = parts.b3 - ca * (parts.b3 - parts.b1) + sa * parts.b2;
    const double nump = parts.b3p - ca * (parts.b3p - parts.b1p) + sa * parts.b2p;
    CHECK(num == doctest::Approx(direct).epsilon(1e-7));
    CHECK(nump == doctest::Approx(direct_p).epsilon(1e-7));
  }

  try {
    taylor_split(Signing(16, 1), p, std::numbers::pi / 7.0 + 0.03);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::angle_not_near_zero);
  }
}

TEST_CASE("condition checks score the all-ones signing") {
  const Signing ones(16, 1);
  const auto rep = check_conditions(ones, 16, 152, 50.0, 33.0);
  CHECK(rep.lambda_max == doctest::Approx(16.0).epsilon(1e-9));  // theta = 0 row
  CHECK(rep.moment_max == doctest::Approx(16.0).epsilon(1e-9));  // degree 0
  CHECK(rep.budget_lambda == doctest::Approx(200.0));
  CHECK(rep.budget_moment == doctest::Approx(132.0));
  CHECK(rep.passes());

  Signing alt(16);
  for (std::size_t i = 0; i < 16; ++i) alt[i] = i % 2 ? 1 : -1;
  const auto rep2 = check_conditions(alt, 16, 152, 50.0, 33.0);
  CHECK(rep2.lambda_max <= 16.0);
  CHECK(rep2.lambda_max > 0.0);
}

TEST_CASE("partition of a short progression is deterministic and verified") {
  Progression p;
  p.a = 0;
  p.b = 1;
  p.k = 6;
  p.n = next_prime_above(120);
  const auto r1 = partition_progression(p, PartitionConfig{}, 31);
  const auto r2 = partition_progression(p, PartitionConfig{}, 31);
  REQUIRE(r1.signing.size() == 6);
  CHECK(r1.signing == r2.signing);
  CHECK(r1.spectral.max_ratio == r2.spectral.max_ratio);
  CHECK(r1.candidate_index == r2.candidate_index);
  CHECK(r1.condition.passes());
  CHECK(r1.spectral.max_ratio < 1.0);
  CHECK(r1.spectral.mode == RatioMode::exact);

  // the report's ratio must match a fresh evaluation of the returned signing
  const CirculantGraph g = progression_graph(p);
  const auto again = spectral_ratio(g, r1.signing);
  CHECK(again.max_ratio == doctest::Approx(r1.spectral.max_ratio).epsilon(1e-12));
}

TEST_CASE("trivial single-generator progression") {
  Progression p;
  p.k = 1;
  p.b = 3;
  p.n = 11;
  const auto r = partition_progression(p, PartitionConfig{}, 1);
  REQUIRE(r.signing.size() == 1);
  CHECK(r.signing[0] == 1);
  CHECK(r.spectral.max_ratio == doctest::Approx(1.0));
}

TEST_CASE("asymptotic profile stops immediately at desk scale") {
  Progression p;
  p.a = 0;
  p.b = 1;
  p.k = 8;
  p.n = next_prime_above(160);
  const auto r = partition_progression(p, PartitionConfig::asymptotic_profile(8), 9);
  for (auto v : r.signing) CHECK(v == 1);
}
