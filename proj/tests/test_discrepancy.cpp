#include <cmath>
#include <vector>

#include "circsplit/discrepancy.hpp"
#include "circsplit/errors.hpp"
#include "circsplit/rng.hpp"
#include "doctest.h"

using namespace circsplit;

namespace {

ConstraintSystem random_system(std::int64_t n, std::int64_t m, double c, std::uint64_t seed) {
  ConstraintSystem sys;
  sys.dim = n;
  Xoshiro256pp rng(seed);
  for (std::int64_t j = 0; j < m; ++j) {
    std::vector<double> row(static_cast<std::size_t>(n));
    for (auto& v : row) v = rng.next() & 1 ? 1.0 : -1.0;
    sys.vectors.push_back(std::move(row));
  }
  sys.thresholds.assign(static_cast<std::size_t>(m), c);
  return sys;
}

}  // namespace

TEST_CASE("threshold budget check") {
  CHECK(validate_thresholds({4.0, 4.0}, 16));
  CHECK(!validate_thresholds({4.0, 4.0, 4.0}, 16));
  CHECK(validate_thresholds({0.0}, 16));
  CHECK(!validate_thresholds({0.0, 0.0}, 16));
  CHECK(validate_thresholds({}, 1));
}

TEST_CASE("single zero-threshold constraint forces an antisymmetric freeze") {
  ConstraintSystem sys;
  sys.dim = 2;
  sys.vectors = {{1.0, 1.0}};
  sys.thresholds = {0.0};
  WalkOptions opts;
  opts.delta = 0.05;
  opts.seed = 12;
  const auto x = partial_color(sys, {0.0, 0.0}, opts);
  REQUIRE(x.size() == 2);
  CHECK(std::fabs(x[0] + x[1]) <= 1e-6);
  CHECK(std::fabs(x[0]) >= 0.95);
  CHECK(verify_partial_coloring(sys, {0.0, 0.0}, x, opts.delta));
}

TEST_CASE("empty constraint set still freezes half") {
  ConstraintSystem sys;
  sys.dim = 8;
  WalkOptions opts;
  opts.delta = 1.0 / 16.0;
  opts.seed = 5;
  const std::vector<double> x0(8, 0.0);
  const auto x = partial_color(sys, x0, opts);
  std::int64_t frozen = 0;
  for (double v : x) {
    CHECK(std::fabs(v) <= 1.0);
    if (std::fabs(v) >= 1.0 - opts.delta) ++frozen;
  }
  CHECK(frozen >= 4);
  CHECK(verify_partial_coloring(sys, x0, x, opts.delta));
}

TEST_CASE("walk is deterministic in the seed") {
  const ConstraintSystem sys = random_system(24, 16, 3.0, 77);
  const std::vector<double> x0(24, 0.0);
  WalkOptions opts;
  opts.delta = 1.0 / 16.0;
  opts.seed = 99;
  const auto a = partial_color(sys, x0, opts);
  const auto b = partial_color(sys, x0, opts);
  CHECK(a == b);
  opts.seed = 100;
  CHECK(partial_color(sys, x0, opts) != a);
}

TEST_CASE("frozen coordinates never move") {
  const ConstraintSystem sys = random_system(16, 8, 3.0, 3);
  std::vector<double> x0(16, 0.0);
  x0[2] = 1.0;
  x0[9] = -0.999;  // within delta of -1: already frozen at delta 1/16
  x0[11] = 0.4;
  WalkOptions opts;
  opts.delta = 1.0 / 16.0;
  opts.seed = 8;
  const auto x = partial_color(sys, x0, opts);
  CHECK(x[2] == 1.0);
  CHECK(x[9] == -0.999);
  CHECK(verify_partial_coloring(sys, x0, x, opts.delta));
}

TEST_CASE("postconditions hold on random systems") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const ConstraintSystem sys = random_system(32, 20, 3.0, seed);
    const std::vector<double> x0(32, 0.0);
    WalkOptions opts;
    opts.delta = 1.0 / 32.0;
    opts.seed = seed;
    const auto x = partial_color(sys, x0, opts);
    CHECK(verify_partial_coloring(sys, x0, x, opts.delta));

    // independent recomputation, not via the library helper
    std::int64_t settled = 0;
    for (double v : x)
      if (std::fabs(v) >= 1.0 - opts.delta) ++settled;
    CHECK(settled >= 16);
    for (std::size_t j = 0; j < sys.vectors.size(); ++j) {
      double dot = 0.0, norm2 = 0.0;
      for (std::size_t i = 0; i < 32; ++i) {
        dot += sys.vectors[j][i] * (x[i] - x0[i]);
        norm2 += sys.vectors[j][i] * sys.vectors[j][i];
      }
      CHECK(std::fabs(dot) <= sys.thresholds[j] * std::sqrt(norm2) + 1e-6);
    }
  }
}

TEST_CASE("verification rejects a corrupted output") {
  const ConstraintSystem sys = random_system(16, 10, 3.0, 21);
  const std::vector<double> x0(16, 0.0);
  WalkOptions opts;
  opts.delta = 1.0 / 16.0;
  opts.seed = 4;
  auto x = partial_color(sys, x0, opts);
  auto bad = x;
  bad[0] = 1.5;
  CHECK(!verify_partial_coloring(sys, x0, bad, opts.delta));
  bad = x;
  for (auto& v : bad) v = 0.0;
  CHECK(!verify_partial_coloring(sys, x0, bad, opts.delta));
}

TEST_CASE("fully constrained system exhausts the restart cap") {
  ConstraintSystem sys;
  sys.dim = 4;
  for (int i = 0; i < 4; ++i) {
    std::vector<double> row(4, 0.0);
    row[static_cast<std::size_t>(i)] = 1.0;
    sys.vectors.push_back(std::move(row));
  }
  sys.thresholds.assign(4, 0.0);
  WalkOptions opts;
  opts.delta = 0.1;
  opts.restart_cap = 3;
  opts.seed = 1;
  try {
    partial_color(sys, {0.0, 0.0, 0.0, 0.0}, opts);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::restart_cap_exceeded);
  }
}

TEST_CASE("input validation") {
  ConstraintSystem sys;
  sys.dim = 2;
  sys.vectors = {{1.0, 0.0}};
  sys.thresholds = {-1.0};
  WalkOptions opts;
  try {
    partial_color(sys, {0.0, 0.0}, opts);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_thresholds);
  }
  sys.thresholds = {1.0};
  CHECK_THROWS_AS(partial_color(sys, {0.0}, opts), Error);
  opts.delta = 0.7;
  CHECK_THROWS_AS(partial_color(sys, {0.0, 0.0}, opts), Error);
}

TEST_CASE("iteration drives every coordinate to a sign") {
  ThresholdSchedule none = [](std::int64_t) { return std::vector<double>{}; };
  const Signing s = iterate_to_full_signing(64, {}, none, 1.0 / 64.0, 8, 2024);
  REQUIRE(s.size() == 64);
  for (auto v : s) CHECK((v == 1 || v == -1));
  CHECK(s == iterate_to_full_signing(64, {}, none, 1.0 / 64.0, 8, 2024));
}

TEST_CASE("iteration validates the schedule budget") {
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < 3; ++j) rows.push_back(std::vector<double>(16, 0.5));
  ThresholdSchedule bad = [](std::int64_t) { return std::vector<double>{4.0, 4.0, 4.0}; };
  try {
    iterate_to_full_signing(16, rows, bad, 1.0 / 16.0, 4, 5);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_thresholds);
  }
  ThresholdSchedule short_list = [](std::int64_t) { return std::vector<double>{4.0}; };
  try {
    iterate_to_full_signing(16, rows, short_list, 1.0 / 16.0, 4, 5);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::invalid_thresholds);
  }
}

TEST_CASE("default restart cap grows with the system") {
  CHECK(default_restart_cap(2, 1) >= 1);
  CHECK(default_restart_cap(1 << 10, 1 << 10) > default_restart_cap(2, 1));
}
