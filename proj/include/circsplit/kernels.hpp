#pragma once

#include <cstdint>
#include <vector>

namespace circsplit {

// Reduction block size. Per-block partial results are stored by block index and
// combined sequentially, so serial and OpenMP runs produce identical bits.
inline constexpr std::int64_t kBlock = 8192;

struct MaxLoc {
  double value = 0.0;
  std::int64_t index = -1;
};

namespace detail {

template <class F>
MaxLoc scan_block_max(std::int64_t lo, std::int64_t hi, F& f) {
  MaxLoc best{-1.0, -1};
  for (std::int64_t i = lo; i < hi; ++i) {
    const double v = f(i);
    if (v > best.value || best.index < 0) {
      best.value = v;
      best.index = i;
    }
  }
  return best;
}

template <class F>
double scan_block_sum(std::int64_t lo, std::int64_t hi, F& f) {
  double s = 0.0, c = 0.0;
  for (std::int64_t i = lo; i < hi; ++i) {
    const double y = f(i) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

}  // namespace detail

// Max of f over [lo, hi); strictly greater value wins, ties keep the smallest index.
template <class F>
MaxLoc argmax_blocked(std::int64_t lo, std::int64_t hi, F f, bool parallel = true) {
  if (hi <= lo) return {};
  const std::int64_t nblocks = (hi - lo + kBlock - 1) / kBlock;
  std::vector<MaxLoc> part(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(dynamic, 1) if (parallel && nblocks > 1)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t blo = lo + b * kBlock;
    const std::int64_t bhi = blo + kBlock < hi ? blo + kBlock : hi;
    part[static_cast<std::size_t>(b)] = detail::scan_block_max(blo, bhi, f);
  }
  MaxLoc best = part[0];
  for (std::int64_t b = 1; b < nblocks; ++b) {
    const MaxLoc& p = part[static_cast<std::size_t>(b)];
    if (p.value > best.value) best = p;
  }
  return best;
}

// Sum of f over [lo, hi); per-block Kahan partials, combined in block order.
template <class F>
double sum_blocked(std::int64_t lo, std::int64_t hi, F f, bool parallel = true) {
  if (hi <= lo) return 0.0;
  const std::int64_t nblocks = (hi - lo + kBlock - 1) / kBlock;
  std::vector<double> part(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(dynamic, 1) if (parallel && nblocks > 1)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t blo = lo + b * kBlock;
    const std::int64_t bhi = blo + kBlock < hi ? blo + kBlock : hi;
    part[static_cast<std::size_t>(b)] = detail::scan_block_sum(blo, bhi, f);
  }
  double s = 0.0, c = 0.0;
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const double y = part[static_cast<std::size_t>(b)] - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

// Naive single-pass twins used by tests and the benchmark.
namespace refimpl {

template <class F>
MaxLoc argmax(std::int64_t lo, std::int64_t hi, F f) {
  MaxLoc best{-1.0, -1};
  for (std::int64_t i = lo; i < hi; ++i) {
    const double v = f(i);
    if (v > best.value || best.index < 0) {
      best.value = v;
      best.index = i;
    }
  }
  return best;
}

template <class F>
double sum(std::int64_t lo, std::int64_t hi, F f) {
  double s = 0.0;
  for (std::int64_t i = lo; i < hi; ++i) s += f(i);
  return s;
}

}  // namespace refimpl

}  // namespace circsplit
