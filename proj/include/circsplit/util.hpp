#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace circsplit {

bool is_prime(std::int64_t v);

// Smallest prime strictly greater than v.
std::int64_t next_prime_above(std::int64_t v);

inline double log6(double v) { return std::log(v) / std::log(6.0); }

// Fixed 17-significant-digit rendering used by every report writer.
std::string fmt17(double v);

// (x * y) mod m, overflow-safe for any 64-bit operands.
std::uint64_t mulmod_u64(std::uint64_t x, std::uint64_t y, std::uint64_t m);

std::int64_t gcd_i64(std::int64_t a, std::int64_t b);

}  // namespace circsplit
