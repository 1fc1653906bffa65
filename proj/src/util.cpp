#include "circsplit/util.hpp"

#include <cstdio>

namespace circsplit {

bool is_prime(std::int64_t v) {
  if (v < 2) return false;
  for (std::int64_t d : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (v % d == 0) return v == d;
  }
  // Deterministic Miller-Rabin for 64-bit inputs.
  std::int64_t d = v - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  auto powmod = [&](std::uint64_t base, std::uint64_t e, std::uint64_t m) {
    std::uint64_t acc = 1 % m;
    base %= m;
    while (e) {
      if (e & 1) acc = mulmod_u64(acc, base, m);
      base = mulmod_u64(base, base, m);
      e >>= 1;
    }
    return acc;
  };
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL,
                          37ULL}) {
    std::uint64_t x = powmod(a, static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(v));
    if (x == 1 || x == static_cast<std::uint64_t>(v - 1)) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod_u64(x, x, static_cast<std::uint64_t>(v));
      if (x == static_cast<std::uint64_t>(v - 1)) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::int64_t next_prime_above(std::int64_t v) {
  std::int64_t c = v + 1;
  if (c <= 2) return 2;
  if ((c & 1) == 0) ++c;
  while (!is_prime(c)) c += 2;
  return c;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::uint64_t mulmod_u64(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * y) % m);
}

std::int64_t gcd_i64(std::int64_t a, std::int64_t b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace circsplit
