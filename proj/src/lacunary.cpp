#include "circsplit/lacunary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "circsplit/errors.hpp"
#include "circsplit/kernels.hpp"
#include "circsplit/rng.hpp"
#include "circsplit/util.hpp"

namespace circsplit {

namespace {

BigInt fact_big(std::int64_t n) {
  BigInt r = 1;
  for (std::int64_t i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binom_big(std::int64_t n, std::int64_t l) {
  if (l < 0 || l > n) return 0;
  BigInt r = 1;
  for (std::int64_t i = 1; i <= l; ++i) {
    r *= (n - l + i);
    r /= i;
  }
  return r;
}

double powi(double x, std::int64_t p) {
  double r = 1.0, b = x;
  while (p > 0) {
    if (p & 1) r *= b;
    b *= b;
    p >>= 1;
  }
  return r;
}

void check_signing(const GapFamily& fam, const Signing& x) {
  if (static_cast<std::int64_t>(x.size()) != fam.K)
    fail(Errc::invalid_spec, "signing length does not match K");
  for (std::int8_t v : x)
    if (v != 1 && v != -1) fail(Errc::invalid_spec, "signing entries must be +1 or -1");
}

double tail_threshold(std::int64_t K) {
  return 0.25 * std::sqrt(static_cast<double>(K) * log6(std::max<std::int64_t>(K, 2)));
}

}  // namespace

double standard_gap(std::int64_t K) {
  if (K < 1) fail(Errc::invalid_spec, "K must be positive");
  return 4.0 * log6(K);
}

GapFamily make_gap_family(std::int64_t K, double gap) {
  if (K < 1 || !(gap > 0.0)) fail(Errc::invalid_spec, "need K >= 1 and gap > 0");
  GapFamily fam;
  fam.K = K;
  fam.gap = gap;
  fam.gens.reserve(static_cast<std::size_t>(K));
  fam.gens.push_back(1);
  std::int64_t sum = 1;
  const std::int64_t cap = std::int64_t(1) << 62;
  for (std::int64_t k = 2; k <= K; ++k) {
    std::int64_t cand = static_cast<std::int64_t>(std::floor(gap * static_cast<double>(sum))) + 1;
    while (static_cast<double>(cand) <= gap * static_cast<double>(sum)) ++cand;
    if (cand >= cap - sum) fail(Errc::overflow, "gap family exceeds 2^62");
    fam.gens.push_back(cand);
    sum += cand;
  }
  sum = fam.gens[0];
  for (std::size_t k = 1; k < fam.gens.size(); ++k) {
    if (!(static_cast<double>(fam.gens[k]) > gap * static_cast<double>(sum)))
      fail(Errc::overflow, "gap postcondition failed");
    sum += fam.gens[k];
  }
  return fam;
}

std::int64_t moment_validity_bound(const GapFamily& fam) {
  if (fam.K < 1 || static_cast<std::int64_t>(fam.gens.size()) != fam.K)
    fail(Errc::invalid_spec, "malformed family");
  if (fam.K == 1) return std::int64_t(1) << 40;
  std::int64_t bound = std::int64_t(1) << 40;
  std::int64_t sum = fam.gens[0];
  for (std::size_t k = 1; k < fam.gens.size(); ++k) {
    bound = std::min(bound, (fam.gens[k] - 1) / sum);
    sum += fam.gens[k];
  }
  return bound - (bound % 2);
}

BigRational cosine_power_moment_exact(std::int64_t K, std::int64_t p) {
  if (K < 1 || p < 2 || p % 2 != 0) fail(Errc::invalid_spec, "need K >= 1 and even p >= 2");
  if (p > 40) fail(Errc::infeasible, "moment order beyond the enumeration cap");
  const BigInt pfact = fact_big(p);
  std::vector<BigInt> half_fact_sq(static_cast<std::size_t>(p / 2 + 1));
  for (std::int64_t h = 0; h <= p / 2; ++h) {
    BigInt f = fact_big(h);
    half_fact_sq[static_cast<std::size_t>(h)] = f * f;
  }
  // per_len[l] accumulates p! / prod((q_i/2)!)^2 over ordered even compositions of length l
  std::vector<BigInt> per_len(static_cast<std::size_t>(p / 2 + 1), BigInt(0));
  std::vector<std::int64_t> parts;
  auto rec = [&](auto&& self, std::int64_t rem) -> void {
    if (rem == 0) {
      BigInt t = pfact;
      for (std::int64_t q : parts) t /= half_fact_sq[static_cast<std::size_t>(q / 2)];
      per_len[parts.size()] += t;
      return;
    }
    for (std::int64_t q = 2; q <= rem; q += 2) {
      parts.push_back(q);
      self(self, rem - q);
      parts.pop_back();
    }
  };
  rec(rec, p);
  BigInt num = 0;
  for (std::int64_t l = 1; l <= p / 2; ++l)
    num += per_len[static_cast<std::size_t>(l)] * binom_big(K, l);
  BigInt den = BigInt(1) << static_cast<unsigned>(p);
  return BigRational(num, den);
}

std::pair<BigInt, BigInt> double_factorial_identity(std::int64_t p) {
  if (p < 2 || p % 2 != 0) fail(Errc::invalid_spec, "need even p >= 2");
  BigInt lhs = 1;
  for (std::int64_t q = 1; q <= p - 1; q += 2) lhs *= q;
  BigInt rhs = fact_big(p) / ((BigInt(1) << static_cast<unsigned>(p / 2)) * fact_big(p / 2));
  return {lhs, rhs};
}

double cosine_power_moment_quadrature(const GapFamily& fam, const Signing& x, std::int64_t p,
                                      double quad_tol, std::int64_t node_cap) {
  check_signing(fam, x);
  if (p < 2 || p % 2 != 0) fail(Errc::invalid_spec, "need even p >= 2");
  const std::int64_t aK = fam.gens.back();
  if (node_cap < 1 || aK > node_cap / (32 * p))
    fail(Errc::infeasible, "quadrature would need more than node_cap nodes");
  const std::int64_t n0 = 16 * p * aK;
  const std::int64_t K = fam.K;
  // Per-generator rotation recurrence, re-anchored with libm at every block start.
  auto mean = [&](std::int64_t N) {
    const double w = 2.0 * std::numbers::pi / static_cast<double>(N);
    const std::int64_t nblocks = (N + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
      const std::int64_t i0 = blk * kBlock;
      const std::int64_t i1 = std::min(N, i0 + kBlock);
      std::vector<double> c(static_cast<std::size_t>(K)), sn(static_cast<std::size_t>(K));
      std::vector<double> cr(static_cast<std::size_t>(K)), sr(static_cast<std::size_t>(K));
      std::vector<double> sg(static_cast<std::size_t>(K));
      for (std::int64_t k = 0; k < K; ++k) {
        const std::uint64_t a = static_cast<std::uint64_t>(fam.gens[static_cast<std::size_t>(k)]);
        const double ang0 = w * static_cast<double>(mulmod_u64(a, static_cast<std::uint64_t>(i0),
                                                               static_cast<std::uint64_t>(N)));
        const double step = w * static_cast<double>(a % static_cast<std::uint64_t>(N));
        c[static_cast<std::size_t>(k)] = std::cos(ang0);
        sn[static_cast<std::size_t>(k)] = std::sin(ang0);
        cr[static_cast<std::size_t>(k)] = std::cos(step);
        sr[static_cast<std::size_t>(k)] = std::sin(step);
        sg[static_cast<std::size_t>(k)] = x[static_cast<std::size_t>(k)] > 0 ? 1.0 : -1.0;
      }
      double acc = 0.0, comp = 0.0;
      for (std::int64_t i = i0; i < i1; ++i) {
        double s = 0.0;
        for (std::int64_t k = 0; k < K; ++k) {
          const std::size_t kk = static_cast<std::size_t>(k);
          s += sg[kk] * c[kk];
          const double cn = c[kk] * cr[kk] - sn[kk] * sr[kk];
          sn[kk] = sn[kk] * cr[kk] + c[kk] * sr[kk];
          c[kk] = cn;
        }
        const double y = powi(s, p) - comp;
        const double t = acc + y;
        comp = (t - acc) - y;
        acc = t;
      }
      partial[static_cast<std::size_t>(blk)] = acc;
    }
    double acc = 0.0, comp = 0.0;
    for (double v : partial) {
      const double y = v - comp;
      const double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    return acc / static_cast<double>(N);
  };
  const double m0 = mean(n0);
  const double m1 = mean(2 * n0);
  if (std::fabs(m0 - m1) > quad_tol)
    fail(Errc::quadrature_nonconvergence,
         "doubled grid moved the moment by " + fmt17(std::fabs(m0 - m1)));
  return m1;
}

MomentRatioReport moment_gaussian_ratio(std::int64_t K, std::int64_t p) {
  if (K < 2) fail(Errc::invalid_spec, "ratio bounds need K >= 2");
  const BigRational moment = cosine_power_moment_exact(K, p);
  BigInt gnum = fact_big(p) * pow(BigInt(K), static_cast<unsigned>(p / 2));
  BigInt gden = (BigInt(1) << static_cast<unsigned>(p)) * fact_big(p / 2);
  const BigRational gauss(gnum, gden);
  const BigRational ratio_q = moment / gauss;
  MomentRatioReport rep;
  rep.ratio = ratio_q.convert_to<double>();
  const double lg = log6(K);
  rep.lower = 1.0 - 8.0 * lg * lg / static_cast<double>(K);
  rep.upper = 1.0 + lg / (static_cast<double>(K) - lg) *
                        std::pow(static_cast<double>(K), std::log(4.0) / std::log(6.0)) / 2.0;
  return rep;
}

TailSampleReport signed_sum_tail_sample(const GapFamily& fam, const Signing& x,
                                        std::int64_t n_samples, std::uint64_t seed) {
  check_signing(fam, x);
  if (n_samples < 1) fail(Errc::invalid_spec, "need at least one sample");
  const std::int64_t K = fam.K;
  std::vector<double> abs_s(static_cast<std::size_t>(n_samples));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double theta = 2.0 * std::numbers::pi * u01_at(seed, static_cast<std::uint64_t>(i));
    double s = 0.0;
    for (std::int64_t k = 0; k < K; ++k) {
      const double c = std::cos(static_cast<double>(fam.gens[static_cast<std::size_t>(k)]) * theta);
      s += x[static_cast<std::size_t>(k)] > 0 ? c : -c;
    }
    abs_s[static_cast<std::size_t>(i)] = std::fabs(s);
  }
  TailSampleReport rep;
  rep.threshold = tail_threshold(K);
  rep.max_abs = argmax_blocked(std::int64_t(0), n_samples,
                               [&](std::int64_t i) { return abs_s[static_cast<std::size_t>(i)]; })
                    .value;
  std::int64_t count = 0;
  for (double v : abs_s)
    if (v >= rep.threshold) ++count;
  rep.exceed_fraction = static_cast<double>(count) / static_cast<double>(n_samples);
  return rep;
}

TailSweepReport signed_sum_tail_sweep(const GapFamily& fam, std::int64_t n_samples,
                                      std::uint64_t seed) {
  if (fam.K < 2 || fam.K > 24) fail(Errc::infeasible, "class sweep supports 2 <= K <= 24");
  if (n_samples < 1) fail(Errc::invalid_spec, "need at least one sample");
  const std::int64_t K = fam.K;
  const std::int64_t n = n_samples;
  std::vector<double> table(static_cast<std::size_t>(n * K));
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const double theta = 2.0 * std::numbers::pi * u01_at(seed, static_cast<std::uint64_t>(i));
    for (std::int64_t k = 0; k < K; ++k)
      table[static_cast<std::size_t>(i * K + k)] =
          std::cos(static_cast<double>(fam.gens[static_cast<std::size_t>(k)]) * theta);
  }
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < K; ++k) acc += table[static_cast<std::size_t>(i * K + k)];
    s[static_cast<std::size_t>(i)] = acc;
  }
  Signing x(static_cast<std::size_t>(K), 1);
  const double tau = tail_threshold(K);
  TailSweepReport rep;
  rep.threshold = tau;
  rep.min_exceed_fraction = 2.0;
  rep.min_max_abs = std::numeric_limits<double>::infinity();
  const std::uint64_t n_classes = std::uint64_t(1) << static_cast<unsigned>(K - 1);
  std::uint64_t gray_prev = 0;
  for (std::uint64_t cls = 0; cls < n_classes; ++cls) {
    if (cls > 0) {
      const std::uint64_t gray = cls ^ (cls >> 1);
      const int flip = std::countr_zero(gray ^ gray_prev) + 1;
      gray_prev = gray;
      x[static_cast<std::size_t>(flip)] = static_cast<std::int8_t>(-x[static_cast<std::size_t>(flip)]);
      const double xf = x[static_cast<std::size_t>(flip)] > 0 ? 2.0 : -2.0;
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < n; ++i)
        s[static_cast<std::size_t>(i)] += xf * table[static_cast<std::size_t>(i * K + flip)];
    }
    std::int64_t count = 0;
    double mx = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : count) reduction(max : mx)
    for (std::int64_t i = 0; i < n; ++i) {
      const double v = std::fabs(s[static_cast<std::size_t>(i)]);
      if (v >= tau) ++count;
      if (v > mx) mx = v;
    }
    const double frac = static_cast<double>(count) / static_cast<double>(n);
    if (frac < rep.min_exceed_fraction) {
      rep.min_exceed_fraction = frac;
      rep.worst_class = cls;
    }
    rep.min_max_abs = std::min(rep.min_max_abs, mx);
  }
  return rep;
}

namespace {

// max over the N-point equispaced grid of |b3 - sum_k x_k cos(a_k theta)|
double full_grid_max(const GapFamily& fam, const Signing& x, std::int64_t N) {
  const std::int64_t K = fam.K;
  double b3 = 0.0;
  for (std::int64_t k = 0; k < K; ++k) b3 += x[static_cast<std::size_t>(k)] > 0 ? 1.0 : -1.0;
  const double w = 2.0 * std::numbers::pi / static_cast<double>(N);
  return argmax_blocked(std::int64_t(0), N, [&](std::int64_t i) {
           double acc = 0.0;
           for (std::int64_t k = 0; k < K; ++k) {
             const std::uint64_t r =
                 mulmod_u64(static_cast<std::uint64_t>(fam.gens[static_cast<std::size_t>(k)]),
                            static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(N));
             const double c = std::cos(w * static_cast<double>(r));
             acc += x[static_cast<std::size_t>(k)] > 0 ? c : -c;
           }
           return std::fabs(b3 - acc);
         }).value;
}

}  // namespace

MinMaxResult min_max_over_signings(const GapFamily& fam, std::int64_t grid_per_period) {
  if (fam.K < 1 || fam.K > 20) fail(Errc::infeasible, "exhaustive scan supports K <= 20");
  std::int64_t gpp = std::max<std::int64_t>(grid_per_period, 8);
  gpp += (4 - gpp % 4) % 4;
  const std::int64_t aK = fam.gens.back();
  const std::int64_t n_full = gpp * aK;
  const std::int64_t n_c = 4 * aK;
  if (n_full > (std::int64_t(1) << 27) || n_c * fam.K > (std::int64_t(1) << 26))
    fail(Errc::infeasible, "family oscillates too fast for an exhaustive scan");
  const std::int64_t K = fam.K;

  std::vector<double> table(static_cast<std::size_t>(n_c * K));
  const double wc = 2.0 * std::numbers::pi / static_cast<double>(n_c);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n_c; ++i)
    for (std::int64_t k = 0; k < K; ++k) {
      const std::uint64_t r =
          mulmod_u64(static_cast<std::uint64_t>(fam.gens[static_cast<std::size_t>(k)]),
                     static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(n_c));
      table[static_cast<std::size_t>(i * K + k)] = std::cos(wc * static_cast<double>(r));
    }

  const std::uint64_t n_classes = std::uint64_t(1) << static_cast<unsigned>(K - 1);
  std::vector<double> coarse_max(n_classes);
  std::vector<double> s(static_cast<std::size_t>(n_c), 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n_c; ++i) {
    double acc = 0.0;
    for (std::int64_t k = 0; k < K; ++k) acc += table[static_cast<std::size_t>(i * K + k)];
    s[static_cast<std::size_t>(i)] = acc;
  }
  Signing x(static_cast<std::size_t>(K), 1);
  double b3 = static_cast<double>(K);
  std::uint64_t gray_prev = 0;
  // class id -> signing is recoverable by replaying the same Gray walk
  for (std::uint64_t cls = 0; cls < n_classes; ++cls) {
    if (cls > 0) {
      const std::uint64_t gray = cls ^ (cls >> 1);
      const int flip = std::countr_zero(gray ^ gray_prev) + 1;
      gray_prev = gray;
      x[static_cast<std::size_t>(flip)] = static_cast<std::int8_t>(-x[static_cast<std::size_t>(flip)]);
      const double xf = x[static_cast<std::size_t>(flip)] > 0 ? 2.0 : -2.0;
      b3 += xf;
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < n_c; ++i)
        s[static_cast<std::size_t>(i)] += xf * table[static_cast<std::size_t>(i * K + flip)];
    }
    double mx = 0.0;
#pragma omp parallel for schedule(static) reduction(max : mx)
    for (std::int64_t i = 0; i < n_c; ++i) {
      const double v = std::fabs(b3 - s[static_cast<std::size_t>(i)]);
      if (v > mx) mx = v;
    }
    coarse_max[cls] = mx;
  }

  auto class_signing = [&](std::uint64_t cls) {
    Signing sig(static_cast<std::size_t>(K), 1);
    const std::uint64_t gray = cls ^ (cls >> 1);
    for (std::int64_t k = 1; k < K; ++k)
      if ((gray >> static_cast<unsigned>(k - 1)) & 1) sig[static_cast<std::size_t>(k)] = -1;
    return sig;
  };

  std::uint64_t seed_cls = 0;
  for (std::uint64_t cls = 1; cls < n_classes; ++cls)
    if (coarse_max[cls] < coarse_max[seed_cls]) seed_cls = cls;

  MinMaxResult res;
  res.witness = class_signing(seed_cls);
  res.min_max = full_grid_max(fam, res.witness, n_full);
  res.classes_scanned_full = 1;
  for (std::uint64_t cls = 0; cls < n_classes; ++cls) {
    if (cls == seed_cls || coarse_max[cls] > res.min_max) continue;
    const Signing sig = class_signing(cls);
    const double v = full_grid_max(fam, sig, n_full);
    ++res.classes_scanned_full;
    if (v < res.min_max) {
      res.min_max = v;
      res.witness = sig;
    }
  }
  const double refined = full_grid_max(fam, res.witness, 2 * n_full);
  res.stability_rel = std::fabs(refined - res.min_max) / std::max(res.min_max, 1e-300);
  double wsum = 0.0;
  for (std::int8_t v : res.witness) wsum += v > 0 ? 1.0 : -1.0;
  res.witness_abs_sum = std::fabs(wsum);
  return res;
}

}  // namespace circsplit
