#include "circsplit/ap_partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "circsplit/errors.hpp"
#include "circsplit/kernels.hpp"
#include "circsplit/rng.hpp"
#include "circsplit/util.hpp"

namespace circsplit {

namespace {

std::int64_t ceil_log2(std::int64_t k) {
  std::int64_t v = 0;
  std::int64_t p = 1;
  while (p < k) {
    p *= 2;
    ++v;
  }
  return v;
}

double log2d(std::int64_t k) { return std::log2(static_cast<double>(k)); }

}  // namespace

std::vector<std::int64_t> progression_residues(const Progression& p) {
  if (p.n < 3 || p.k < 1 || p.b < 1 || p.a < 0)
    fail(Errc::invalid_spec, "progression needs n >= 3, k >= 1, b >= 1, a >= 0");
  std::vector<std::int64_t> res;
  res.reserve(static_cast<std::size_t>(p.k));
  for (std::int64_t s = 1; s <= p.k; ++s) {
    std::int64_t r = (p.a + s * p.b) % p.n;
    if (r == 0)
      fail(Errc::invalid_spec, "progression term at s = " + std::to_string(s) + " is 0 mod n");
    if (2 * r == p.n)
      fail(Errc::invalid_spec, "progression term at s = " + std::to_string(s) + " equals n/2");
    if (2 * r > p.n) r = p.n - r;
    res.push_back(r);
  }
  std::vector<std::int64_t> sorted = res;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(Errc::invalid_spec, "progression terms collide after folding");
  std::int64_t g = p.n;
  for (std::int64_t r : sorted) g = gcd_i64(g, r);
  if (g != 1) fail(Errc::disconnected_graph, "progression does not generate the group");
  return res;
}

CirculantGraph progression_graph(const Progression& p) {
  return canonical_circulant(p.n, progression_residues(p));
}

PartitionConfig PartitionConfig::resolved(std::int64_t k) const {
  if (k < 1) fail(Errc::invalid_spec, "term count must be positive");
  PartitionConfig c = *this;
  if (c.L == 0) c.L = k >= 2 ? static_cast<std::int64_t>(std::ceil(38.0 * log2d(k))) : 1;
  if (c.delta == 0.0) c.delta = 1.0 / static_cast<double>(std::max<std::int64_t>(k, 3));
  if (c.stop_threshold == 0) c.stop_threshold = std::max<std::int64_t>(2, ceil_log2(k));
  if (c.candidates == 0) {
    if (k <= 12)
      c.candidates = 32;
    else if (k <= 16)
      c.candidates = 16;
    else if (k <= 64)
      c.candidates = 8;
    else if (k <= 128)
      c.candidates = 6;
    else
      c.candidates = 8;
  }
  return c;
}

PartitionConfig PartitionConfig::asymptotic_profile(std::int64_t k) {
  PartitionConfig c = PartitionConfig{}.resolved(k);
  c.stop_threshold = 32 * (c.L + 1);
  c.candidates = 1;
  c.walk_step = 0.0;
  return c;
}

AngleInfo classify_theta(double theta, std::int64_t b, std::int64_t k, double alpha) {
  if (!(theta > 0.0 && theta < 2.0 * std::numbers::pi))
    fail(Errc::invalid_spec, "angle must lie in (0, 2*pi)");
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  long double r = std::fmod(static_cast<long double>(b) * static_cast<long double>(theta), two_pi);
  if (r < 0) r += two_pi;
  if (r > std::numbers::pi_v<long double>) r -= two_pi;
  AngleInfo info;
  info.residue = static_cast<double>(r);
  info.band = std::fabs(info.residue) <= alpha / static_cast<double>(k) ? AngleBand::near_zero
                                                                        : AngleBand::bulk;
  return info;
}

AngleInfo classify_theta_rational(std::int64_t j, std::int64_t n, std::int64_t b, std::int64_t k,
                                  double alpha) {
  if (n < 1 || j < 0) fail(Errc::invalid_spec, "need n >= 1 and j >= 0");
  const std::uint64_t r = mulmod_u64(static_cast<std::uint64_t>(b % n),
                                     static_cast<std::uint64_t>(j % n),
                                     static_cast<std::uint64_t>(n));
  AngleInfo info;
  const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
  if (2 * r > static_cast<std::uint64_t>(n))
    info.residue = -w * static_cast<double>(static_cast<std::uint64_t>(n) - r);
  else
    info.residue = w * static_cast<double>(r);
  info.band = std::fabs(info.residue) <= alpha / static_cast<double>(k) ? AngleBand::near_zero
                                                                        : AngleBand::bulk;
  return info;
}

double cosine_sum_energy(std::int64_t k, double theta_hat) {
  const double half = 0.5 * theta_hat;
  const double sh = std::sin(half);
  if (std::fabs(sh) < 1e-7) {
    double c = 0.0, s = 0.0;
    for (std::int64_t q = 1; q <= k; ++q) {
      c += std::cos(static_cast<double>(q) * theta_hat);
      s += std::sin(static_cast<double>(q) * theta_hat);
    }
    return c * c + s * s;
  }
  const double t = std::sin(static_cast<double>(k) * half) / sh;
  return t * t;
}

ConstraintSystem build_constraint_system(std::int64_t k, std::int64_t L) {
  if (k < 2) fail(Errc::invalid_spec, "constraint family needs k >= 2");
  if (L < 0) fail(Errc::invalid_spec, "monomial degree cap must be nonnegative");
  ConstraintSystem sys;
  sys.dim = k;
  const std::int64_t m = 14 * k + L + 1;
  sys.vectors.resize(static_cast<std::size_t>(m));
  sys.thresholds.assign(static_cast<std::size_t>(m), 0.0);
  const double w = 2.0 * std::numbers::pi / (7.0 * static_cast<double>(k));
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < 7 * k; ++j) {
    const double theta = w * static_cast<double>(j);
    std::vector<double> crow(static_cast<std::size_t>(k)), srow(static_cast<std::size_t>(k));
    for (std::int64_t s = 1; s <= k; ++s) {
      crow[static_cast<std::size_t>(s - 1)] = std::cos(static_cast<double>(s) * theta);
      srow[static_cast<std::size_t>(s - 1)] = std::sin(static_cast<double>(s) * theta);
    }
    sys.vectors[static_cast<std::size_t>(j)] = std::move(crow);
    sys.vectors[static_cast<std::size_t>(7 * k + j)] = std::move(srow);
  }
#pragma omp parallel for schedule(static)
  for (std::int64_t l = 0; l <= L; ++l) {
    std::vector<double> row(static_cast<std::size_t>(k));
    for (std::int64_t s = 1; s <= k; ++s)
      row[static_cast<std::size_t>(s - 1)] =
          std::pow(static_cast<double>(s) / static_cast<double>(k), static_cast<double>(l));
    sys.vectors[static_cast<std::size_t>(14 * k + l)] = std::move(row);
  }
  return sys;
}

std::vector<double> threshold_schedule(std::int64_t k, std::int64_t L, std::int64_t alive) {
  if (k < 2 || L < 0 || alive < 1 || alive > k)
    fail(Errc::invalid_spec, "bad schedule arguments");
  const double a = static_cast<double>(alive);
  const double fourteen_k = 14.0 * static_cast<double>(k);
  const double budget = a / 16.0;
  const double c_trig = 7.0 * std::sqrt(std::log(fourteen_k / a));
  const double cost_trig = fourteen_k * std::exp(-c_trig * c_trig / 16.0);
  const double rem = 0.98 * budget - cost_trig;
  if (rem <= 0.0) fail(Errc::infeasible, "no threshold budget left for the monomial rows");

  std::vector<double> thr(static_cast<std::size_t>(14 * k + L + 1), c_trig);
  const double Lp1 = static_cast<double>(L + 1);
  if (Lp1 <= rem) {
    for (std::int64_t l = 0; l <= L; ++l) thr[static_cast<std::size_t>(14 * k + l)] = 0.0;
    return thr;
  }
  const std::int64_t n_low = std::min<std::int64_t>(L + 1, 10);
  const std::int64_t n_high = L + 1 - n_low;
  const double half = rem / 2.0;
  const double c_low = static_cast<double>(n_low) <= half
                           ? 0.0
                           : 4.0 * std::sqrt(std::log(static_cast<double>(n_low) / half));
  const double c_high = n_high == 0 || static_cast<double>(n_high) <= half
                            ? 0.0
                            : 4.0 * std::sqrt(std::log(static_cast<double>(n_high) / half));
  for (std::int64_t l = 0; l <= L; ++l)
    thr[static_cast<std::size_t>(14 * k + l)] = l < n_low ? c_low : c_high;
  return thr;
}

std::pair<double, bool> lambda_condition_check(const Signing& x, std::int64_t k,
                                               double budget_lambda) {
  if (static_cast<std::int64_t>(x.size()) != k)
    fail(Errc::invalid_spec, "signing length does not match k");
  const double w = 2.0 * std::numbers::pi / (7.0 * static_cast<double>(k));
  MaxLoc best = argmax_blocked(std::int64_t(0), 7 * k, [&](std::int64_t j) {
    const double theta = w * static_cast<double>(j);
    double c = 0.0, s = 0.0;
    for (std::int64_t q = 1; q <= k; ++q) {
      const double ang = static_cast<double>(q) * theta;
      const double sign = x[static_cast<std::size_t>(q - 1)] > 0 ? 1.0 : -1.0;
      c += sign * std::cos(ang);
      s += sign * std::sin(ang);
    }
    return std::max(std::fabs(c), std::fabs(s));
  });
  const double bound = budget_lambda * std::sqrt(static_cast<double>(k));
  return {best.value, best.value <= bound};
}

std::pair<double, bool> moment_condition_check(const Signing& x, std::int64_t k, std::int64_t L,
                                               double budget_moment) {
  if (static_cast<std::int64_t>(x.size()) != k)
    fail(Errc::invalid_spec, "signing length does not match k");
  MaxLoc best = argmax_blocked(std::int64_t(0), L + 1, [&](std::int64_t l) {
    double acc = 0.0;
    for (std::int64_t s = 1; s <= k; ++s) {
      const double term =
          std::pow(static_cast<double>(s) / static_cast<double>(k), static_cast<double>(l));
      acc += x[static_cast<std::size_t>(s - 1)] > 0 ? term : -term;
    }
    return std::fabs(acc);
  });
  const double bound = budget_moment * log2d(std::max<std::int64_t>(k, 2));
  return {best.value, best.value <= bound};
}

ConditionReport check_conditions(const Signing& x, std::int64_t k, std::int64_t L,
                                 double budget_lambda, double budget_moment) {
  ConditionReport rep;
  auto [lv, lp] = lambda_condition_check(x, k, budget_lambda);
  auto [mv, mp] = moment_condition_check(x, k, L, budget_moment);
  rep.lambda_max = lv;
  rep.moment_max = mv;
  rep.lambda_pass = lp;
  rep.moment_pass = mp;
  rep.budget_lambda = budget_lambda * std::sqrt(static_cast<double>(k));
  rep.budget_moment = budget_moment * log2d(std::max<std::int64_t>(k, 2));
  return rep;
}

SmallAngleParts taylor_split(const Signing& x, const Progression& p, double theta) {
  if (static_cast<std::int64_t>(x.size()) != p.k)
    fail(Errc::invalid_spec, "signing length does not match k");
  AngleInfo info = classify_theta(theta, p.b, p.k);
  if (info.band != AngleBand::near_zero)
    fail(Errc::angle_not_near_zero, "angle residue " + fmt17(info.residue) + " is in the bulk");
  SmallAngleParts parts;
  for (std::int64_t s = 1; s <= p.k; ++s) {
    const double ang = static_cast<double>(s) * info.residue;
    const double one_minus_cos = 1.0 - std::cos(ang);
    const double sine = std::sin(ang);
    const double sign = x[static_cast<std::size_t>(s - 1)] > 0 ? 1.0 : -1.0;
    parts.b1 += sign * one_minus_cos;
    parts.b2 += sign * sine;
    parts.b3 += sign;
    parts.b1p += one_minus_cos;
    parts.b2p += sine;
    parts.b3p += 1.0;
  }
  return parts;
}

PartitionResult partition_progression(const Progression& p, const PartitionConfig& cfg0,
                                      std::uint64_t seed) {
  const PartitionConfig cfg = cfg0.resolved(p.k);
  const std::vector<std::int64_t> residues = progression_residues(p);
  const CirculantGraph graph = canonical_circulant(p.n, residues);

  // Position of each progression term inside the sorted canonical generator list.
  std::vector<std::size_t> slot(residues.size());
  for (std::size_t s = 0; s < residues.size(); ++s) {
    const auto it = std::lower_bound(graph.gens.begin(), graph.gens.end(), residues[s]);
    slot[s] = static_cast<std::size_t>(it - graph.gens.begin());
  }

  const RatioMode mode =
      graph.n <= 1000000 * p.k ? RatioMode::exact : RatioMode::grid;

  if (p.k == 1) {
    PartitionResult res;
    res.signing = Signing{1};
    res.condition = check_conditions(res.signing, 1, cfg.L, cfg.budget_lambda, cfg.budget_moment);
    res.spectral = spectral_ratio(graph, res.signing, mode, cfg.grid_oversample);
    res.chosen_seed = seed;
    res.candidate_index = 0;
    return res;
  }

  const ConstraintSystem sys = build_constraint_system(p.k, cfg.L);
  const std::int64_t k = p.k;
  const std::int64_t L = cfg.L;
  ThresholdSchedule schedule = [k, L](std::int64_t alive) {
    return threshold_schedule(k, L, alive);
  };
  // Coarser than the solver default: the schedule's thresholds sit far above the
  // per-batch drift, so the walk can afford sqrt(ln) rather than 4*sqrt(ln).
  const double m_rows = static_cast<double>(14 * k + L + 1);
  const double driver_step =
      cfg.walk_step > 0.0
          ? cfg.walk_step
          : cfg.delta / std::sqrt(std::max(1.0, std::log(static_cast<double>(k) * m_rows / cfg.delta)));

  PartitionResult best;
  bool have = false;
  for (std::int64_t c = 0; c < cfg.candidates; ++c) {
    const std::uint64_t cand_seed = mix_seed(seed, 101 + static_cast<std::uint64_t>(c));
    Signing xs;
    try {
      xs = iterate_to_full_signing(k, sys.vectors, schedule, cfg.delta, cfg.stop_threshold,
                                   cand_seed, cfg.restart_cap, driver_step);
    } catch (const Error& e) {
      if (e.code() == Errc::restart_cap_exceeded) continue;  // next candidate
      throw;
    }
    Signing gx(xs.size());
    for (std::size_t s = 0; s < xs.size(); ++s) gx[slot[s]] = xs[s];

    PartitionResult cand;
    cand.signing = std::move(xs);
    cand.condition = check_conditions(cand.signing, k, L, cfg.budget_lambda, cfg.budget_moment);
    cand.spectral = spectral_ratio(graph, gx, mode, cfg.grid_oversample);
    cand.chosen_seed = cand_seed;
    cand.candidate_index = c;

    const bool better =
        !have ||
        (cand.condition.passes() && !best.condition.passes()) ||
        (cand.condition.passes() == best.condition.passes() &&
         cand.spectral.certified() < best.spectral.certified());
    if (better) {
      best = std::move(cand);
      have = true;
    }
  }
  if (!have || !best.condition.passes())
    fail(Errc::restart_cap_exceeded, "no candidate signing met the grid and moment budgets");
  return best;
}

}  // namespace circsplit
