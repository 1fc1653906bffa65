#include "circsplit/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "circsplit/errors.hpp"
#include "circsplit/rng.hpp"

namespace circsplit {

namespace {

struct WalkSetup {
  std::int64_t n = 0;
  std::int64_t m = 0;
  double delta = 0.0;
  double gamma = 0.0;
  double margin = 0.0;  // activation band, in units of the row norm
  std::int64_t steps_cap = 0;
  std::int64_t batch = 0;
};

double log_nm_over_delta(std::int64_t n, std::int64_t m, double delta) {
  const double arg = static_cast<double>(n) * static_cast<double>(std::max<std::int64_t>(m, 1)) /
                     delta;
  return std::max(1.0, std::log(arg));
}

// One walk attempt. Returns true when at least `target` of the a0 alive coordinates
// froze and the final discrepancies verify against the thresholds.
bool walk_once(const ConstraintSystem& sys, const std::vector<double>& x0,
               const std::vector<std::int64_t>& alive0, const std::vector<double>& norms,
               const WalkSetup& w, std::int64_t target, std::uint64_t seed,
               std::vector<double>& x) {
  x = x0;
  std::vector<std::int64_t> alive = alive0;
  GaussianStream gauss(seed);

  std::vector<std::size_t> active;        // row indices, ascending
  std::vector<char> is_active(static_cast<std::size_t>(w.m), 0);
  std::vector<std::vector<double>> basis;  // orthonormal, over current alive positions

  auto rebuild_basis = [&]() {
    basis.clear();
    const std::size_t a = alive.size();
    for (std::size_t j : active) {
      const std::vector<double>& row = sys.vectors[j];
      std::vector<double> v(a);
      double raw = 0.0;
      for (std::size_t p = 0; p < a; ++p) {
        v[p] = row[static_cast<std::size_t>(alive[p])];
        raw += v[p] * v[p];
      }
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& q : basis) {
          double c = 0.0;
          for (std::size_t p = 0; p < a; ++p) c += v[p] * q[p];
          for (std::size_t p = 0; p < a; ++p) v[p] -= c * q[p];
        }
      }
      double nn = 0.0;
      for (double t : v) nn += t * t;
      if (nn <= std::max(1e-18 * raw, 1e-280)) continue;  // dependent on earlier rows
      const double inv = 1.0 / std::sqrt(nn);
      for (double& t : v) t *= inv;
      basis.push_back(std::move(v));
    }
  };

  // Rows already inside the activation band at the start (zero thresholds included)
  // are projected out from the first step.
  for (std::size_t j = 0; j < static_cast<std::size_t>(w.m); ++j) {
    if (norms[j] <= 0.0) continue;  // zero row over the alive set: trivially satisfied
    if (sys.thresholds[j] <= w.margin) {
      active.push_back(j);
      is_active[j] = 1;
    }
  }
  rebuild_basis();

  std::vector<double> g;
  std::vector<double> d(static_cast<std::size_t>(w.m), 0.0);
  std::int64_t frozen = 0;
  std::int64_t stall = 0;

  auto recompute_discrepancies = [&]() {
#pragma omp parallel for schedule(static) if (w.m >= 64)
    for (std::int64_t j = 0; j < w.m; ++j) {
      const std::vector<double>& row = sys.vectors[static_cast<std::size_t>(j)];
      double acc = 0.0;
      for (std::int64_t i : alive0) {
        const std::size_t ii = static_cast<std::size_t>(i);
        acc += row[ii] * (x[ii] - x0[ii]);
      }
      d[static_cast<std::size_t>(j)] = acc;
    }
  };

  for (std::int64_t step = 0; step < w.steps_cap && frozen < target; ++step) {
    const std::size_t a = alive.size();
    g.resize(a);
    for (std::size_t p = 0; p < a; ++p) g[p] = gauss.next();
    for (const auto& q : basis) {
      double c = 0.0;
      for (std::size_t p = 0; p < a; ++p) c += g[p] * q[p];
      for (std::size_t p = 0; p < a; ++p) g[p] -= c * q[p];
    }

    double gn = 0.0;
    for (std::size_t p = 0; p < a; ++p) gn += g[p] * g[p];
    if (gn <= 1e-12 * static_cast<double>(a)) {
      if (++stall >= 64) return false;  // no movable subspace left
      continue;
    }
    stall = 0;

    bool dirty = false;
    for (std::size_t p = 0; p < alive.size();) {
      const std::size_t i = static_cast<std::size_t>(alive[p]);
      x[i] += w.gamma * g[p];
      if (std::fabs(x[i]) >= 1.0 - w.delta) {
        x[i] = std::clamp(x[i], -1.0, 1.0);
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(p));
        g.erase(g.begin() + static_cast<std::ptrdiff_t>(p));
        ++frozen;
        dirty = true;
      } else {
        ++p;
      }
    }

    const bool at_batch = (step + 1) % w.batch == 0;
    if (at_batch) {
      recompute_discrepancies();
      for (std::size_t j = 0; j < static_cast<std::size_t>(w.m); ++j) {
        if (norms[j] <= 0.0 || is_active[j]) continue;
        const double band = (sys.thresholds[j] - w.margin) * norms[j];
        if (std::fabs(d[j]) >= band) {
          active.insert(std::lower_bound(active.begin(), active.end(), j), j);
          is_active[j] = 1;
          dirty = true;
        }
        if (std::fabs(d[j]) > sys.thresholds[j] * norms[j] + 1e-7 * (1.0 + norms[j]))
          return false;  // drift escaped the activation band
      }
    }
    if (dirty) rebuild_basis();
  }

  if (frozen < target) return false;

  // Independent verification of the contract before reporting success.
  recompute_discrepancies();
  for (std::size_t j = 0; j < static_cast<std::size_t>(w.m); ++j) {
    if (std::fabs(d[j]) > sys.thresholds[j] * norms[j] + 1e-7 * (1.0 + norms[j])) return false;
  }
  return true;
}

}  // namespace

bool validate_thresholds(const std::vector<double>& thresholds, std::int64_t n_alive) {
  double total = 0.0;
  for (double c : thresholds) total += std::exp(-c * c / 16.0);
  return total <= static_cast<double>(n_alive) / 16.0;
}

std::int64_t default_restart_cap(std::int64_t n, std::int64_t m) {
  const double nm = static_cast<double>(std::max<std::int64_t>(n, 1)) *
                    static_cast<double>(std::max<std::int64_t>(m, 1));
  return 64 * static_cast<std::int64_t>(std::ceil(std::log(std::max(nm, 2.0))));
}

std::vector<double> partial_color(const ConstraintSystem& sys, const std::vector<double>& x0,
                                  const WalkOptions& opts) {
  const std::int64_t n = sys.dim;
  const std::int64_t m = static_cast<std::int64_t>(sys.vectors.size());
  if (n <= 0) fail(Errc::invalid_spec, "constraint system dimension must be positive");
  if (static_cast<std::int64_t>(x0.size()) != n)
    fail(Errc::invalid_spec, "start vector length does not match system dimension");
  if (static_cast<std::int64_t>(sys.thresholds.size()) != m)
    fail(Errc::invalid_thresholds, "threshold count does not match constraint count");
  for (double c : sys.thresholds)
    if (!(c >= 0.0) || !std::isfinite(c))
      fail(Errc::invalid_thresholds, "thresholds must be finite and nonnegative");
  for (const auto& row : sys.vectors)
    if (static_cast<std::int64_t>(row.size()) != n)
      fail(Errc::invalid_spec, "constraint vector length does not match dimension");
  for (double v : x0)
    if (!(std::fabs(v) <= 1.0 + 1e-12)) fail(Errc::invalid_spec, "start vector leaves [-1, 1]");
  if (!(opts.delta > 0.0 && opts.delta < 0.5))
    fail(Errc::invalid_spec, "delta must lie in (0, 1/2)");

  std::vector<std::int64_t> alive0;
  for (std::int64_t i = 0; i < n; ++i)
    if (std::fabs(x0[static_cast<std::size_t>(i)]) < 1.0 - opts.delta) alive0.push_back(i);
  if (alive0.empty()) return x0;

  std::vector<double> norms(static_cast<std::size_t>(m), 0.0);
  for (std::int64_t j = 0; j < m; ++j) {
    double nn = 0.0;
    for (std::int64_t i : alive0) {
      const double v = sys.vectors[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      nn += v * v;
    }
    norms[static_cast<std::size_t>(j)] = std::sqrt(nn);
  }

  WalkSetup w;
  w.n = n;
  w.m = m;
  w.delta = opts.delta;
  const double lg = log_nm_over_delta(n, m, opts.delta);
  w.gamma = opts.step_override > 0.0 ? opts.step_override
                                     : opts.delta / (4.0 * std::sqrt(lg));
  w.batch = std::max<std::int64_t>(1, opts.check_interval);
  // The activation band must stay below the smallest positive threshold, or the
  // initial scan projects out every row and leaves no movable subspace. Shrink
  // the check interval until the between-check drift allowance clears it.
  double min_pos = 0.0;
  for (double c : sys.thresholds)
    if (c > 0.0 && (min_pos == 0.0 || c < min_pos)) min_pos = c;
  if (min_pos > 0.0) {
    const double cap_b = 0.5 * min_pos / (8.0 * w.gamma);
    const double bmax = cap_b * cap_b;
    if (bmax < static_cast<double>(w.batch))
      w.batch = std::max<std::int64_t>(1, static_cast<std::int64_t>(bmax));
  }
  w.margin = std::max(w.gamma * std::sqrt(lg),
                      8.0 * w.gamma * std::sqrt(static_cast<double>(w.batch)));
  w.steps_cap = static_cast<std::int64_t>(std::ceil(16.0 / (w.gamma * w.gamma)));

  const std::int64_t target =
      (static_cast<std::int64_t>(alive0.size()) + 1) / 2;
  const std::int64_t cap = opts.restart_cap > 0 ? opts.restart_cap : default_restart_cap(n, m);

  std::vector<double> x;
  for (std::int64_t attempt = 0; attempt < cap; ++attempt) {
    if (walk_once(sys, x0, alive0, norms, w, target, mix_seed(opts.seed, static_cast<std::uint64_t>(attempt)), x))
      return x;
  }
  fail(Errc::restart_cap_exceeded,
       "no successful partial coloring in " + std::to_string(cap) + " attempts");
}

bool verify_partial_coloring(const ConstraintSystem& sys, const std::vector<double>& x0,
                             const std::vector<double>& x, double delta) {
  const std::size_t n = static_cast<std::size_t>(sys.dim);
  if (x0.size() != n || x.size() != n) return false;
  std::vector<std::size_t> alive0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(x[i]) > 1.0 + 1e-12) return false;
    if (std::fabs(x0[i]) < 1.0 - delta)
      alive0.push_back(i);
    else if (x[i] != x0[i])
      return false;  // frozen coordinates must come back untouched
  }
  std::size_t settled = 0;
  for (std::size_t i : alive0)
    if (std::fabs(x[i]) >= 1.0 - delta) ++settled;
  if (2 * settled < alive0.size()) return false;

  for (std::size_t j = 0; j < sys.vectors.size(); ++j) {
    double acc = 0.0, nn = 0.0;
    for (std::size_t i : alive0) {
      const double v = sys.vectors[j][i];
      acc += v * (x[i] - x0[i]);
      nn += v * v;
    }
    const double norm = std::sqrt(nn);
    if (std::fabs(acc) > sys.thresholds[j] * norm + 1e-7 * (1.0 + norm)) return false;
  }
  return true;
}

Signing iterate_to_full_signing(std::int64_t dim, const std::vector<std::vector<double>>& vectors,
                                const ThresholdSchedule& schedule, double delta,
                                std::int64_t stop_threshold, std::uint64_t seed,
                                std::int64_t restart_cap, double step_override) {
  if (dim <= 0) fail(Errc::invalid_spec, "dimension must be positive");
  if (stop_threshold < 1) fail(Errc::invalid_spec, "stop threshold must be positive");
  const std::int64_t m = static_cast<std::int64_t>(vectors.size());

  ConstraintSystem sys;
  sys.dim = dim;
  sys.vectors = vectors;
  std::vector<double> x(static_cast<std::size_t>(dim), 0.0);

  for (std::int64_t iter = 0; iter < 64; ++iter) {
    std::int64_t alive = 0;
    for (double v : x)
      if (std::fabs(v) < 1.0 - delta) ++alive;
    if (alive <= stop_threshold) break;

    sys.thresholds = schedule(alive);
    if (static_cast<std::int64_t>(sys.thresholds.size()) != m)
      fail(Errc::invalid_thresholds, "schedule returned wrong threshold count");
    if (!validate_thresholds(sys.thresholds, alive))
      fail(Errc::invalid_thresholds,
           "schedule violates the exponential budget at alive count " + std::to_string(alive));

    WalkOptions wo;
    wo.delta = delta;
    wo.restart_cap = restart_cap;
    wo.step_override = step_override;
    wo.seed = mix_seed(seed, 7000 + static_cast<std::uint64_t>(iter));
    x = partial_color(sys, x, wo);
  }

  Signing out(static_cast<std::size_t>(dim), 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (std::fabs(x[i]) < 1.0 - delta)
      out[i] = 1;  // stragglers signed arbitrarily
    else
      out[i] = x[i] >= 0.0 ? 1 : -1;
  }
  return out;
}

}  // namespace circsplit
