#include "circsplit/resistance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "circsplit/errors.hpp"
#include "circsplit/kernels.hpp"
#include "circsplit/util.hpp"

namespace circsplit {

namespace {

constexpr double kDenFloor = 1e-12;

// Integrand values for every generator at one angle: h_a = (1 - cos(a*t)) / den with
// the removable singularity filled by a^2 / sum a_s^2.
void integrand_all(const std::vector<std::int64_t>& gens, double theta, double sum_sq,
                   std::vector<double>& out) {
  double den = 0.0;
  const std::size_t K = gens.size();
  for (std::size_t s = 0; s < K; ++s) {
    out[s] = 1.0 - std::cos(static_cast<double>(gens[s]) * theta);
    den += out[s];
  }
  if (den < kDenFloor) {
    for (std::size_t s = 0; s < K; ++s)
      out[s] = static_cast<double>(gens[s]) * static_cast<double>(gens[s]) / sum_sq;
  } else {
    for (std::size_t s = 0; s < K; ++s) out[s] /= den;
  }
}

// Mean of all K integrands over N equispaced angles (theta = 2*pi*i/N, i = 0..N-1).
std::vector<double> equispaced_means(const std::vector<std::int64_t>& gens, std::int64_t N,
                                     double sum_sq) {
  const std::size_t K = gens.size();
  const std::int64_t nblocks = (N + kBlock - 1) / kBlock;
  std::vector<double> partials(static_cast<std::size_t>(nblocks) * K, 0.0);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(N);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(lo + kBlock, N);
    std::vector<double> h(K), acc(K, 0.0), comp(K, 0.0);
    for (std::int64_t i = lo; i < hi; ++i) {
      integrand_all(gens, w * static_cast<double>(i), sum_sq, h);
      for (std::size_t s = 0; s < K; ++s) {
        const double y = h[s] - comp[s];
        const double t = acc[s] + y;
        comp[s] = (t - acc[s]) - y;
        acc[s] = t;
      }
    }
    for (std::size_t s = 0; s < K; ++s) partials[static_cast<std::size_t>(b) * K + s] = acc[s];
  }
  std::vector<double> means(K, 0.0);
  for (std::size_t s = 0; s < K; ++s) {
    double acc = 0.0, comp = 0.0;
    for (std::int64_t b = 0; b < nblocks; ++b) {
      const double y = partials[static_cast<std::size_t>(b) * K + s] - comp;
      const double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    means[s] = acc / static_cast<double>(N);
  }
  return means;
}

// Equidistributed-lattice window mean: angles 2*pi*((i*P) mod Q)/Q for i in
// [offset, offset + nodes). Residues a*m mod Q stay exact in 128-bit arithmetic.
std::vector<double> lattice_window_means(const std::vector<std::int64_t>& gens,
                                         std::int64_t offset, std::int64_t nodes, double sum_sq) {
  constexpr std::uint64_t Q = (std::uint64_t(1) << 31) - 1;
  constexpr std::uint64_t P = 1327217884;  // floor(golden ratio fraction * Q)
  const std::size_t K = gens.size();
  const std::int64_t nblocks = (nodes + kBlock - 1) / kBlock;
  std::vector<double> partials(static_cast<std::size_t>(nblocks) * K, 0.0);
  const double w = 2.0 * std::numbers::pi / static_cast<double>(Q);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < nblocks; ++b) {
    const std::int64_t lo = b * kBlock;
    const std::int64_t hi = std::min(lo + kBlock, nodes);
    std::vector<double> acc(K, 0.0), comp(K, 0.0), h(K);
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::uint64_t m = mulmod_u64(static_cast<std::uint64_t>(offset + i), P, Q);
      double den = 0.0;
      for (std::size_t s = 0; s < K; ++s) {
        const std::uint64_t r = mulmod_u64(static_cast<std::uint64_t>(gens[s]), m, Q);
        h[s] = 1.0 - std::cos(w * static_cast<double>(r));
        den += h[s];
      }
      if (den < kDenFloor) {
        for (std::size_t s = 0; s < K; ++s)
          h[s] = static_cast<double>(gens[s]) * static_cast<double>(gens[s]) / sum_sq;
      } else {
        for (std::size_t s = 0; s < K; ++s) h[s] /= den;
      }
      for (std::size_t s = 0; s < K; ++s) {
        const double y = h[s] - comp[s];
        const double t = acc[s] + y;
        comp[s] = (t - acc[s]) - y;
        acc[s] = t;
      }
    }
    for (std::size_t s = 0; s < K; ++s) partials[static_cast<std::size_t>(b) * K + s] = acc[s];
  }
  std::vector<double> means(K, 0.0);
  for (std::size_t s = 0; s < K; ++s) {
    double acc = 0.0, comp = 0.0;
    for (std::int64_t b = 0; b < nblocks; ++b) {
      const double y = partials[static_cast<std::size_t>(b) * K + s] - comp;
      const double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    means[s] = acc / static_cast<double>(nodes);
  }
  return means;
}

void check_family(const std::vector<std::int64_t>& gens) {
  if (gens.empty()) fail(Errc::empty_generators, "generator list is empty");
  std::int64_t g = 0;
  for (std::int64_t a : gens) {
    if (a <= 0) fail(Errc::invalid_spec, "generators must be positive");
    g = gcd_i64(g, a);
  }
  if (g != 1) fail(Errc::disconnected_graph, "generator gcd is " + std::to_string(g));
}

}  // namespace

double edge_effective_resistance(const CirculantGraph& g, std::int64_t a, bool parallel) {
  bool found = false;
  for (std::int64_t v : g.gens) found = found || v == a;
  if (!found)
    fail(Errc::generator_not_in_graph, "generator " + std::to_string(a) + " not in graph");
  const double w = 2.0 * std::numbers::pi / static_cast<double>(g.n);
  const double total = sum_blocked(
      std::int64_t(1), g.n,
      [&](std::int64_t j) {
        const double theta = w * static_cast<double>(j);
        double den = 0.0;
        for (std::int64_t s : g.gens) den += 1.0 - std::cos(static_cast<double>(s) * theta);
        return (1.0 - std::cos(static_cast<double>(a) * theta)) / den;
      },
      parallel);
  return total / static_cast<double>(g.n);
}

double max_edge_effective_resistance(const CirculantGraph& g, bool parallel) {
  double best = 0.0;
  for (std::int64_t a : g.gens) best = std::max(best, edge_effective_resistance(g, a, parallel));
  return best;
}

std::vector<double> limit_resistance_all(const std::vector<std::int64_t>& gens, double quad_tol,
                                         const QuadratureOptions& opts) {
  check_family(gens);
  if (quad_tol <= 0.0) fail(Errc::invalid_spec, "quadrature tolerance must be positive");
  double sum_sq = 0.0;
  for (std::int64_t a : gens) sum_sq += static_cast<double>(a) * static_cast<double>(a);
  const std::int64_t a_max = *std::max_element(gens.begin(), gens.end());

  if (8 * a_max <= opts.max_nodes) {
    std::int64_t N = 1024;
    while (N < 2 * a_max) N *= 2;
    std::vector<double> prev = equispaced_means(gens, N, sum_sq);
    while (true) {
      N *= 2;
      std::vector<double> cur = equispaced_means(gens, N, sum_sq);
      double diff = 0.0;
      for (std::size_t s = 0; s < gens.size(); ++s)
        diff = std::max(diff, std::fabs(cur[s] - prev[s]));
      if (diff <= quad_tol) return cur;
      if (2 * N > opts.max_nodes)
        fail(Errc::quadrature_nonconvergence,
             "equispaced means still differ by " + fmt17(diff) + " at " + std::to_string(N) +
                 " nodes");
      prev = std::move(cur);
    }
  }

  // Generators too fast for dense coverage: three disjoint lattice windows must agree.
  const std::int64_t M = opts.lattice_nodes;
  std::vector<double> w0 = lattice_window_means(gens, 1, M, sum_sq);
  std::vector<double> w1 = lattice_window_means(gens, 1 + M, M, sum_sq);
  std::vector<double> w2 = lattice_window_means(gens, 1 + 2 * M, M, sum_sq);
  const double stab_tol = std::max(quad_tol * 64.0, 1e-4);
  std::vector<double> means(gens.size());
  for (std::size_t s = 0; s < gens.size(); ++s) {
    const double lo = std::min({w0[s], w1[s], w2[s]});
    const double hi = std::max({w0[s], w1[s], w2[s]});
    if (hi - lo > stab_tol)
      fail(Errc::quadrature_nonconvergence,
           "lattice windows disagree by " + fmt17(hi - lo) + " for generator " +
               std::to_string(gens[s]));
    means[s] = (w0[s] + w1[s] + w2[s]) / 3.0;
  }
  return means;
}

double limit_effective_resistance(const std::vector<std::int64_t>& gens, std::int64_t a,
                                  double quad_tol, const QuadratureOptions& opts) {
  std::size_t idx = gens.size();
  for (std::size_t s = 0; s < gens.size(); ++s)
    if (gens[s] == a) idx = s;
  if (idx == gens.size())
    fail(Errc::generator_not_in_graph, "generator " + std::to_string(a) + " not in family");
  return limit_resistance_all(gens, quad_tol, opts)[idx];
}

double max_limit_resistance(const std::vector<std::int64_t>& gens, double quad_tol,
                            const QuadratureOptions& opts) {
  const std::vector<double> all = limit_resistance_all(gens, quad_tol, opts);
  double best = 0.0;
  for (double v : all) best = std::max(best, v);
  return best;
}

}  // namespace circsplit
