#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numbers>
#include <vector>

#include "circsplit/circulant.hpp"
#include "circsplit/kernels.hpp"
#include "circsplit/lacunary.hpp"
#include "circsplit/products.hpp"
#include "circsplit/resistance.hpp"
#include "circsplit/spectral.hpp"
#include "circsplit/util.hpp"

using namespace circsplit;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void row(const char* name, double serial_ms, double parallel_ms, double diff) {
  std::printf("%-52s %9.1f %9.1f %7.2fx %11.3e\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, diff);
}

}  // namespace

int main() {
  const std::int64_t n = next_prime_above(3000000);
  const auto g = canonical_circulant(n, {1, 2, 3, 4, 5, 6});
  const Signing x = {1, -1, 1, 1, -1, 1};

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-52s %9s %9s %8s %11s\n", "benchmark", "serial", "omp", "speedup", "max_diff");
  std::printf("%-52s %9s %9s %8s %11s\n", "", "(ms)", "(ms)", "", "");

  {
    double t0 = now_ms();
    const auto a = laplacian_eigenvalues(g, false);
    double t1 = now_ms();
    const auto b = laplacian_eigenvalues(g, true);
    double t2 = now_ms();
    double diff = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::fabs(a[i] - b[i]));
    row("eigenvalue sweep (n=3000017, k=6)", t1 - t0, t2 - t1, diff);
  }

  {
    double t0 = now_ms();
    const auto a = spectral_ratio(g, x, RatioMode::exact, 32, 4096, false);
    double t1 = now_ms();
    const auto b = spectral_ratio(g, x, RatioMode::exact, 32, 4096, true);
    double t2 = now_ms();
    const double diff = std::fabs(a.max_ratio - b.max_ratio) +
                        (a.argmax_theta == b.argmax_theta ? 0.0 : 1.0);
    row("exact ratio argmax (n=3000017, k=6)", t1 - t0, t2 - t1, diff);
  }

  {
    double t0 = now_ms();
    const double a = edge_effective_resistance(g, 3, false);
    double t1 = now_ms();
    const double b = edge_effective_resistance(g, 3, true);
    double t2 = now_ms();
    row("effective resistance sum (n=3000017, k=6)", t1 - t0, t2 - t1, std::fabs(a - b));
  }

  {
    const auto fam = make_gap_family(8, standard_gap(8));
    const Signing ones(8, 1);
    const std::int64_t N = 32 * 4 * fam.gens.back();
    const double w = 2.0 * std::numbers::pi / static_cast<double>(N);
    double t0 = now_ms();
    double naive = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
      double s = 0.0;
      for (std::int64_t a : fam.gens) s += std::cos(w * static_cast<double>(a * i % N));
      const double s2 = s * s;
      naive += s2 * s2;
    }
    naive /= static_cast<double>(N);
    double t1 = now_ms();
    const double lib = cosine_power_moment_quadrature(fam, ones, 4, 1e-6);
    double t2 = now_ms();
    row("cosine moment mean (K=8, p=4)", t1 - t0, t2 - t1, std::fabs(naive - lib));
  }

  {
    ProductSpec spec;
    spec.kind = ProductKind::cartesian;
    spec.n = 17;
    spec.ks = {2, 2, 2, 2, 2};
    ProductSigning sg;
    for (int h = 0; h < 5; ++h) sg.per_factor.push_back(Signing{1, -1});
    double t0 = now_ms();
    const auto a = product_spectral_ratio(spec, sg, std::int64_t(1) << 26, false);
    double t1 = now_ms();
    const auto b = product_spectral_ratio(spec, sg, std::int64_t(1) << 26, true);
    double t2 = now_ms();
    row("product enumeration (17^5 points)", t1 - t0, t2 - t1,
        std::fabs(a.max_ratio - b.max_ratio));
  }

  return 0;
}
