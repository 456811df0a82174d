// Compares the OpenMP kernels against their serial references.

#include <chrono>
#include <cstdio>

#include "svx/adversary.hpp"
#include "svx/binary_sv.hpp"
#include "svx/extractor.hpp"
#include "svx/instances.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

template <class F>
double time_s(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

void row(const char* name, double serial, double parallel) {
  std::printf("%-34s %9.3f s %9.3f s %7.2fx\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("%-34s %11s %11s %9s\n", "kernel", "serial", "parallel",
              "speedup");

  {
    svx::SplitMix64 rng(7);
    svx::SourceSpec spec = svx::random_spec(rng, 4, 3);
    svx::ExtractorTable t;
    t.alphabet_size = 4;
    t.depth = 10;  // 4^10 = ~1M leaves
    t.labels.resize(svx::upow(4, 10));
    for (std::size_t i = 0; i < t.labels.size(); ++i) t.labels[i] = i % 3 == 0;
    svx::AlphaBetaT<double> r1, r2;
    double ts = time_s([&] { r1 = svx::alpha_beta_serial<double>(spec, t); });
    double tp = time_s([&] { r2 = svx::alpha_beta<double>(spec, t); });
    row("alpha_beta DP (4^10 leaves)", ts, tp);
    if (r1.alpha != r2.alpha || r1.beta != r2.beta) {
      std::printf("  MISMATCH!\n");
      return 1;
    }
  }

  {
    svx::SourceSpec spec = svx::binary_sv_spec(1.0 / 3.0);
    svx::PhiSetT<double> p1, p2;
    double ts = time_s([&] { p1 = svx::phi_set_serial<double>(spec, 4); });
    double tp = time_s([&] { p2 = svx::phi_set<double>(spec, 4); });
    row("phi_set (2^16 subsets, n=4)", ts, tp);
    if (p1.points != p2.points) {
      std::printf("  MISMATCH!\n");
      return 1;
    }
  }

  {
    svx::SourceSpec spec;
    spec.alphabet_size = 3;
    spec.dice = {svx::Distribution{{0.5, 0.25, 0.25}},
                 svx::Distribution{{0.25, 0.5, 0.25}}};
    auto psi = svx::find_psi(spec);
    svx::MartingaleConfig mc{50.0, 1000000};
    svx::AdaptiveSignStrategy strat(spec, psi->values);
    svx::BiasStats s1, s2;
    double ts = time_s(
        [&] { s1 = svx::simulate_bias_serial(spec, *psi, mc, strat, 20000, 1); });
    double tp = time_s(
        [&] { s2 = svx::simulate_bias(spec, *psi, mc, strat, 20000, 1); });
    row("martingale Monte Carlo (2e4)", ts, tp);
    if (s1.freq_one != s2.freq_one || s1.mean_y_tau != s2.mean_y_tau) {
      std::printf("  MISMATCH!\n");
      return 1;
    }
  }

  {
    std::vector<svx::CurvePoint> c1, c2;
    double ts = time_s([&] { c1 = svx::f_delta_curve_serial(1.0 / 3.0, 20); });
    double tp = time_s([&] { c2 = svx::f_delta_curve(1.0 / 3.0, 20); });
    row("f_delta_curve (2^20 strings)", ts, tp);
    if (c1.size() != c2.size()) {
      std::printf("  MISMATCH!\n");
      return 1;
    }
  }

  std::printf("all kernels agree with their serial references\n");
  return 0;
}
