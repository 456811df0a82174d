#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "svx/adversary.hpp"
#include "svx/common.hpp"
#include "svx/model.hpp"
#include "svx/rational.hpp"

namespace svx {

// The classic binary SV source: p_0(0) = delta, p_1(0) = 1 - delta.
SourceSpec binary_sv_spec(double delta);
SourceSpec binary_sv_spec(const Rational& delta);

// Base-delta expansion (0.x_1 ... x_n)_delta =
//   sum_i x_i (1-delta)^i (delta/(1-delta))^(#ones before i).
template <class R>
R base_delta(std::span<const int> bits, const R& delta) {
  R one_minus = R(1) - delta;
  R ratio = delta / one_minus;
  R weight(1);  // (1-delta)^i (delta/(1-delta))^{s_x(i)} built incrementally
  R sum(0);
  for (int b : bits) {
    weight *= one_minus;
    if (b) {
      sum += weight;
      weight *= ratio;
    }
  }
  return sum;
}

// Expansion of the n-bit binary representation of x; x = 2^n is the full
// prefix and maps to 1.
template <class R>
R base_delta_int(std::uint64_t x, int n, const R& delta) {
  if (x == (std::uint64_t{1} << n)) return R(1);
  std::vector<int> bits(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    bits[i] = static_cast<int>(x & 1);
    x >>= 1;
  }
  return base_delta<R>(bits, delta);
}

struct CurvePoint {
  double alpha;  // (0.x)_{1-delta}
  double beta;   // (0.x)_delta
};

// The F_delta cloud behind Figure 1: deduplicated, sorted by alpha, plus
// (1,1). Values of strings shorter than n_max coincide with zero-padded
// length-n_max strings, so enumerating length n_max covers every length.
std::vector<CurvePoint> f_delta_curve(double delta, int n_max);
std::vector<CurvePoint> f_delta_curve_serial(double delta, int n_max);

// Chebyshev distance of the cloud to (1/2, 1/2):
// min over points of max(|alpha - 1/2|, |beta - 1/2|).
double curve_gap_to_half(const std::vector<CurvePoint>& points);

// Depth-n binary table labeling the first x leaves 0.
ExtractorTable left_prefix_table(int n, std::uint64_t x);

// Exhaustive check of the left-prefix optimality claim in exact arithmetic:
// beta(I) >= (0.bin|I|)_delta for every subset, with equality on the
// left-prefix table of each size.
bool verify_prefix_optimality(const Rational& delta, int n);

struct BaseDeltaLemmaResult {
  bool ok = true;
  struct Counterexample {
    int n;
    std::uint64_t x, y, z;
    Rational delta;
    bool remark_form;
  };
  std::optional<Counterexample> counterexample;
  std::uint64_t triples_checked = 0;
};

// Exhaustive sweep of the base-delta inequality and its remark corollary for
// all bit-string triples of length <= n_max, in exact arithmetic. The
// default grid is 19 values k/40 inside (0, 1/2), the domain where the
// inequality holds (it is false for delta > 1/2: x=11, y=01 at delta=11/20).
BaseDeltaLemmaResult verify_basedelta_lemma(
    int n_max, const std::vector<Rational>& deltas = {});

// Points not dominated by any other point, where (a1,b1) dominates (a2,b2)
// iff a1 <= a2 and b1 >= b2. Input is deduplicated first.
std::vector<std::pair<double, double>> domination_frontier(
    std::vector<std::pair<double, double>> points);

// True when every point of `cloud` dominates some point of `curve`, i.e.
// has a curve point to its lower right (alpha_F >= alpha, beta_F <= beta).
// This is the content of the left-prefix optimality corollary: achievable
// pairs lie on or above-left of the extractor frontier.
bool cloud_dominates_curve(const std::vector<std::pair<double, double>>& cloud,
                           const std::vector<CurvePoint>& curve,
                           double slack = 1e-12);

}  // namespace svx
