#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "svx/common.hpp"
#include "svx/linalg.hpp"
#include "svx/model.hpp"
#include "svx/rational.hpp"

namespace svx {

template <class R>
struct AlphaBetaT {
  R alpha{0};  // min over adversary strategies of Pr[bit = 0]
  R beta{0};   // max over adversary strategies of Pr[bit = 0]
};

using AlphaBeta = AlphaBetaT<double>;

enum class Objective { Min, Max };

// Bottom-up DP over the extractor tree. Leaves labeled 0 carry (1,1), labels
// 1 carry (0,0); an internal node takes min_s / max_s of the per-die expected
// child values. Nodes of a level are independent, so the level sweep is
// OpenMP-parallel; results are identical to alpha_beta_serial for any thread
// count.
template <class R>
AlphaBetaT<R> alpha_beta(const SourceSpec& spec, const ExtractorTable& table,
                         std::uint64_t budget = kDefaultBudget);

template <class R>
AlphaBetaT<R> alpha_beta_serial(const SourceSpec& spec,
                                const ExtractorTable& table,
                                std::uint64_t budget = kDefaultBudget);

// Recovers a deterministic strategy achieving exactly alpha (Min) or beta
// (Max); ties break toward the smallest die index.
StrategyTree optimal_strategy(const SourceSpec& spec,
                              const ExtractorTable& table, Objective obj,
                              std::uint64_t budget = kDefaultBudget);

template <class R>
struct PhiSetT {
  int n = 0;
  std::vector<std::pair<R, R>> points;  // deduplicated (alpha, beta) pairs
};

using PhiSet = PhiSetT<double>;

// Enumerates every subset I of C^n and collects the (alpha, beta) cloud.
// The subset count 2^(|C|^n) must fit in the budget.
template <class R>
PhiSetT<R> phi_set(const SourceSpec& spec, int n,
                   std::uint64_t budget = kDefaultBudget);

template <class R>
PhiSetT<R> phi_set_serial(const SourceSpec& spec, int n,
                          std::uint64_t budget = kDefaultBudget);

// Impossibility certificate g(x) = x + eps * x(1-x): every achievable
// (alpha, beta) satisfies beta >= g(alpha), while g(1/2) > 1/2.
struct GEpsilonCert {
  double delta = 0.0;    // min over the zero-mean unit sphere of the spread
  double epsilon = 0.0;  // 0.5 * min(1/Mf, delta / (2 Mf |C|))
  double mf = 1.0;       // max |f'| of the shape f(x) = x(1-x)
  bool numerical = true; // false when delta came from the 1-dim closed form
  std::optional<Rational> delta_exact;    // binary specs in exact mode
  std::optional<Rational> epsilon_exact;

  double g(double x) const { return x + epsilon * x * (1.0 - x); }
};

// Returns nullopt when the computed spread minimum is <= tol (the spec is
// extractable, or the optimizer failed and the caller must reconcile).
std::optional<GEpsilonCert> build_g_certificate(const SourceSpec& spec,
                                                double tol = kDefaultTol,
                                                std::uint64_t seed = 2024);

bool check_g_dominates(const GEpsilonCert& cert, const PhiSet& phi,
                       double slack = 1e-12);

// Tilting adversary: boosts a half-mass subset of the accepting set by a
// (1+eps) factor while every per-step conditional stays inside the hull
// of the dice.
struct TiltResult {
  bool complemented = false;  // worked on the complement table
  double q_mass_i0 = 0.0;     // q^n(I_0)
  double achieved = 0.0;      // tilted probability of the working set
  // conditional distribution and hull weights for every history;
  // index [len][rank of history][...]
  std::vector<std::vector<std::vector<double>>> conditionals;
  std::vector<std::vector<std::vector<double>>> hull_weights;
};

// Builds the history-dependent randomized strategy that realizes the tilted
// distribution boosting a half-mass subset of the working set by (1+eps).
// Throws HullError (naming the violating history) when eps is too large, or
// when q is not interior to the dice hull.
TiltResult tilt_adversary(const SourceSpec& spec, const ExtractorTable& table,
                          const Distribution& q, double eps,
                          std::uint64_t budget = kDefaultBudget);

}  // namespace svx
