#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "svx/common.hpp"
#include "svx/model.hpp"
#include "svx/rng.hpp"
#include "svx/sampling.hpp"

namespace svx {

// A zero-mean positive-variance witness function on the alphabet,
// normalized so max_c |psi(c)| = 1.
struct PsiWitness {
  std::vector<double> values;
  double max_abs = 1.0;       // m
  double min_variance = 0.0;  // v = min_s Var_s[psi]
};

struct MartingaleConfig {
  double threshold = 1.0;  // M
  int block_length = 1;    // symbols consumed per extracted bit
};

// Default M from the block length: ceil(n^(1/3)).
inline double default_threshold(int block_length) {
  return std::ceil(std::cbrt(static_cast<double>(block_length)));
}

struct Verdict {
  enum class Status { Extractable, Impossible, Gap };
  Status status = Status::Gap;
  std::optional<PsiWitness> witness;
  std::string note;
};

inline const char* to_string(Verdict::Status s) {
  switch (s) {
    case Verdict::Status::Extractable: return "EXTRACTABLE";
    case Verdict::Status::Impossible: return "IMPOSSIBLE";
    default: return "GAP";
  }
}

// Searches the nullspace of the dice matrix for a function with zero mean
// under every die and positive variance under every die.
std::optional<PsiWitness> find_psi(const SourceSpec& spec,
                                   double tol = kDefaultTol);

// Restricted impossibility test: true when the only psi
// supported on C' = {c : some die in `subset` gives c positive probability}
// with zero mean under every die in `subset` is psi = 0.
bool check_restricted_necessary(const SourceSpec& spec,
                                const std::set<int>& subset,
                                double tol = kDefaultTol);

// Full verdict; subsets of dice are exhausted for degenerate specs only up
// to `subset_budget` dice.
Verdict spec_verdict(const SourceSpec& spec, double tol = kDefaultTol,
                     int subset_budget = 16);

struct ExtractResult {
  int bit = 0;
  int tau = 0;
  double y_tau = 0.0;
};

// One martingale-stopping-time bit: walks Y += psi(c) over at most
// cfg.block_length symbols; tau is the first time |Y| >= M (else the block
// length); the bit is 1 iff Y_tau >= M. `next` yields symbols and may throw
// StreamError when exhausted.
template <class Source>
ExtractResult extract_bit_from(const PsiWitness& psi,
                               const MartingaleConfig& cfg, Source&& next) {
  ExtractResult r;
  double y = 0.0;
  int t = 0;
  const double m_thresh = cfg.threshold;
  while (t < cfg.block_length) {
    int c = next();
    ++t;
    y += psi.values[c];
    if (y >= m_thresh || y <= -m_thresh) break;
  }
  r.tau = t;
  r.y_tau = y;
  r.bit = (y >= m_thresh) ? 1 : 0;
  return r;
}

// Span-backed variant; *pos advances past the consumed symbols.
ExtractResult extract_bit(const PsiWitness& psi, const MartingaleConfig& cfg,
                          std::span<const int> stream, std::size_t* pos);

inline ExtractResult extract_bit(const PsiWitness& psi,
                                 const MartingaleConfig& cfg,
                                 std::span<const int> stream) {
  std::size_t pos = 0;
  return extract_bit(psi, cfg, stream, &pos);
}

// k bits from k consecutive blocks of cfg.block_length symbols.
std::vector<ExtractResult> extract_bits(const PsiWitness& psi,
                                        const MartingaleConfig& cfg,
                                        std::span<const int> stream, int k);

struct BiasBracket {
  double lo = 0.0;
  double hi = 1.0;
  double tail = 0.0;  // (M+m)^2 / (v n), the Pr[tau = n] bound
};

// Analytic bracket on Pr[bit = 1] for any adversary strategy, with the
// O(1/n) term instantiated as the Markov tail bound.
BiasBracket bias_bracket(const MartingaleConfig& cfg, const PsiWitness& psi);

struct BiasStats {
  long trials = 0;
  double freq_one = 0.0;
  double pr_tau_full = 0.0;  // fraction of trials with tau = block_length
  double mean_y_tau = 0.0;
  double stddev_y_tau = 0.0;
  double mean_tau = 0.0;
  int tau_min = 0;
  int tau_max = 0;
};

// Seeded Monte Carlo of the one-bit extractor against a strategy; trial t
// uses substream(seed, t). OpenMP-parallel across trials with a serial
// reduction, so results are identical for any thread count.
BiasStats simulate_bias(const SourceSpec& spec, const PsiWitness& psi,
                        const MartingaleConfig& cfg,
                        const AdversaryStrategy& strategy, long trials,
                        std::uint64_t seed);

// Reference implementation without OpenMP; must match simulate_bias exactly.
BiasStats simulate_bias_serial(const SourceSpec& spec, const PsiWitness& psi,
                               const MartingaleConfig& cfg,
                               const AdversaryStrategy& strategy, long trials,
                               std::uint64_t seed);

}  // namespace svx
