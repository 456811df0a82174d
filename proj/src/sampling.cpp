#include "svx/sampling.hpp"

#include <algorithm>

namespace svx {

AdaptiveSignStrategy::AdaptiveSignStrategy(
    const std::vector<std::vector<double>>& die_probs, std::vector<double> psi)
    : psi_(std::move(psi)) {
  double best_up = -1.0, best_down = 2.0;
  for (std::size_t s = 0; s < die_probs.size(); ++s) {
    double pr_up = 0.0;
    for (std::size_t c = 0; c < die_probs[s].size(); ++c) {
      if (psi_[c] > 0.0) pr_up += die_probs[s][c];
    }
    if (pr_up > best_up) {
      best_up = pr_up;
      up_die_ = static_cast<int>(s);
    }
    if (pr_up < best_down) {
      best_down = pr_up;
      down_die_ = static_cast<int>(s);
    }
  }
}

AdaptiveSignStrategy::AdaptiveSignStrategy(const SourceSpec& spec,
                                           std::vector<double> psi)
    : AdaptiveSignStrategy(spec.dice_as<double>(), std::move(psi)) {}

std::pair<int, int> draw_pair(const JointSourceSpec& jspec, int die,
                              SplitMix64& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (int a = 0; a < jspec.a_size; ++a) {
    for (int b = 0; b < jspec.b_size; ++b) {
      acc += jspec.dice[die][a][b];
      if (u < acc) return {a, b};
    }
  }
  return {jspec.a_size - 1, jspec.b_size - 1};
}

std::vector<int> sample_sequence(const SourceSpec& spec,
                                 AdversaryStrategy& strategy, int n,
                                 std::uint64_t seed) {
  SplitMix64 symbol_rng = substream(seed, 0);
  strategy.reset(substream(seed, 1));
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int s = strategy.choose();
    int c = draw_symbol(spec, s, symbol_rng);
    strategy.observe(c);
    out.push_back(c);
  }
  return out;
}

std::vector<int> sample_sequence(const SourceSpec& spec,
                                 const StrategyTree& tree, int n,
                                 std::uint64_t seed) {
  if (tree.depth < n) {
    throw SpecError("strategy depth " + std::to_string(tree.depth) +
                    " shorter than requested length " + std::to_string(n));
  }
  TreeStrategy strategy(tree);
  return sample_sequence(spec, strategy, n, seed);
}

std::vector<std::pair<int, int>> sample_pairs(const JointSourceSpec& jspec,
                                              AdversaryStrategy& strategy,
                                              int n, std::uint64_t seed) {
  SplitMix64 pair_rng = substream(seed, 0);
  strategy.reset(substream(seed, 1));
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int s = strategy.choose();
    auto [a, b] = draw_pair(jspec, s, pair_rng);
    // the adversary of a distributed source sees the full pair history;
    // fold it into one symbol index
    strategy.observe(a * jspec.b_size + b);
    out.push_back({a, b});
  }
  return out;
}

}  // namespace svx
