#pragma once

#include <memory>
#include <vector>

#include "svx/model.hpp"
#include "svx/rng.hpp"

namespace svx {

// Stateful adversary: chooses a die for the next step, then observes the
// drawn symbol. Clone before use in a parallel trial.
class AdversaryStrategy {
 public:
  virtual ~AdversaryStrategy() = default;
  virtual void reset(SplitMix64 rng) = 0;
  virtual int choose() = 0;
  virtual void observe(int symbol) = 0;
  virtual std::unique_ptr<AdversaryStrategy> clone() const = 0;
};

class ConstantStrategy final : public AdversaryStrategy {
 public:
  explicit ConstantStrategy(int die) : die_(die) {}
  void reset(SplitMix64) override {}
  int choose() override { return die_; }
  void observe(int) override {}
  std::unique_ptr<AdversaryStrategy> clone() const override {
    return std::make_unique<ConstantStrategy>(die_);
  }

 private:
  int die_;
};

// Picks a die uniformly at random each step, independent of history.
class UniformRandomStrategy final : public AdversaryStrategy {
 public:
  explicit UniformRandomStrategy(int num_dice) : num_dice_(num_dice) {}
  void reset(SplitMix64 rng) override { rng_ = rng; }
  int choose() override { return static_cast<int>(rng_.below(num_dice_)); }
  void observe(int) override {}
  std::unique_ptr<AdversaryStrategy> clone() const override {
    return std::make_unique<UniformRandomStrategy>(num_dice_);
  }

 private:
  int num_dice_;
  SplitMix64 rng_{0};
};

// Tracks the psi-walk of the extractor it plays against. While the walk is
// nonnegative it picks the die maximizing Pr[psi(C) > 0], otherwise the die
// minimizing it (ties toward the smaller index). `die_probs[s][c]` gives the
// probability of observed symbol c under die s; psi is indexed the same way.
class AdaptiveSignStrategy final : public AdversaryStrategy {
 public:
  AdaptiveSignStrategy(const std::vector<std::vector<double>>& die_probs,
                       std::vector<double> psi);
  AdaptiveSignStrategy(const SourceSpec& spec, std::vector<double> psi);
  void reset(SplitMix64) override { y_ = 0.0; }
  int choose() override { return y_ >= 0.0 ? up_die_ : down_die_; }
  void observe(int symbol) override { y_ += psi_[symbol]; }
  std::unique_ptr<AdversaryStrategy> clone() const override {
    return std::make_unique<AdaptiveSignStrategy>(*this);
  }

 private:
  std::vector<double> psi_;
  int up_die_ = 0;
  int down_die_ = 0;
  double y_ = 0.0;
};

// Deterministic play of a fixed StrategyTree; wraps around block-wise when
// the walk is longer than the tree depth.
class TreeStrategy final : public AdversaryStrategy {
 public:
  explicit TreeStrategy(StrategyTree tree) : tree_(std::move(tree)) {}
  void reset(SplitMix64) override {
    level_ = 0;
    rank_ = 0;
  }
  int choose() override { return tree_.levels[level_][rank_]; }
  void observe(int symbol) override {
    rank_ = rank_ * tree_.alphabet_size + static_cast<unsigned>(symbol);
    if (++level_ >= tree_.depth) {
      level_ = 0;
      rank_ = 0;
    }
  }
  std::unique_ptr<AdversaryStrategy> clone() const override {
    return std::make_unique<TreeStrategy>(*this);
  }
  int depth() const { return tree_.depth; }

 private:
  StrategyTree tree_;
  int level_ = 0;
  std::uint64_t rank_ = 0;
};

// History-dependent randomized strategy given by per-history mixtures over
// the dice (the shape produced by the tilting adversary). Wraps block-wise.
class TableMixtureStrategy final : public AdversaryStrategy {
 public:
  TableMixtureStrategy(int alphabet_size,
                       std::vector<std::vector<std::vector<double>>> weights)
      : alphabet_size_(alphabet_size), weights_(std::move(weights)) {}
  void reset(SplitMix64 rng) override {
    rng_ = rng;
    level_ = 0;
    rank_ = 0;
  }
  int choose() override {
    const auto& w = weights_[level_][rank_];
    double u = rng_.uniform();
    double acc = 0.0;
    for (std::size_t s = 0; s + 1 < w.size(); ++s) {
      acc += w[s];
      if (u < acc) return static_cast<int>(s);
    }
    return static_cast<int>(w.size()) - 1;
  }
  void observe(int symbol) override {
    rank_ = rank_ * alphabet_size_ + static_cast<unsigned>(symbol);
    if (++level_ >= static_cast<int>(weights_.size())) {
      level_ = 0;
      rank_ = 0;
    }
  }
  std::unique_ptr<AdversaryStrategy> clone() const override {
    return std::make_unique<TableMixtureStrategy>(*this);
  }

 private:
  int alphabet_size_;
  std::vector<std::vector<std::vector<double>>> weights_;
  SplitMix64 rng_{0};
  int level_ = 0;
  std::uint64_t rank_ = 0;
};

// Draws one symbol from `die` of `spec` using rng.
inline int draw_symbol(const SourceSpec& spec, int die, SplitMix64& rng) {
  double u = rng.uniform();
  const auto& p = spec.dice[die].probs;
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < p.size(); ++c) {
    acc += p[c];
    if (u < acc) return static_cast<int>(c);
  }
  return static_cast<int>(p.size()) - 1;
}

// Draws one (a, b) pair from die `die` of `jspec`.
std::pair<int, int> draw_pair(const JointSourceSpec& jspec, int die,
                              SplitMix64& rng);

// Samples n symbols. Symbol draws consume substream(seed, 0); randomized
// strategies consume substream(seed, 1). Bit-identical for a given seed.
std::vector<int> sample_sequence(const SourceSpec& spec,
                                 AdversaryStrategy& strategy, int n,
                                 std::uint64_t seed);

std::vector<int> sample_sequence(const SourceSpec& spec,
                                 const StrategyTree& tree, int n,
                                 std::uint64_t seed);

// Samples n pairs from a distributed source under a pair-history strategy.
std::vector<std::pair<int, int>> sample_pairs(const JointSourceSpec& jspec,
                                              AdversaryStrategy& strategy,
                                              int n, std::uint64_t seed);

}  // namespace svx
