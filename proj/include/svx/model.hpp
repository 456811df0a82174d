#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "svx/common.hpp"
#include "svx/rational.hpp"

namespace svx {

// A probability vector over the alphabet.
struct Distribution {
  std::vector<double> probs;

  int size() const { return static_cast<int>(probs.size()); }
};

// A generalized SV source: the adversary's set of dice over a common
// alphabet. When the input was given as exact fractions, `exact_dice`
// mirrors `dice` and enables exact-arithmetic analysis.
struct SourceSpec {
  int alphabet_size = 0;
  std::vector<Distribution> dice;
  std::vector<std::string> labels;  // optional symbol names
  std::optional<std::vector<std::vector<Rational>>> exact_dice;

  int num_dice() const { return static_cast<int>(dice.size()); }
  bool has_exact() const { return exact_dice.has_value(); }

  double prob(int die, int symbol) const { return dice[die].probs[symbol]; }

  // True when some die assigns (near-)zero probability to some symbol.
  bool degenerate(double tol = kSupportTol) const {
    for (const auto& d : dice)
      for (double p : d.probs)
        if (p <= tol) return true;
    return false;
  }

  template <class R>
  std::vector<std::vector<R>> dice_as() const;
};

template <>
inline std::vector<std::vector<double>> SourceSpec::dice_as<double>() const {
  std::vector<std::vector<double>> out;
  out.reserve(dice.size());
  for (const auto& d : dice) out.push_back(d.probs);
  return out;
}

template <>
inline std::vector<std::vector<Rational>> SourceSpec::dice_as<Rational>()
    const {
  if (!exact_dice) {
    throw SpecError("exact mode requested but spec has no exact entries");
  }
  return *exact_dice;
}

// A distributed SV source: dice over A x B given as joint matrices.
struct JointSourceSpec {
  int a_size = 0;
  int b_size = 0;
  // dice[s][a][b]
  std::vector<std::vector<std::vector<double>>> dice;

  int num_dice() const { return static_cast<int>(dice.size()); }
  double prob(int die, int a, int b) const { return dice[die][a][b]; }

  std::vector<double> a_marginal(int die) const {
    std::vector<double> m(a_size, 0.0);
    for (int a = 0; a < a_size; ++a)
      for (int b = 0; b < b_size; ++b) m[a] += dice[die][a][b];
    return m;
  }
  std::vector<double> b_marginal(int die) const {
    std::vector<double> m(b_size, 0.0);
    for (int a = 0; a < a_size; ++a)
      for (int b = 0; b < b_size; ++b) m[b] += dice[die][a][b];
    return m;
  }
};

// A deterministic extractor of depth n: one bit per length-n string over the
// alphabet, indexed lexicographically with symbol 0 most significant. Label 0
// marks membership in the accepting set I.
struct ExtractorTable {
  int depth = 0;
  int alphabet_size = 0;
  std::vector<std::uint8_t> labels;  // size alphabet_size^depth

  std::uint64_t num_strings() const { return labels.size(); }

  // Child table for first symbol c: slice of stride-grouped labels.
  ExtractorTable child(int c) const {
    ExtractorTable t;
    t.depth = depth - 1;
    t.alphabet_size = alphabet_size;
    std::uint64_t stride = num_strings() / alphabet_size;
    t.labels.assign(labels.begin() + static_cast<std::ptrdiff_t>(c * stride),
                    labels.begin() +
                        static_cast<std::ptrdiff_t>((c + 1) * stride));
    return t;
  }
};

ExtractorTable make_table(int alphabet_size, int depth,
                          std::vector<std::uint8_t> labels);

// Rejoins per-symbol child tables into the parent table.
ExtractorTable join_children(const std::vector<ExtractorTable>& children);

// A deterministic adversary: a die index for every history of length < depth.
// levels[i] has alphabet_size^i entries indexed by the history's
// lexicographic rank.
struct StrategyTree {
  int depth = 0;
  int alphabet_size = 0;
  std::vector<std::vector<int>> levels;

  int choice(std::span<const int> history) const;
};

StrategyTree make_constant_tree(int alphabet_size, int depth, int die);

// A partial observation of the source.
struct History {
  std::vector<int> symbols;

  std::uint64_t rank(int alphabet_size) const {
    std::uint64_t r = 0;
    for (int s : symbols) r = r * alphabet_size + static_cast<unsigned>(s);
    return r;
  }
};

std::vector<int> unrank_string(std::uint64_t index, int alphabet_size, int n);
std::uint64_t rank_string(std::span<const int> symbols, int alphabet_size);

struct ValidationReport {
  bool ok = true;
  bool degenerate = false;
  std::vector<std::string> violations;
};

ValidationReport validate_spec(const SourceSpec& spec, double tol = 1e-12);
ValidationReport validate_spec(const JointSourceSpec& spec,
                               double tol = 1e-12);

// All strings of C^n in lexicographic order, materialized.
std::vector<std::vector<int>> enumerate_strings(
    int alphabet_size, int n, std::uint64_t budget = kDefaultBudget);

// Streaming form; fn(rank, symbols) is called in lexicographic order.
template <class Fn>
void for_each_string(int alphabet_size, int n, std::uint64_t budget, Fn&& fn) {
  std::uint64_t total = checked_pow(alphabet_size, n, budget);
  std::vector<int> s(static_cast<std::size_t>(n), 0);
  for (std::uint64_t r = 0; r < total; ++r) {
    fn(r, std::span<const int>(s));
    // odometer increment, symbol 0 most significant
    for (int i = n - 1; i >= 0; --i) {
      if (++s[i] < alphabet_size) break;
      s[i] = 0;
    }
  }
}

}  // namespace svx
