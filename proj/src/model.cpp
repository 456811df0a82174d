#include "svx/model.hpp"

#include <cmath>
#include <sstream>

namespace svx {

ExtractorTable make_table(int alphabet_size, int depth,
                          std::vector<std::uint8_t> labels) {
  ExtractorTable t;
  t.alphabet_size = alphabet_size;
  t.depth = depth;
  std::uint64_t want = upow(alphabet_size, depth);
  if (labels.size() != want) {
    throw SpecError("extractor table has " + std::to_string(labels.size()) +
                    " labels, expected " + std::to_string(want));
  }
  for (auto b : labels) {
    if (b > 1) throw SpecError("extractor labels must be 0 or 1");
  }
  t.labels = std::move(labels);
  return t;
}

ExtractorTable join_children(const std::vector<ExtractorTable>& children) {
  if (children.empty()) throw SpecError("join_children: no children");
  ExtractorTable t;
  t.alphabet_size = static_cast<int>(children.size());
  t.depth = children[0].depth + 1;
  for (const auto& c : children) {
    if (c.depth != children[0].depth || c.alphabet_size != t.alphabet_size) {
      throw SpecError("join_children: inconsistent children");
    }
    t.labels.insert(t.labels.end(), c.labels.begin(), c.labels.end());
  }
  return t;
}

int StrategyTree::choice(std::span<const int> history) const {
  int len = static_cast<int>(history.size());
  if (len >= depth && depth > 0 && len >= static_cast<int>(levels.size())) {
    throw SpecError("strategy queried past its depth");
  }
  if (len >= static_cast<int>(levels.size())) {
    throw SpecError("strategy queried past its depth");
  }
  std::uint64_t r = rank_string(history, alphabet_size);
  return levels[len][r];
}

StrategyTree make_constant_tree(int alphabet_size, int depth, int die) {
  StrategyTree t;
  t.alphabet_size = alphabet_size;
  t.depth = depth;
  t.levels.resize(depth);
  std::uint64_t count = 1;
  for (int i = 0; i < depth; ++i) {
    t.levels[i].assign(count, die);
    count *= alphabet_size;
  }
  return t;
}

std::vector<int> unrank_string(std::uint64_t index, int alphabet_size, int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    s[i] = static_cast<int>(index % alphabet_size);
    index /= alphabet_size;
  }
  return s;
}

std::uint64_t rank_string(std::span<const int> symbols, int alphabet_size) {
  std::uint64_t r = 0;
  for (int s : symbols) r = r * alphabet_size + static_cast<unsigned>(s);
  return r;
}

namespace {

void check_distribution(const std::vector<double>& p, int want_size,
                        double tol, const std::string& what,
                        ValidationReport& rep) {
  if (want_size >= 0 && static_cast<int>(p.size()) != want_size) {
    rep.ok = false;
    rep.violations.push_back(what + ": has " + std::to_string(p.size()) +
                             " entries, expected " +
                             std::to_string(want_size));
    return;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0) {
      rep.ok = false;
      rep.violations.push_back(what + ": negative entry at index " +
                               std::to_string(i));
    }
    if (p[i] <= kSupportTol) rep.degenerate = true;
    sum += p[i];
  }
  if (std::fabs(sum - 1.0) > tol) {
    rep.ok = false;
    std::ostringstream os;
    os << what << ": sum = " << sum;
    rep.violations.push_back(os.str());
  }
}

}  // namespace

ValidationReport validate_spec(const SourceSpec& spec, double tol) {
  ValidationReport rep;
  if (spec.alphabet_size < 1) {
    rep.ok = false;
    rep.violations.push_back("alphabet_size must be >= 1");
  }
  if (spec.dice.empty()) {
    rep.ok = false;
    rep.violations.push_back("dice sequence is empty");
  }
  for (std::size_t s = 0; s < spec.dice.size(); ++s) {
    check_distribution(spec.dice[s].probs, spec.alphabet_size, tol,
                       "die " + std::to_string(s), rep);
  }
  if (spec.exact_dice) {
    if (spec.exact_dice->size() != spec.dice.size()) {
      rep.ok = false;
      rep.violations.push_back("exact dice count mismatch");
    } else {
      for (std::size_t s = 0; s < spec.exact_dice->size(); ++s) {
        Rational sum = 0;
        for (const auto& q : (*spec.exact_dice)[s]) {
          if (q < 0) {
            rep.ok = false;
            rep.violations.push_back("die " + std::to_string(s) +
                                     ": negative exact entry");
          }
          sum += q;
        }
        if (sum != 1) {
          rep.ok = false;
          rep.violations.push_back("die " + std::to_string(s) +
                                   ": exact entries sum to " +
                                   rational_to_string(sum));
        }
      }
    }
  }
  return rep;
}

ValidationReport validate_spec(const JointSourceSpec& spec, double tol) {
  ValidationReport rep;
  if (spec.a_size < 1 || spec.b_size < 1) {
    rep.ok = false;
    rep.violations.push_back("alphabet sizes must be >= 1");
  }
  if (spec.dice.empty()) {
    rep.ok = false;
    rep.violations.push_back("dice sequence is empty");
  }
  for (std::size_t s = 0; s < spec.dice.size(); ++s) {
    const auto& m = spec.dice[s];
    if (static_cast<int>(m.size()) != spec.a_size) {
      rep.ok = false;
      rep.violations.push_back("die " + std::to_string(s) + ": row count " +
                               std::to_string(m.size()));
      continue;
    }
    double sum = 0.0;
    bool shape_ok = true;
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != spec.b_size) {
        rep.ok = false;
        rep.violations.push_back("die " + std::to_string(s) +
                                 ": ragged row");
        shape_ok = false;
        break;
      }
      for (double p : row) {
        if (p < 0.0) {
          rep.ok = false;
          rep.violations.push_back("die " + std::to_string(s) +
                                   ": negative entry");
        }
        if (p <= kSupportTol) rep.degenerate = true;
        sum += p;
      }
    }
    if (shape_ok && std::fabs(sum - 1.0) > tol) {
      std::ostringstream os;
      os << "die " << s << ": sum = " << sum;
      rep.ok = false;
      rep.violations.push_back(os.str());
    }
  }
  return rep;
}

std::vector<std::vector<int>> enumerate_strings(int alphabet_size, int n,
                                                std::uint64_t budget) {
  if (alphabet_size < 1) throw SpecError("alphabet_size must be >= 1");
  if (n < 0) throw SpecError("n must be >= 0");
  std::vector<std::vector<int>> out;
  out.reserve(checked_pow(alphabet_size, n, budget));
  for_each_string(alphabet_size, n, budget,
                  [&](std::uint64_t, std::span<const int> s) {
                    out.emplace_back(s.begin(), s.end());
                  });
  return out;
}

}  // namespace svx
