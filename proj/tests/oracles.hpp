// Brute-force oracles, independent of the implementation paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "svx/model.hpp"
#include "svx/rng.hpp"

namespace svx::oracle {

// alpha/beta by enumerating EVERY deterministic strategy tree and summing
// leaf probabilities exactly. Exponential; only for tiny instances.
template <class R>
std::pair<R, R> alpha_beta_bruteforce(const SourceSpec& spec,
                                      const ExtractorTable& table) {
  const int n = table.depth;
  const int k = spec.alphabet_size;
  const int ns = spec.num_dice();
  auto dice = spec.template dice_as<R>();

  // histories of length < n, in level order
  std::uint64_t num_histories = 0;
  std::uint64_t level_count = 1;
  std::vector<std::uint64_t> level_offset;
  for (int i = 0; i < n; ++i) {
    level_offset.push_back(num_histories);
    num_histories += level_count;
    level_count *= k;
  }

  std::uint64_t num_strategies = 1;
  for (std::uint64_t h = 0; h < num_histories; ++h) {
    num_strategies *= ns;  // caller keeps this tiny
  }

  R best_min(2), best_max(-1);
  std::vector<int> choice(num_histories, 0);
  for (std::uint64_t code = 0; code < num_strategies; ++code) {
    std::uint64_t c = code;
    for (std::uint64_t h = 0; h < num_histories; ++h) {
      choice[h] = static_cast<int>(c % ns);
      c /= ns;
    }
    R pr(0);
    std::uint64_t leaves = upow(k, n);
    for (std::uint64_t leaf = 0; leaf < leaves; ++leaf) {
      if (table.labels[leaf] != 0) continue;
      auto symbols = unrank_string(leaf, k, n);
      R p(1);
      std::uint64_t rank = 0;
      for (int i = 0; i < n; ++i) {
        int die = choice[level_offset[i] + rank];
        p *= dice[die][symbols[i]];
        rank = rank * k + static_cast<unsigned>(symbols[i]);
      }
      pr += p;
    }
    if (pr < best_min) best_min = pr;
    if (pr > best_max) best_max = pr;
  }
  return {best_min, best_max};
}

// Maximal correlation by grid search over zero-mean unit-variance function
// pairs followed by local refinement; independent of the SVD route.
double maxcorr_bruteforce(const std::vector<std::vector<double>>& joint);

inline double maxcorr_bruteforce(const std::vector<std::vector<double>>& joint) {
  int na = static_cast<int>(joint.size());
  int nb = static_cast<int>(joint[0].size());
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      pa[a] += joint[a][b];
      pb[b] += joint[a][b];
    }

  // value of the best response to X: sqrt(Var_B[E[X|B]]) with X zero-mean
  // unit-variance, so the search space is only the X side.
  auto value_of = [&](const std::vector<double>& x_raw) {
    // normalize to zero mean, unit variance under pa (support only)
    double ex = 0.0;
    for (int a = 0; a < na; ++a) ex += pa[a] * x_raw[a];
    double var = 0.0;
    for (int a = 0; a < na; ++a)
      var += pa[a] * (x_raw[a] - ex) * (x_raw[a] - ex);
    if (var <= 1e-15) return 0.0;
    double inv = 1.0 / std::sqrt(var);
    double out = 0.0;
    for (int b = 0; b < nb; ++b) {
      if (pb[b] <= 0.0) continue;
      double h = 0.0;
      for (int a = 0; a < na; ++a) h += joint[a][b] * (x_raw[a] - ex) * inv;
      out += h * h / pb[b];  // Var_B[h] since E_B[h] = E[X] = 0
    }
    return std::sqrt(out);
  };

  // coarse grid over the cube, then shrinking random refinement
  std::vector<double> best_x(na, 0.0);
  double best = 0.0;
  std::vector<int> idx(na, 0);
  const int steps = na <= 3 ? 9 : 5;
  while (true) {
    std::vector<double> x(na);
    for (int a = 0; a < na; ++a) x[a] = -1.0 + 2.0 * idx[a] / (steps - 1);
    double v = value_of(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
    int i = 0;
    while (i < na && ++idx[i] == steps) idx[i++] = 0;
    if (i == na) break;
  }
  SplitMix64 rng(99);
  double radius = 0.5;
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (int t = 0; t < 300; ++t) {
      std::vector<double> x(best_x);
      for (int a = 0; a < na; ++a)
        x[a] += radius * (2.0 * rng.uniform() - 1.0);
      double v = value_of(x);
      if (v > best) {
        best = v;
        best_x = x;
        improved = true;
      }
    }
    if (!improved) radius *= 0.5;
    if (radius < 1e-9) break;
  }
  return std::min(best, 1.0);
}

}  // namespace svx::oracle
