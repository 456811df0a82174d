#include "svx/instances.hpp"

#include <cmath>

#include "svx/linalg.hpp"

namespace svx {

Distribution random_die(SplitMix64& rng, int alphabet, double floor) {
  std::vector<double> p(alphabet);
  double sum = 0.0;
  for (auto& x : p) {
    x = -std::log(std::max(rng.uniform(), 1e-300));
    sum += x;
  }
  for (auto& x : p) {
    x = (1.0 - floor) * (x / sum) + floor / alphabet;
  }
  return Distribution{std::move(p)};
}

SourceSpec random_spec(SplitMix64& rng, int alphabet, int num_dice,
                       double floor) {
  SourceSpec s;
  s.alphabet_size = alphabet;
  for (int i = 0; i < num_dice; ++i) s.dice.push_back(random_die(rng, alphabet, floor));
  return s;
}

SourceSpec random_spanning_spec(SplitMix64& rng, int alphabet, int num_dice) {
  if (num_dice < alphabet) {
    throw SpecError("spanning the simplex needs at least |C| dice");
  }
  for (int attempt = 0; attempt < 100; ++attempt) {
    SourceSpec s = random_spec(rng, alphabet, num_dice);
    auto basis = nullspace_basis(s.dice_as<double>(), alphabet);
    if (basis.empty()) return s;
  }
  throw SpecError("failed to generate a spanning spec");
}

JointMatrix random_joint(SplitMix64& rng, int a_size, int b_size,
                         double floor) {
  JointMatrix m(a_size, std::vector<double>(b_size, 0.0));
  double sum = 0.0;
  for (auto& row : m)
    for (auto& x : row) {
      x = -std::log(std::max(rng.uniform(), 1e-300));
      sum += x;
    }
  int cells = a_size * b_size;
  for (auto& row : m)
    for (auto& x : row) x = (1.0 - floor) * (x / sum) + floor / cells;
  return m;
}

JointMatrix dsbs(double eps) {
  return {{(1.0 - eps) / 2.0, eps / 2.0}, {eps / 2.0, (1.0 - eps) / 2.0}};
}

JointMatrix tensor_square(const JointMatrix& joint) {
  int na = static_cast<int>(joint.size());
  int nb = static_cast<int>(joint[0].size());
  JointMatrix out(na * na, std::vector<double>(nb * nb, 0.0));
  for (int a = 0; a < na; ++a)
    for (int a2 = 0; a2 < na; ++a2)
      for (int b = 0; b < nb; ++b)
        for (int b2 = 0; b2 < nb; ++b2)
          out[a * na + a2][b * nb + b2] = joint[a][b] * joint[a2][b2];
  return out;
}

JointMatrix apply_random_channels(SplitMix64& rng, const JointMatrix& joint,
                                  int a_out, int b_out) {
  int na = static_cast<int>(joint.size());
  int nb = static_cast<int>(joint[0].size());
  // random row-stochastic maps
  auto channel = [&](int in, int out) {
    std::vector<std::vector<double>> w(in, std::vector<double>(out));
    for (auto& row : w) {
      double sum = 0.0;
      for (auto& x : row) {
        x = rng.uniform() + 1e-3;
        sum += x;
      }
      for (auto& x : row) x /= sum;
    }
    return w;
  };
  auto wa = channel(na, a_out);
  auto wb = channel(nb, b_out);
  JointMatrix out(a_out, std::vector<double>(b_out, 0.0));
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b)
      for (int a2 = 0; a2 < a_out; ++a2)
        for (int b2 = 0; b2 < b_out; ++b2)
          out[a2][b2] += joint[a][b] * wa[a][a2] * wb[b][b2];
  return out;
}

}  // namespace svx
