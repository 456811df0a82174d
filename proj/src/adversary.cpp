#include "svx/adversary.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svx {

namespace {

template <class R>
struct LevelDP {
  std::vector<R> alpha;
  std::vector<R> beta;
};

// One level-up sweep: combine child values (size count*|C|) into node values.
template <class R, bool Parallel>
LevelDP<R> sweep_up(const std::vector<std::vector<R>>& dice,
                    const LevelDP<R>& children, std::uint64_t count,
                    int alphabet) {
  LevelDP<R> out;
  out.alpha.resize(count);
  out.beta.resize(count);
  const std::int64_t icount = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) if (Parallel && icount > 256)
  for (std::int64_t node = 0; node < icount; ++node) {
    const std::uint64_t base = static_cast<std::uint64_t>(node) * alphabet;
    bool first = true;
    R best_alpha{0}, best_beta{0};
    for (const auto& die : dice) {
      R ea{0}, eb{0};
      for (int c = 0; c < alphabet; ++c) {
        ea += die[c] * children.alpha[base + c];
        eb += die[c] * children.beta[base + c];
      }
      if (first) {
        best_alpha = ea;
        best_beta = eb;
        first = false;
      } else {
        if (ea < best_alpha) best_alpha = ea;
        if (eb > best_beta) best_beta = eb;
      }
    }
    out.alpha[node] = best_alpha;
    out.beta[node] = best_beta;
  }
  return out;
}

template <class R, bool Parallel>
AlphaBetaT<R> alpha_beta_impl(const SourceSpec& spec,
                              const ExtractorTable& table,
                              std::uint64_t budget) {
  if (table.alphabet_size != spec.alphabet_size) {
    throw SpecError("extractor table alphabet does not match the spec");
  }
  std::uint64_t leaves = checked_pow(spec.alphabet_size, table.depth, budget);
  auto dice = spec.dice_as<R>();

  LevelDP<R> level;
  level.alpha.resize(leaves);
  level.beta.resize(leaves);
  for (std::uint64_t i = 0; i < leaves; ++i) {
    R v = (table.labels[i] == 0) ? R(1) : R(0);
    level.alpha[i] = v;
    level.beta[i] = v;
  }
  std::uint64_t count = leaves;
  for (int d = table.depth; d > 0; --d) {
    count /= spec.alphabet_size;
    level = sweep_up<R, Parallel>(dice, level, count, spec.alphabet_size);
  }
  return {level.alpha[0], level.beta[0]};
}

}  // namespace

template <class R>
AlphaBetaT<R> alpha_beta(const SourceSpec& spec, const ExtractorTable& table,
                         std::uint64_t budget) {
  return alpha_beta_impl<R, true>(spec, table, budget);
}

template <class R>
AlphaBetaT<R> alpha_beta_serial(const SourceSpec& spec,
                                const ExtractorTable& table,
                                std::uint64_t budget) {
  return alpha_beta_impl<R, false>(spec, table, budget);
}

template AlphaBetaT<double> alpha_beta<double>(const SourceSpec&,
                                               const ExtractorTable&,
                                               std::uint64_t);
template AlphaBetaT<Rational> alpha_beta<Rational>(const SourceSpec&,
                                                   const ExtractorTable&,
                                                   std::uint64_t);
template AlphaBetaT<double> alpha_beta_serial<double>(const SourceSpec&,
                                                      const ExtractorTable&,
                                                      std::uint64_t);
template AlphaBetaT<Rational> alpha_beta_serial<Rational>(
    const SourceSpec&, const ExtractorTable&, std::uint64_t);

StrategyTree optimal_strategy(const SourceSpec& spec,
                              const ExtractorTable& table, Objective obj,
                              std::uint64_t budget) {
  if (table.alphabet_size != spec.alphabet_size) {
    throw SpecError("extractor table alphabet does not match the spec");
  }
  std::uint64_t leaves = checked_pow(spec.alphabet_size, table.depth, budget);
  auto dice = spec.dice_as<double>();

  StrategyTree tree;
  tree.alphabet_size = spec.alphabet_size;
  tree.depth = table.depth;
  tree.levels.resize(table.depth);

  std::vector<double> value(leaves);
  for (std::uint64_t i = 0; i < leaves; ++i) {
    value[i] = (table.labels[i] == 0) ? 1.0 : 0.0;
  }
  std::uint64_t count = leaves;
  for (int d = table.depth; d > 0; --d) {
    count /= spec.alphabet_size;
    std::vector<double> up(count);
    auto& choices = tree.levels[d - 1];
    choices.resize(count);
    for (std::uint64_t node = 0; node < count; ++node) {
      std::uint64_t base = node * spec.alphabet_size;
      double best = 0.0;
      int best_s = -1;
      for (std::size_t s = 0; s < dice.size(); ++s) {
        double e = 0.0;
        for (int c = 0; c < spec.alphabet_size; ++c) {
          e += dice[s][c] * value[base + c];
        }
        bool better = best_s < 0 || (obj == Objective::Min ? e < best : e > best);
        if (better) {
          best = e;
          best_s = static_cast<int>(s);
        }
      }
      up[node] = best;
      choices[node] = best_s;
    }
    value = std::move(up);
  }
  return tree;
}

namespace {

template <class R, bool Parallel>
PhiSetT<R> phi_set_impl(const SourceSpec& spec, int n, std::uint64_t budget) {
  std::uint64_t leaves = checked_pow(spec.alphabet_size, n, budget);
  if (leaves > 63) {
    throw BudgetError("phi_set: 2^" + std::to_string(leaves) +
                      " subsets cannot be enumerated");
  }
  checked_pow(2, static_cast<int>(leaves), budget);
  std::uint64_t subsets = std::uint64_t{1} << leaves;

  std::vector<std::pair<R, R>> pts(subsets);
  const std::int64_t isubsets = static_cast<std::int64_t>(subsets);
#pragma omp parallel for schedule(dynamic, 64) if (Parallel)
  for (std::int64_t mask = 0; mask < isubsets; ++mask) {
    ExtractorTable t;
    t.alphabet_size = spec.alphabet_size;
    t.depth = n;
    t.labels.resize(leaves);
    for (std::uint64_t i = 0; i < leaves; ++i) {
      // bit set in mask means string i is in I (extracted bit 0)
      t.labels[i] = (mask >> i) & 1 ? 0 : 1;
    }
    auto ab = alpha_beta_serial<R>(spec, t, budget);
    pts[mask] = {ab.alpha, ab.beta};
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  PhiSetT<R> out;
  out.n = n;
  out.points = std::move(pts);
  return out;
}

}  // namespace

template <class R>
PhiSetT<R> phi_set(const SourceSpec& spec, int n, std::uint64_t budget) {
  if (n == 0) {
    return {0, {{R(0), R(0)}, {R(1), R(1)}}};
  }
  return phi_set_impl<R, true>(spec, n, budget);
}

template <class R>
PhiSetT<R> phi_set_serial(const SourceSpec& spec, int n,
                          std::uint64_t budget) {
  if (n == 0) {
    return {0, {{R(0), R(0)}, {R(1), R(1)}}};
  }
  return phi_set_impl<R, false>(spec, n, budget);
}

template PhiSetT<double> phi_set<double>(const SourceSpec&, int,
                                         std::uint64_t);
template PhiSetT<Rational> phi_set<Rational>(const SourceSpec&, int,
                                             std::uint64_t);
template PhiSetT<double> phi_set_serial<double>(const SourceSpec&, int,
                                                std::uint64_t);
template PhiSetT<Rational> phi_set_serial<Rational>(const SourceSpec&, int,
                                                    std::uint64_t);

std::optional<GEpsilonCert> build_g_certificate(const SourceSpec& spec,
                                                double tol,
                                                std::uint64_t seed) {
  GEpsilonCert cert;
  cert.mf = 1.0;  // f(x) = x(1-x), |f'| <= 1 on [0,1]

  const int k = spec.alphabet_size;
  if (k == 2) {
    // The zero-uniform-mean unit sphere is {+-(1,-1)}; the spread has an
    // exact closed form.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& d : spec.dice) {
      double e = d.probs[0] - d.probs[1];
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
    cert.delta = hi - lo;
    cert.numerical = false;
    if (spec.has_exact()) {
      Rational rlo, rhi;
      bool first = true;
      for (const auto& d : *spec.exact_dice) {
        Rational e = d[0] - d[1];
        if (first) {
          rlo = rhi = e;
          first = false;
        } else {
          rlo = std::min(rlo, e);
          rhi = std::max(rhi, e);
        }
      }
      cert.delta_exact = rhi - rlo;
      // M_f = 1 exactly for f(x) = x(1-x)
      Rational bound = *cert.delta_exact / (Rational(2) * k);
      if (bound > 1) bound = 1;
      cert.epsilon_exact = bound / 2;
      cert.delta = to_double(*cert.delta_exact);
      cert.epsilon = to_double(*cert.epsilon_exact);
      if (cert.delta <= tol) return std::nullopt;
      return cert;
    }
  } else {
    // Orthonormal basis (uniform inner product) of {T : E_*[T] = 0}.
    std::vector<std::vector<double>> raw;
    for (int c = 0; c + 1 < k; ++c) {
      std::vector<double> v(k, 0.0);
      v[c] = 1.0;
      v[c + 1] = -1.0;
      raw.push_back(std::move(v));
    }
    std::vector<double> w(k, 1.0 / k);
    auto basis = orthonormalize(std::move(raw), w);
    std::vector<std::vector<double>> exps;
    for (const auto& d : spec.dice) exps.push_back(d.probs);
    auto r = min_spread_on_sphere(exps, basis, 64, 1u << 20, seed);
    cert.delta = r.value;
    cert.numerical = !r.exact_closed_form;
  }

  if (cert.delta <= tol) return std::nullopt;
  cert.epsilon =
      0.5 * std::min(1.0 / cert.mf, cert.delta / (2.0 * cert.mf * k));
  return cert;
}

bool check_g_dominates(const GEpsilonCert& cert, const PhiSet& phi,
                       double slack) {
  for (const auto& [a, b] : phi.points) {
    if (b < cert.g(a) - slack) return false;
  }
  return true;
}

namespace {

std::string history_string(std::uint64_t rank, int alphabet, int len) {
  auto symbols = unrank_string(rank, alphabet, len);
  std::string s;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(symbols[i]);
  }
  return s.empty() ? "(root)" : s;
}

}  // namespace

TiltResult tilt_adversary(const SourceSpec& spec, const ExtractorTable& table,
                          const Distribution& q, double eps,
                          std::uint64_t budget) {
  if (table.alphabet_size != spec.alphabet_size) {
    throw SpecError("extractor table alphabet does not match the spec");
  }
  auto dice = spec.dice_as<double>();
  auto interior = hull_membership(dice, q.probs, 1e-6);
  if (!interior.feasible) {
    throw HullError("q is not interior to the convex hull of the dice");
  }

  const int n = table.depth;
  const int k = spec.alphabet_size;
  std::uint64_t leaves = checked_pow(k, n, budget);

  // i.i.d. leaf masses under q.
  std::vector<double> qn(leaves, 1.0);
  for_each_string(k, n, budget, [&](std::uint64_t r, std::span<const int> s) {
    double m = 1.0;
    for (int c : s) m *= q.probs[c];
    qn[r] = m;
  });

  TiltResult out;
  double qi = 0.0;
  for (std::uint64_t r = 0; r < leaves; ++r) {
    if (table.labels[r] == 0) qi += qn[r];
  }
  out.complemented = qi < 0.5;
  auto in_working = [&](std::uint64_t r) {
    return out.complemented ? table.labels[r] == 1 : table.labels[r] == 0;
  };

  // Greedy minimal half-mass subset: drop heaviest strings while >= 1/2.
  std::vector<std::uint64_t> working;
  double mass = 0.0;
  for (std::uint64_t r = 0; r < leaves; ++r) {
    if (in_working(r)) {
      working.push_back(r);
      mass += qn[r];
    }
  }
  std::sort(working.begin(), working.end(),
            [&](std::uint64_t a, std::uint64_t b) {
              if (qn[a] != qn[b]) return qn[a] > qn[b];
              return a < b;
            });
  std::vector<std::uint8_t> in_i0(leaves, 0);
  double q0 = mass;
  std::vector<std::uint64_t> kept;
  for (std::uint64_t r : working) {
    if (q0 - qn[r] >= 0.5) {
      q0 -= qn[r];
    } else {
      kept.push_back(r);
    }
  }
  for (std::uint64_t r : kept) in_i0[r] = 1;
  out.q_mass_i0 = q0;

  if ((1.0 + eps) * q0 > 1.0 + 1e-15) {
    throw HullError("eps too large: tilted mass (1+eps) * " +
                    std::to_string(q0) + " exceeds 1");
  }
  double kappa = (q0 < 1.0) ? (1.0 - (1.0 + eps) * q0) / (1.0 - q0) : 0.0;

  // Conditional-in-I0 mass w(prefix), bottom-up.
  std::vector<std::vector<double>> w(n + 1);
  w[n].resize(leaves);
  for (std::uint64_t r = 0; r < leaves; ++r) w[n][r] = in_i0[r] ? 1.0 : 0.0;
  for (int len = n - 1; len >= 0; --len) {
    std::uint64_t count = upow(k, len);
    w[len].resize(count);
    for (std::uint64_t r = 0; r < count; ++r) {
      double acc = 0.0;
      for (int c = 0; c < k; ++c) acc += q.probs[c] * w[len + 1][r * k + c];
      w[len][r] = acc;
    }
  }
  auto tilt_factor = [&](int len, std::uint64_t r) {
    return (1.0 + eps) * w[len][r] + kappa * (1.0 - w[len][r]);
  };

  out.conditionals.resize(n);
  out.hull_weights.resize(n);
  for (int len = 0; len < n; ++len) {
    std::uint64_t count = upow(k, len);
    out.conditionals[len].resize(count);
    out.hull_weights[len].resize(count);
    for (std::uint64_t r = 0; r < count; ++r) {
      double parent = tilt_factor(len, r);
      std::vector<double> cond(k);
      for (int c = 0; c < k; ++c) {
        cond[c] = q.probs[c] * tilt_factor(len + 1, r * k + c) / parent;
      }
      auto hm = hull_membership(dice, cond, 0.0);
      if (!hm.feasible) {
        std::ostringstream os;
        os << "eps too large: tilted conditional at history "
           << history_string(r, k, len) << " leaves the dice hull (p-tilde = ";
        for (int c = 0; c < k; ++c) os << (c ? "," : "") << cond[c];
        os << ")";
        throw HullError(os.str(), history_string(r, k, len));
      }
      out.conditionals[len][r] = std::move(cond);
      out.hull_weights[len][r] = std::move(hm.weights);
    }
  }

  double achieved = 0.0;
  for (std::uint64_t r = 0; r < leaves; ++r) {
    if (in_working(r)) {
      achieved += qn[r] * (in_i0[r] ? (1.0 + eps) : kappa);
    }
  }
  out.achieved = achieved;
  return out;
}

}  // namespace svx
