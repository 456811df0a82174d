#include "svx/binary_sv.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svx {

SourceSpec binary_sv_spec(double delta) {
  SourceSpec s;
  s.alphabet_size = 2;
  s.dice = {Distribution{{delta, 1.0 - delta}},
            Distribution{{1.0 - delta, delta}}};
  return s;
}

SourceSpec binary_sv_spec(const Rational& delta) {
  SourceSpec s = binary_sv_spec(to_double(delta));
  s.exact_dice = {{delta, 1 - delta}, {1 - delta, delta}};
  return s;
}

namespace {

template <bool Parallel>
std::vector<CurvePoint> curve_impl(double delta, int n_max) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw SpecError("curve emission needs delta in (0, 1/2)");
  }
  if (n_max < 1 || n_max > 20) {
    throw BudgetError("curve n_max must be in [1, 20]");
  }
  std::uint64_t count = std::uint64_t{1} << n_max;
  std::vector<CurvePoint> pts(count + 1);
  const std::int64_t icount = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) if (Parallel && icount > 1024)
  for (std::int64_t v = 0; v < icount; ++v) {
    double a = base_delta_int<double>(static_cast<std::uint64_t>(v), n_max,
                                      1.0 - delta);
    double b =
        base_delta_int<double>(static_cast<std::uint64_t>(v), n_max, delta);
    pts[v] = {a, b};
  }
  pts[count] = {1.0, 1.0};
  std::sort(pts.begin(), pts.end(), [](const CurvePoint& l, const CurvePoint& r) {
    return l.alpha != r.alpha ? l.alpha < r.alpha : l.beta < r.beta;
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const CurvePoint& l, const CurvePoint& r) {
                          return l.alpha == r.alpha && l.beta == r.beta;
                        }),
            pts.end());
  return pts;
}

}  // namespace

std::vector<CurvePoint> f_delta_curve(double delta, int n_max) {
  return curve_impl<true>(delta, n_max);
}

std::vector<CurvePoint> f_delta_curve_serial(double delta, int n_max) {
  return curve_impl<false>(delta, n_max);
}

double curve_gap_to_half(const std::vector<CurvePoint>& points) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    gap = std::min(gap, std::max(std::fabs(p.alpha - 0.5),
                                 std::fabs(p.beta - 0.5)));
  }
  return gap;
}

ExtractorTable left_prefix_table(int n, std::uint64_t x) {
  std::uint64_t leaves = upow(2, n);
  if (x > leaves) {
    throw SpecError("left prefix size " + std::to_string(x) +
                    " exceeds 2^n = " + std::to_string(leaves));
  }
  ExtractorTable t;
  t.alphabet_size = 2;
  t.depth = n;
  t.labels.resize(leaves);
  for (std::uint64_t i = 0; i < leaves; ++i) t.labels[i] = i < x ? 0 : 1;
  return t;
}

bool verify_prefix_optimality(const Rational& delta, int n) {
  if (n > 4) throw BudgetError("prefix optimality is exhausted only to n = 4");
  SourceSpec spec = binary_sv_spec(delta);
  std::uint64_t leaves = upow(2, n);
  std::uint64_t subsets = std::uint64_t{1} << leaves;

  std::vector<Rational> expected(leaves + 1);
  for (std::uint64_t x = 0; x <= leaves; ++x) {
    expected[x] = base_delta_int<Rational>(x, n, delta);
  }

  bool ok = true;
#pragma omp parallel for schedule(dynamic, 64) reduction(&& : ok)
  for (std::int64_t mask = 0; mask < static_cast<std::int64_t>(subsets);
       ++mask) {
    ExtractorTable t;
    t.alphabet_size = 2;
    t.depth = n;
    t.labels.resize(leaves);
    int size = 0;
    for (std::uint64_t i = 0; i < leaves; ++i) {
      bool in = (mask >> i) & 1;
      t.labels[i] = in ? 0 : 1;
      size += in;
    }
    auto ab = alpha_beta_serial<Rational>(spec, t);
    bool local = ab.beta >= expected[size];
    // left prefix of this size: low ranks all in I
    bool is_prefix = mask == static_cast<std::int64_t>(
                                 size == 64 ? ~std::uint64_t{0}
                                            : (std::uint64_t{1} << size) - 1);
    if (is_prefix && ab.beta != expected[size]) local = false;
    ok = ok && local;
  }
  return ok;
}

BaseDeltaLemmaResult verify_basedelta_lemma(
    int n_max, const std::vector<Rational>& deltas_in) {
  if (n_max > 8) throw BudgetError("basedelta lemma sweep capped at n_max = 8");
  std::vector<Rational> deltas = deltas_in;
  if (deltas.empty()) {
    for (int k = 1; k <= 19; ++k) deltas.emplace_back(k, 40);
  }

  BaseDeltaLemmaResult res;
  for (const Rational& delta : deltas) {
    Rational ratio = delta / (1 - delta);
    for (int n = 1; n <= n_max && res.ok; ++n) {
      std::uint64_t count = std::uint64_t{1} << n;
      // expansions of every n-bit string, plus (n+1)-bit for the remark form
      std::vector<Rational> dn(count), dn1(2 * count);
      for (std::uint64_t v = 0; v < count; ++v) {
        dn[v] = base_delta_int<Rational>(v, n, delta);
      }
      for (std::uint64_t v = 0; v < 2 * count; ++v) {
        dn1[v] = base_delta_int<Rational>(v, n + 1, delta);
      }
      for (std::uint64_t x = 0; x < count && res.ok; ++x) {
        for (std::uint64_t y = 0; y <= x; ++y) {
          // main form: same-length sum without overflow
          if (x + y < count) {
            ++res.triples_checked;
            if (dn[x] + ratio * dn[y] < dn[x + y]) {
              res.ok = false;
              res.counterexample = {n, x, y, x + y, delta, false};
              break;
            }
          }
          // remark form: integers x + y = z with z of length n + 1
          ++res.triples_checked;
          if ((1 - delta) * dn[x] + delta * dn[y] < dn1[x + y]) {
            res.ok = false;
            res.counterexample = {n, x, y, x + y, delta, true};
            break;
          }
        }
      }
    }
    if (!res.ok) break;
  }
  return res;
}

std::vector<std::pair<double, double>> domination_frontier(
    std::vector<std::pair<double, double>> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  // sort by alpha asc, beta desc; a point survives iff its beta exceeds
  // every beta seen so far (strictly, since earlier points have alpha <=).
  std::sort(points.begin(), points.end(), [](const auto& l, const auto& r) {
    return l.first != r.first ? l.first < r.first : l.second > r.second;
  });
  std::vector<std::pair<double, double>> out;
  double best_beta = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    if (p.second > best_beta) {
      out.push_back(p);
      best_beta = p.second;
    }
  }
  return out;
}

bool cloud_dominates_curve(const std::vector<std::pair<double, double>>& cloud,
                           const std::vector<CurvePoint>& curve,
                           double slack) {
  // curve is sorted by alpha with beta nondecreasing along it, so the best
  // candidate at or right of a given alpha is the first one: suffix minima
  // of beta are just the betas themselves.
  std::vector<double> alphas;
  alphas.reserve(curve.size());
  for (const auto& p : curve) alphas.push_back(p.alpha);
  for (const auto& [a, b] : cloud) {
    auto it = std::lower_bound(alphas.begin(), alphas.end(), a - slack);
    if (it == alphas.end()) return false;
    double beta_f =
        curve[static_cast<std::size_t>(std::distance(alphas.begin(), it))]
            .beta;
    if (beta_f > b + slack) return false;
  }
  return true;
}

}  // namespace svx
