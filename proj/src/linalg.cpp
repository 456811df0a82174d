#include "svx/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "svx/common.hpp"
#include "svx/rng.hpp"

namespace svx {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void normalize(std::vector<double>& a) {
  double n = norm2(a);
  if (n > 0) {
    for (auto& v : a) v /= n;
  }
}

// spread of the reduced functionals g at point u, with argmax/argmin out.
double spread_at(const std::vector<std::vector<double>>& g,
                 const std::vector<double>& u, int* smax = nullptr,
                 int* smin = nullptr) {
  double mx = -std::numeric_limits<double>::infinity();
  double mn = std::numeric_limits<double>::infinity();
  int imax = 0, imin = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    double v = dot(g[s], u);
    if (v > mx) {
      mx = v;
      imax = static_cast<int>(s);
    }
    if (v < mn) {
      mn = v;
      imin = static_cast<int>(s);
    }
  }
  if (smax) *smax = imax;
  if (smin) *smin = imin;
  return mx - mn;
}

std::vector<double> random_unit(SplitMix64& rng, int dim) {
  std::vector<double> u(dim);
  // Box-Muller pairs; good enough isotropy for restart seeds and sampling.
  for (int i = 0; i < dim; i += 2) {
    double a = rng.uniform(), b = rng.uniform();
    a = std::max(a, 1e-300);
    double r = std::sqrt(-2.0 * std::log(a));
    u[i] = r * std::cos(2.0 * M_PI * b);
    if (i + 1 < dim) u[i + 1] = r * std::sin(2.0 * M_PI * b);
  }
  normalize(u);
  return u;
}

}  // namespace

HullMembership hull_membership(const std::vector<std::vector<double>>& points,
                               const std::vector<double>& q,
                               double min_weight, double tol) {
  // Feasibility of: sum_s mu_s p_s(c) = q(c) - min_weight * sum_s p_s(c),
  // sum_s mu_s = 1 - S*min_weight, mu >= 0, via phase-1 simplex with one
  // artificial per row (Bland's rule, no cycling).
  int num_points = static_cast<int>(points.size());
  int dim = static_cast<int>(q.size());
  int rows = dim + 1;
  int cols = num_points + rows;  // mu variables then artificials

  std::vector<double> rhs(rows, 0.0);
  for (int c = 0; c < dim; ++c) {
    rhs[c] = q[c];
    for (int s = 0; s < num_points; ++s) rhs[c] -= min_weight * points[s][c];
  }
  rhs[dim] = 1.0 - num_points * min_weight;
  if (rhs[dim] < -tol) return {};  // slack alone exceeds total mass

  std::vector<std::vector<double>> a(rows, std::vector<double>(cols, 0.0));
  for (int c = 0; c < dim; ++c)
    for (int s = 0; s < num_points; ++s) a[c][s] = points[s][c];
  for (int s = 0; s < num_points; ++s) a[dim][s] = 1.0;

  // Flip rows so rhs >= 0, then add identity artificials.
  for (int r = 0; r < rows; ++r) {
    if (rhs[r] < 0) {
      rhs[r] = -rhs[r];
      for (int j = 0; j < num_points; ++j) a[r][j] = -a[r][j];
    }
    a[r][num_points + r] = 1.0;
  }

  std::vector<int> basis(rows);
  std::iota(basis.begin(), basis.end(), num_points);

  // Phase-1 objective: minimize sum of artificials.
  std::vector<double> z(cols, 0.0);
  double zval = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int j = 0; j < cols; ++j) z[j] += a[r][j];
    zval += rhs[r];
  }

  for (int iter = 0; iter < 10000; ++iter) {
    int enter = -1;
    for (int j = 0; j < num_points; ++j) {
      if (basis.end() != std::find(basis.begin(), basis.end(), j)) continue;
      if (z[j] > tol) {
        enter = j;
        break;  // Bland: first improving column
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      if (a[r][enter] > tol) {
        double ratio = rhs[r] / a[r][enter];
        if (ratio < best_ratio - 1e-15 ||
            (std::fabs(ratio - best_ratio) <= 1e-15 && leave >= 0 &&
             basis[r] < basis[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) break;  // unbounded; cannot happen with artificials
    double piv = a[leave][enter];
    for (int j = 0; j < cols; ++j) a[leave][j] /= piv;
    rhs[leave] /= piv;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      double f = a[r][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < cols; ++j) a[r][j] -= f * a[leave][j];
      rhs[r] -= f * rhs[leave];
    }
    double fz = z[enter];
    for (int j = 0; j < cols; ++j) z[j] -= fz * a[leave][j];
    zval -= fz * rhs[leave];
    basis[leave] = enter;
  }

  if (zval > tol) return {};

  HullMembership out;
  out.feasible = true;
  out.weights.assign(num_points, min_weight);
  for (int r = 0; r < rows; ++r) {
    if (basis[r] < num_points) out.weights[basis[r]] += std::max(0.0, rhs[r]);
  }
  return out;
}

SphereMinResult min_spread_on_sphere(
    const std::vector<std::vector<double>>& functionals,
    const std::vector<std::vector<double>>& basis, int restarts,
    std::uint64_t samples, std::uint64_t seed) {
  SphereMinResult res;
  int k = static_cast<int>(basis.size());
  if (k == 0) {
    res.value = std::numeric_limits<double>::infinity();
    res.exact_closed_form = true;
    return res;
  }
  int dim = static_cast<int>(basis[0].size());

  // Reduce functionals to basis coordinates.
  std::vector<std::vector<double>> g(functionals.size(),
                                     std::vector<double>(k, 0.0));
  for (std::size_t s = 0; s < functionals.size(); ++s)
    for (int j = 0; j < k; ++j) g[s][j] = dot(functionals[s], basis[j]);

  auto to_original = [&](const std::vector<double>& u) {
    std::vector<double> x(dim, 0.0);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < dim; ++i) x[i] += u[j] * basis[j][i];
    return x;
  };

  if (k == 1) {
    std::vector<double> u{1.0};
    res.value = spread_at(g, u);
    res.argmin = to_original(u);
    res.exact_closed_form = true;
    return res;
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_u;
  SplitMix64 rng(seed);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> u = random_unit(rng, k);
    double fu = spread_at(g, u);
    double step = 0.5;
    for (int it = 0; it < 800 && step > 1e-10; ++it) {
      int smax, smin;
      spread_at(g, u, &smax, &smin);
      std::vector<double> grad(k);
      for (int j = 0; j < k; ++j) grad[j] = g[smax][j] - g[smin][j];
      double gu = dot(grad, u);
      for (int j = 0; j < k; ++j) grad[j] -= gu * u[j];  // tangent projection
      std::vector<double> cand(k);
      for (int j = 0; j < k; ++j) cand[j] = u[j] - step * grad[j];
      normalize(cand);
      double fc = spread_at(g, cand);
      if (fc < fu) {
        u = cand;
        fu = fc;
      } else {
        step *= 0.7;
      }
    }
    if (fu < best) {
      best = fu;
      best_u = u;
    }
  }

  // Random-sampling cross-check; the reported minimum never exceeds it.
  SplitMix64 srng(seed ^ 0xabcdef12345678ULL);
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::vector<double> u = random_unit(srng, k);
    double f = spread_at(g, u);
    if (f < best) {
      best = f;
      best_u = u;
    }
  }

  res.value = best;
  res.argmin = to_original(best_u);
  return res;
}

SphereMinResult min_quad_ratio_on_sphere(
    const std::vector<std::vector<double>>& num_form,
    const std::vector<std::vector<double>>& den_form, int restarts,
    std::uint64_t samples, std::uint64_t seed) {
  SphereMinResult res;
  int k = static_cast<int>(num_form.size());
  if (k == 0) {
    res.value = std::numeric_limits<double>::infinity();
    res.exact_closed_form = true;
    return res;
  }

  auto quad = [&](const std::vector<std::vector<double>>& f,
                  const std::vector<double>& u) {
    double s = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) s += u[i] * f[i][j] * u[j];
    return std::max(0.0, s);
  };
  auto ratio2 = [&](const std::vector<double>& u) {
    double den = quad(den_form, u);
    if (den <= 1e-300) return std::numeric_limits<double>::infinity();
    return quad(num_form, u) / den;
  };

  if (k == 1) {
    std::vector<double> u{1.0};
    res.value = std::sqrt(ratio2(u));
    res.argmin = u;
    res.exact_closed_form = true;
    return res;
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_u;
  SplitMix64 rng(seed);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> u = random_unit(rng, k);
    double fu = ratio2(u);
    double step = 0.5;
    for (int it = 0; it < 800 && step > 1e-12; ++it) {
      // gradient of (u'Au)/(u'Bu)
      std::vector<double> au(k, 0.0), bu(k, 0.0);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          au[i] += num_form[i][j] * u[j];
          bu[i] += den_form[i][j] * u[j];
        }
      double a = dot(au, u), b = dot(bu, u);
      if (b <= 1e-300) break;
      std::vector<double> grad(k);
      for (int i = 0; i < k; ++i)
        grad[i] = 2.0 * (au[i] * b - a * bu[i]) / (b * b);
      double gu = dot(grad, u);
      for (int i = 0; i < k; ++i) grad[i] -= gu * u[i];
      std::vector<double> cand(k);
      for (int i = 0; i < k; ++i) cand[i] = u[i] - step * grad[i];
      normalize(cand);
      double fc = ratio2(cand);
      if (fc < fu) {
        u = cand;
        fu = fc;
      } else {
        step *= 0.7;
      }
    }
    if (fu < best) {
      best = fu;
      best_u = u;
    }
  }

  SplitMix64 srng(seed ^ 0x5f5f5f5f5f5fULL);
  for (std::uint64_t i = 0; i < samples; ++i) {
    std::vector<double> u = random_unit(srng, k);
    double f = ratio2(u);
    if (f < best) {
      best = f;
      best_u = u;
    }
  }

  res.value = std::sqrt(best);
  res.argmin = best_u;
  return res;
}

std::vector<std::vector<double>> orthonormalize(
    std::vector<std::vector<double>> vecs, const std::vector<double>& weights,
    double tol) {
  std::vector<std::vector<double>> out;
  auto wip = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += weights[i] * a[i] * b[i];
    return s;
  };
  for (auto& v : vecs) {
    for (const auto& u : out) {
      double c = wip(v, u);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
    }
    // re-orthogonalize once for numerical safety
    for (const auto& u : out) {
      double c = wip(v, u);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
    }
    double n = std::sqrt(wip(v, v));
    if (n <= tol) continue;
    for (auto& x : v) x /= n;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace svx
