#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "svx/rational.hpp"

namespace svx {

template <class R>
inline R scalar_abs(const R& x) {
  return x < R(0) ? R(-x) : x;
}
template <>
inline double scalar_abs<double>(const double& x) {
  return std::fabs(x);
}

// Nullspace basis of the rows-by-cols matrix via Gaussian elimination to
// reduced row echelon form with partial pivoting. For doubles a pivot counts
// as zero when its magnitude is below pivot_rel_tol times the largest entry
// of the input; exact types pivot on any nonzero.
template <class R>
std::vector<std::vector<R>> nullspace_basis(std::vector<std::vector<R>> m,
                                            int cols,
                                            double pivot_rel_tol = 1e-10) {
  int rows = static_cast<int>(m.size());
  R max_abs(0);
  for (const auto& row : m)
    for (const auto& v : row)
      if (scalar_abs(v) > max_abs) max_abs = scalar_abs(v);

  R threshold(0);
  if constexpr (std::is_same_v<R, double>) {
    threshold = pivot_rel_tol * (max_abs > 0 ? max_abs : 1.0);
  }

  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int best = -1;
    R best_abs = threshold;
    for (int i = r; i < rows; ++i) {
      if (scalar_abs(m[i][c]) > best_abs) {
        best_abs = scalar_abs(m[i][c]);
        best = i;
      }
    }
    if (best < 0) continue;
    std::swap(m[r], m[best]);
    R inv_p = m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] = m[r][j] / inv_p;
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      R f = m[i][c];
      if (f == R(0)) continue;
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;

  std::vector<std::vector<R>> basis;
  for (int c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<R> v(cols, R(0));
    v[c] = R(1);
    for (std::size_t k = 0; k < pivot_col.size(); ++k) {
      v[pivot_col[k]] = -m[k][c];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

struct HullMembership {
  bool feasible = false;
  std::vector<double> weights;  // lambda per die when feasible
};

// Tests whether q is a convex combination of the given points with every
// weight >= min_weight (phase-1 simplex on the equality system).
HullMembership hull_membership(const std::vector<std::vector<double>>& points,
                               const std::vector<double>& q,
                               double min_weight = 0.0, double tol = 1e-9);

struct SphereMinResult {
  double value = 0.0;
  std::vector<double> argmin;  // in original coordinates
  bool exact_closed_form = false;
};

// Minimum over the unit Euclidean sphere of span(basis) of
//   max_s f_s . x  -  min_s f_s . x
// where basis is orthonormal. Closed form in dimension 1; otherwise
// multi-start projected subgradient descent cross-checked against random
// sphere samples (the reported value never exceeds the sample minimum).
SphereMinResult min_spread_on_sphere(
    const std::vector<std::vector<double>>& functionals,
    const std::vector<std::vector<double>>& basis, int restarts = 64,
    std::uint64_t samples = 1u << 20, std::uint64_t seed = 12345);

// Minimum over the unit sphere (coordinates of the given orthonormal basis)
// of sqrt((x^T A x) / (x^T B x)), for PSD quadratic forms given in basis
// coordinates. Directions with x^T B x = 0 are skipped (ratio unbounded).
SphereMinResult min_quad_ratio_on_sphere(
    const std::vector<std::vector<double>>& num_form,
    const std::vector<std::vector<double>>& den_form, int restarts = 64,
    std::uint64_t samples = 1u << 20, std::uint64_t seed = 54321);

// Gram-Schmidt against inner product <x,y> = sum_i w_i x_i y_i; drops
// near-dependent vectors (norm <= tol after projection).
std::vector<std::vector<double>> orthonormalize(
    std::vector<std::vector<double>> vecs, const std::vector<double>& weights,
    double tol = 1e-12);

}  // namespace svx
