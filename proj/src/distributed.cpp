#include "svx/distributed.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "svx/adversary.hpp"
#include "svx/linalg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svx {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

CommonPart common_part(const std::vector<JointMatrix>& joints,
                       double support_tol) {
  if (joints.empty()) throw SpecError("common_part: no joints");
  int na = static_cast<int>(joints[0].size());
  int nb = static_cast<int>(joints[0][0].size());
  UnionFind uf(na + nb);
  std::vector<bool> has_edge(na + nb, false);
  for (const auto& m : joints) {
    for (int a = 0; a < na; ++a) {
      for (int b = 0; b < nb; ++b) {
        if (m[a][b] > support_tol) {
          uf.unite(a, na + b);
          has_edge[a] = true;
          has_edge[na + b] = true;
        }
      }
    }
  }
  CommonPart part;
  part.component_of_a.resize(na);
  part.component_of_b.resize(nb);
  std::vector<int> id_of_root(na + nb, -1);
  int next = 0;
  for (int v = 0; v < na + nb; ++v) {
    int r = uf.find(v);
    if (id_of_root[r] < 0) id_of_root[r] = next++;
    (v < na ? part.component_of_a[v] : part.component_of_b[v - na]) =
        id_of_root[r];
  }
  part.num_components = next;
  std::vector<bool> nonsingleton(next, false);
  for (int v = 0; v < na + nb; ++v) {
    if (has_edge[v]) {
      nonsingleton[id_of_root[uf.find(v)]] = true;
    }
  }
  part.num_nonsingleton =
      static_cast<int>(std::count(nonsingleton.begin(), nonsingleton.end(),
                                  true));
  return part;
}

MaxCorrResult maximal_correlation(const JointMatrix& joint) {
  int na = static_cast<int>(joint.size());
  int nb = static_cast<int>(joint[0].size());
  std::vector<double> pa(na, 0.0), pb(nb, 0.0);
  for (int a = 0; a < na; ++a)
    for (int b = 0; b < nb; ++b) {
      pa[a] += joint[a][b];
      pb[b] += joint[a][b];
    }
  std::vector<int> sa, sb;
  for (int a = 0; a < na; ++a)
    if (pa[a] > kSupportTol) sa.push_back(a);
  for (int b = 0; b < nb; ++b)
    if (pb[b] > kSupportTol) sb.push_back(b);

  MaxCorrResult res;
  if (sa.empty() || sb.empty()) throw SpecError("joint has no mass");
  if (sa.size() < 2 || sb.size() < 2) {
    res.degenerate = true;  // a constant side: independent by convention
    return res;
  }

  int ma = static_cast<int>(sa.size()), mb = static_cast<int>(sb.size());
  Eigen::MatrixXd q(ma, mb);
  Eigen::VectorXd ra(ma), rb(mb);
  for (int i = 0; i < ma; ++i) ra(i) = std::sqrt(pa[sa[i]]);
  for (int j = 0; j < mb; ++j) rb(j) = std::sqrt(pb[sb[j]]);
  for (int i = 0; i < ma; ++i)
    for (int j = 0; j < mb; ++j)
      q(i, j) = joint[sa[i]][sb[j]] / (ra(i) * rb(j));

  // (sqrt pa, sqrt pb) is always a singular pair with value 1; deflate it
  // so the top remaining pair is the maximal correlation even when the
  // graph is disconnected (value-1 multiplicity).
  q -= ra * rb.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      q, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double rho = svd.singularValues()(0);
  res.rho = std::clamp(rho, 0.0, 1.0);
  res.witness_x.assign(na, 0.0);
  res.witness_y.assign(nb, 0.0);
  for (int i = 0; i < ma; ++i)
    res.witness_x[sa[i]] = svd.matrixU()(i, 0) / ra(i);
  for (int j = 0; j < mb; ++j)
    res.witness_y[sb[j]] = svd.matrixV()(j, 0) / rb(j);
  return res;
}

double conditional_maximal_correlation(const JointMatrix& joint,
                                       const CommonPart& part) {
  int na = static_cast<int>(joint.size());
  int nb = static_cast<int>(joint[0].size());
  double best = 0.0;
  for (int comp = 0; comp < part.num_components; ++comp) {
    std::vector<int> as, bs;
    for (int a = 0; a < na; ++a)
      if (part.component_of_a[a] == comp) as.push_back(a);
    for (int b = 0; b < nb; ++b)
      if (part.component_of_b[b] == comp) bs.push_back(b);
    if (as.empty() || bs.empty()) continue;
    double mass = 0.0;
    JointMatrix block(as.size(), std::vector<double>(bs.size(), 0.0));
    for (std::size_t i = 0; i < as.size(); ++i)
      for (std::size_t j = 0; j < bs.size(); ++j) {
        block[i][j] = joint[as[i]][bs[j]];
        mass += block[i][j];
      }
    if (mass <= kSupportTol) continue;
    for (auto& row : block)
      for (auto& v : row) v /= mass;
    best = std::max(best, maximal_correlation(block).rho);
  }
  return best;
}

InducedCommonSpec induced_common_spec(const JointSourceSpec& jspec) {
  InducedCommonSpec out;
  out.part = common_part(jspec.dice);
  const auto& part = out.part;

  // symbols = components that carry support, in canonical id order
  std::vector<bool> carries(part.num_components, false);
  for (int s = 0; s < jspec.num_dice(); ++s) {
    for (int a = 0; a < jspec.a_size; ++a)
      for (int b = 0; b < jspec.b_size; ++b)
        if (jspec.prob(s, a, b) > kSupportTol)
          carries[part.component_of_a[a]] = true;
  }
  std::vector<int> symbol_of_comp(part.num_components, -1);
  int next = 0;
  for (int c = 0; c < part.num_components; ++c)
    if (carries[c]) symbol_of_comp[c] = next++;

  out.a_to_symbol.resize(jspec.a_size);
  out.b_to_symbol.resize(jspec.b_size);
  for (int a = 0; a < jspec.a_size; ++a)
    out.a_to_symbol[a] = symbol_of_comp[part.component_of_a[a]];
  for (int b = 0; b < jspec.b_size; ++b)
    out.b_to_symbol[b] = symbol_of_comp[part.component_of_b[b]];

  out.spec.alphabet_size = next;
  for (int s = 0; s < jspec.num_dice(); ++s) {
    std::vector<double> p(next, 0.0);
    for (int a = 0; a < jspec.a_size; ++a)
      for (int b = 0; b < jspec.b_size; ++b) {
        int sym = symbol_of_comp[part.component_of_a[a]];
        if (sym >= 0) p[sym] += jspec.prob(s, a, b);
      }
    out.spec.dice.push_back(Distribution{std::move(p)});
  }
  return out;
}

JointSourceSpec perturb_spec(const JointSourceSpec& jspec, double tau) {
  if (tau < 0.0 || tau > 1.0) throw SpecError("tau must be in [0, 1]");
  JointSourceSpec out = jspec;
  int ns = jspec.num_dice();
  JointMatrix avg(jspec.a_size, std::vector<double>(jspec.b_size, 0.0));
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < jspec.a_size; ++a)
      for (int b = 0; b < jspec.b_size; ++b)
        avg[a][b] += jspec.prob(s, a, b) / ns;
  for (int s = 0; s < ns; ++s)
    for (int a = 0; a < jspec.a_size; ++a)
      for (int b = 0; b < jspec.b_size; ++b)
        out.dice[s][a][b] =
            (1.0 - tau) * jspec.prob(s, a, b) + tau * avg[a][b];

  if (tau > 0.0) {
    // support of every perturbed die must be s-independent
    for (int s = 1; s < ns; ++s)
      for (int a = 0; a < jspec.a_size; ++a)
        for (int b = 0; b < jspec.b_size; ++b)
          if ((out.dice[s][a][b] > kSupportTol) !=
              (out.dice[0][a][b] > kSupportTol)) {
            throw SpecError("perturbed support is not s-independent");
          }
    CommonPart before = common_part(jspec.dice);
    CommonPart after = common_part(out.dice);
    if (before.component_of_a != after.component_of_a ||
        before.component_of_b != after.component_of_b) {
      throw SpecError("perturbation changed the common part");
    }
  }
  return out;
}

namespace {

// component masses seen from the A side
std::vector<double> component_masses(const std::vector<double>& marginal,
                                     const std::vector<int>& comp_of,
                                     int num_components) {
  std::vector<double> m(num_components, 0.0);
  for (std::size_t i = 0; i < marginal.size(); ++i)
    m[comp_of[i]] += marginal[i];
  return m;
}

struct SideData {
  std::vector<std::vector<double>> marginals;  // per die
  std::vector<int> comp_of;
};

// min over dice of the L'-sphere ratio ||U'||_s / ||U||_s for one side;
// +inf when L' is trivial.
double side_delta_prime(const SideData& side, int num_components,
                        std::uint64_t seed) {
  int dim = static_cast<int>(side.comp_of.size());
  int ns = static_cast<int>(side.marginals.size());

  std::vector<std::vector<double>> rows;
  for (int s = 1; s < ns; ++s) {
    std::vector<double> r(dim);
    for (int i = 0; i < dim; ++i)
      r[i] = side.marginals[s][i] - side.marginals[0][i];
    rows.push_back(std::move(r));
  }
  auto null_l = nullspace_basis(rows, dim);  // spans L (contains constants)

  // orthonormalize with the constant vector first, then drop it: the rest
  // spans L' = L intersect 1-perp (uniform inner product)
  std::vector<double> w(dim, 1.0 / dim);
  std::vector<std::vector<double>> pre;
  pre.emplace_back(dim, 1.0);
  for (auto& v : null_l) pre.push_back(std::move(v));
  auto onb = orthonormalize(std::move(pre), w);
  std::vector<std::vector<double>> basis(onb.begin() + 1, onb.end());
  int k = static_cast<int>(basis.size());
  if (k == 0) return std::numeric_limits<double>::infinity();

  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < ns; ++s) {
    const auto& p = side.marginals[s];
    auto pc = component_masses(p, side.comp_of, num_components);
    // conditional-expectation projection of each basis vector
    std::vector<std::vector<double>> u(k, std::vector<double>(dim, 0.0));
    std::vector<std::vector<double>> uprime(k,
                                            std::vector<double>(dim, 0.0));
    for (int i = 0; i < k; ++i) {
      std::vector<double> cond(num_components, 0.0);
      for (int a = 0; a < dim; ++a)
        cond[side.comp_of[a]] += p[a] * basis[i][a];
      for (int a = 0; a < dim; ++a) {
        double pcm = pc[side.comp_of[a]];
        u[i][a] = pcm > 0.0 ? cond[side.comp_of[a]] / pcm : 0.0;
        uprime[i][a] = basis[i][a] - u[i][a];
      }
    }
    auto form = [&](const std::vector<std::vector<double>>& vecs) {
      std::vector<std::vector<double>> f(k, std::vector<double>(k, 0.0));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          double acc = 0.0;
          for (int a = 0; a < dim; ++a) acc += p[a] * vecs[i][a] * vecs[j][a];
          f[i][j] = acc;
        }
      return f;
    };
    auto r = min_quad_ratio_on_sphere(form(uprime), form(u), 64, 1u << 20,
                                      seed + s);
    best = std::min(best, r.value);
  }
  return best;
}

}  // namespace

DeltaConstants compute_delta_constants(const JointSourceSpec& jspec,
                                       const CommonPart& part,
                                       std::uint64_t seed) {
  DeltaConstants out;
  int ns = jspec.num_dice();

  SideData a_side, b_side;
  a_side.comp_of = part.component_of_a;
  b_side.comp_of = part.component_of_b;
  for (int s = 0; s < ns; ++s) {
    a_side.marginals.push_back(jspec.a_marginal(s));
    b_side.marginals.push_back(jspec.b_marginal(s));
  }

  // Hypothesis: the only psi on the common alphabet with s-independent
  // expectation is constant, i.e. the nullspace of the component-mass
  // differences is exactly span{1}.
  {
    std::vector<std::vector<double>> rows;
    for (int s = 1; s < ns; ++s) {
      auto m0 = component_masses(a_side.marginals[0], part.component_of_a,
                                 part.num_components);
      auto mi = component_masses(a_side.marginals[s], part.component_of_a,
                                 part.num_components);
      std::vector<double> r(part.num_components);
      for (int c = 0; c < part.num_components; ++c) r[c] = mi[c] - m0[c];
      rows.push_back(std::move(r));
    }
    auto nb = nullspace_basis(rows, part.num_components);
    if (static_cast<int>(nb.size()) != 1) {
      throw PreconditionError(
          "L'_A meets the component-constant space nontrivially "
          "(common-part expectation nullspace has dimension " +
          std::to_string(nb.size()) + "); Delta' would be zero");
    }
  }

  // Delta: minimum spread over the unit spheres of L_A-perp and L_B-perp.
  auto side_delta = [&](const SideData& side,
                        std::uint64_t s) -> SphereMinResult {
    int dim = static_cast<int>(side.comp_of.size());
    std::vector<std::vector<double>> rows;
    for (int i = 1; i < ns; ++i) {
      std::vector<double> r(dim);
      for (int a = 0; a < dim; ++a)
        r[a] = side.marginals[i][a] - side.marginals[0][a];
      rows.push_back(std::move(r));
    }
    std::vector<double> w(dim, 1.0 / dim);
    auto basis = orthonormalize(rows, w);
    return min_spread_on_sphere(side.marginals, basis, 64, 1u << 20, s);
  };
  auto da = side_delta(a_side, seed);
  auto db = side_delta(b_side, seed ^ 0x1234567ULL);
  if (std::isinf(da.value) && std::isinf(db.value)) {
    throw PreconditionError(
        "all dice share their marginals; Delta is undefined (the "
        "extractability branch should have fired)");
  }
  out.delta = std::min(da.value, db.value);
  out.delta_exact_1d = (std::isinf(da.value) || da.exact_closed_form) &&
                       (std::isinf(db.value) || db.exact_closed_form);
  out.numerical = !out.delta_exact_1d;

  double dpa = side_delta_prime(a_side, part.num_components, seed + 11);
  double dpb = side_delta_prime(b_side, part.num_components, seed + 29);
  double dp = std::min(dpa, dpb);
  if (std::isinf(dp)) {
    out.delta_prime = kDeltaPrimeCap;
    out.delta_prime_unbounded = true;
  } else {
    out.delta_prime = dp;
  }
  return out;
}

WitsenhausenCert witsenhausen_certificate(const JointMatrix& joint,
                                          double tol) {
  if (common_part(joint).num_nonsingleton >= 2) {
    throw PreconditionError(
        "rho(A,B) = 1 (common data exists); no Witsenhausen certificate");
  }
  WitsenhausenCert cert;
  cert.rho = maximal_correlation(joint).rho;
  (void)tol;
  return cert;
}

FCertificate build_f_certificate(const JointSourceSpec& jspec, double tau,
                                 double tol, std::uint64_t seed) {
  JointSourceSpec pert = perturb_spec(jspec, tau);
  for (int s = 0; s < pert.num_dice(); ++s) {
    auto ma = pert.a_marginal(s), mb = pert.b_marginal(s);
    for (int a = 0; a < pert.a_size; ++a) {
      if (ma[a] <= kSupportTol) {
        throw PreconditionError(
            "perturbed marginal p'_s(a) vanishes at a = " +
            std::to_string(a) + "; certificate preconditions fail");
      }
    }
    for (int b = 0; b < pert.b_size; ++b) {
      if (mb[b] <= kSupportTol) {
        throw PreconditionError(
            "perturbed marginal p'_s(b) vanishes at b = " +
            std::to_string(b) + "; certificate preconditions fail");
      }
    }
  }
  CommonPart part = common_part(pert.dice);

  FCertificate cert;
  for (int s = 0; s < pert.num_dice(); ++s) {
    cert.rho_cond = std::max(
        cert.rho_cond, conditional_maximal_correlation(pert.dice[s], part));
  }
  if (cert.rho_cond >= 1.0 - tol) {
    throw PreconditionError(
        "rho(A,B|CS) is not bounded away from 1; certificate unavailable");
  }
  DeltaConstants dc = compute_delta_constants(pert, part, seed);
  cert.delta = dc.delta;
  cert.delta_prime = dc.delta_prime;
  cert.delta_prime_unbounded = dc.delta_prime_unbounded;
  cert.epsilon = 0.5 * dc.delta_prime * (1.0 - cert.rho_cond) /
                 (1.0 + dc.delta_prime);
  cert.big_m = 24.0 * jspec.a_size * jspec.b_size / dc.delta + 2.0;
  return cert;
}

namespace {

struct TripleDP {
  // level value arrays for one subset pair
  std::vector<std::vector<double>> alpha, beta, gamma;
};

TripleDP triple_dp(const JointSourceSpec& jspec, int n, std::uint64_t mask_i,
                   std::uint64_t mask_j) {
  int na = jspec.a_size, nb = jspec.b_size, ns = jspec.num_dice();
  std::vector<std::vector<double>> pa(ns), pb(ns);
  for (int s = 0; s < ns; ++s) {
    pa[s] = jspec.a_marginal(s);
    pb[s] = jspec.b_marginal(s);
  }
  TripleDP dp;
  dp.alpha.resize(n + 1);
  dp.beta.resize(n + 1);
  dp.gamma.resize(n + 1);
  std::uint64_t ca = upow(na, n), cb = upow(nb, n);
  dp.alpha[n].resize(ca);
  dp.beta[n].resize(cb);
  dp.gamma[n].resize(ca * cb);
  for (std::uint64_t u = 0; u < ca; ++u)
    dp.alpha[n][u] = (mask_i >> u) & 1 ? 1.0 : 0.0;
  for (std::uint64_t v = 0; v < cb; ++v)
    dp.beta[n][v] = (mask_j >> v) & 1 ? 1.0 : 0.0;
  for (std::uint64_t u = 0; u < ca; ++u)
    for (std::uint64_t v = 0; v < cb; ++v)
      dp.gamma[n][u * cb + v] = dp.alpha[n][u] * dp.beta[n][v];

  for (int lvl = n - 1; lvl >= 0; --lvl) {
    std::uint64_t la = upow(na, lvl), lb = upow(nb, lvl);
    dp.alpha[lvl].resize(la);
    dp.beta[lvl].resize(lb);
    dp.gamma[lvl].resize(la * lb);
    for (std::uint64_t u = 0; u < la; ++u) {
      double best = -1.0;
      for (int s = 0; s < ns; ++s) {
        double e = 0.0;
        for (int a = 0; a < na; ++a) e += pa[s][a] * dp.alpha[lvl + 1][u * na + a];
        best = std::max(best, e);
      }
      dp.alpha[lvl][u] = best;
    }
    for (std::uint64_t v = 0; v < lb; ++v) {
      double best = -1.0;
      for (int s = 0; s < ns; ++s) {
        double e = 0.0;
        for (int b = 0; b < nb; ++b) e += pb[s][b] * dp.beta[lvl + 1][v * nb + b];
        best = std::max(best, e);
      }
      dp.beta[lvl][v] = best;
    }
    std::uint64_t cbn = upow(nb, lvl + 1);
    for (std::uint64_t u = 0; u < la; ++u) {
      for (std::uint64_t v = 0; v < lb; ++v) {
        double best = 2.0;
        for (int s = 0; s < ns; ++s) {
          double e = 0.0;
          for (int a = 0; a < na; ++a)
            for (int b = 0; b < nb; ++b)
              e += jspec.prob(s, a, b) *
                   dp.gamma[lvl + 1][(u * na + a) * cbn + (v * nb + b)];
          best = std::min(best, e);
        }
        dp.gamma[lvl][u * lb + v] = best;
      }
    }
  }
  return dp;
}

}  // namespace

TripleSet distributed_triples(const JointSourceSpec& jspec, int n,
                              std::uint64_t budget) {
  TripleSet out;
  out.n = n;
  if (n == 0) {
    out.points = {{1, 1, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 0}};
    return out;
  }
  std::uint64_t ca = checked_pow(jspec.a_size, n, 63);
  std::uint64_t cb = checked_pow(jspec.b_size, n, 63);
  std::uint64_t si = std::uint64_t{1} << ca, sj = std::uint64_t{1} << cb;
  if (si > budget / sj) {
    throw BudgetError("distributed_triples: subset pair count exceeds budget");
  }
  out.points.resize(si * sj);
  const std::int64_t isi = static_cast<std::int64_t>(si);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t mi = 0; mi < isi; ++mi) {
    for (std::uint64_t mj = 0; mj < sj; ++mj) {
      auto dp = triple_dp(jspec, n, static_cast<std::uint64_t>(mi), mj);
      out.points[static_cast<std::uint64_t>(mi) * sj + mj] = {
          dp.alpha[0][0], dp.beta[0][0], dp.gamma[0][0]};
    }
  }
  std::sort(out.points.begin(), out.points.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()),
                   out.points.end());
  return out;
}

double f_recursion_margin(
    const JointSourceSpec& jspec, int n, std::uint64_t mask_i,
    std::uint64_t mask_j,
    const std::function<double(double, double, double)>& f) {
  auto dp = triple_dp(jspec, n, mask_i, mask_j);
  int na = jspec.a_size, nb = jspec.b_size, ns = jspec.num_dice();
  double margin = std::numeric_limits<double>::infinity();
  for (int lvl = 0; lvl < n; ++lvl) {
    std::uint64_t la = upow(na, lvl), lb = upow(nb, lvl);
    std::uint64_t cbn = upow(nb, lvl + 1);
    for (std::uint64_t u = 0; u < la; ++u) {
      for (std::uint64_t v = 0; v < lb; ++v) {
        double lhs = f(dp.alpha[lvl][u], dp.beta[lvl][v],
                       dp.gamma[lvl][u * lb + v]);
        double rhs = std::numeric_limits<double>::infinity();
        for (int s = 0; s < ns; ++s) {
          double e = 0.0;
          for (int a = 0; a < na; ++a)
            for (int b = 0; b < nb; ++b)
              e += jspec.prob(s, a, b) *
                   f(dp.alpha[lvl + 1][u * na + a], dp.beta[lvl + 1][v * nb + b],
                     dp.gamma[lvl + 1][(u * na + a) * cbn + (v * nb + b)]);
          rhs = std::min(rhs, e);
        }
        margin = std::min(margin, lhs - rhs);
      }
    }
  }
  return margin;
}

const char* to_string(DistributedReport::Status s) {
  switch (s) {
    case DistributedReport::Status::CommonExtractable:
      return "COMMON-EXTRACTABLE";
    case DistributedReport::Status::Impossible:
      return "IMPOSSIBLE";
    default:
      return "GAP";
  }
}

DistributedReport distributed_verdict(const JointSourceSpec& jspec,
                                      double tol) {
  DistributedReport rep;
  int ns = jspec.num_dice();

  // Step 1: a single die without common data gives the adversary an i.i.d.
  // source from which no common bit can be extracted.
  for (int s = 0; s < ns; ++s) {
    rep.rho_per_die.push_back(maximal_correlation(jspec.dice[s]).rho);
  }
  for (int s = 0; s < ns; ++s) {
    if (common_part(jspec.dice[s]).num_nonsingleton < 2) {
      rep.status = DistributedReport::Status::Impossible;
      rep.iid_breaking_die = s;
      rep.witsenhausen = witsenhausen_certificate(jspec.dice[s], tol);
      rep.note = "die " + std::to_string(s) +
                 " has rho < 1; playing it i.i.d. defeats any protocol";
      rep.union_part = common_part(jspec.dice);
      return rep;
    }
  }

  // Step 2: the union graph must still have common data, else the uniform
  // i.i.d. mixture defeats any protocol.
  rep.union_part = common_part(jspec.dice);
  if (rep.union_part.num_nonsingleton < 2) {
    rep.status = DistributedReport::Status::Impossible;
    JointMatrix mix(jspec.a_size, std::vector<double>(jspec.b_size, 0.0));
    for (int s = 0; s < ns; ++s)
      for (int a = 0; a < jspec.a_size; ++a)
        for (int b = 0; b < jspec.b_size; ++b)
          mix[a][b] += jspec.prob(s, a, b) / ns;
    rep.witsenhausen = witsenhausen_certificate(mix, tol);
    rep.note = "the union support graph has no common data; the uniform "
               "mixture of dice is an i.i.d. source with rho < 1";
    return rep;
  }

  // Step 3: reduce to the induced source on the common part.
  rep.induced = induced_common_spec(jspec);
  rep.induced_verdict = spec_verdict(rep.induced->spec, tol);
  switch (rep.induced_verdict->status) {
    case Verdict::Status::Extractable:
      rep.status = DistributedReport::Status::CommonExtractable;
      rep.note = "both parties extract from the common part with the same "
                 "psi pipeline";
      return rep;
    case Verdict::Status::Impossible: {
      try {
        rep.certificate = build_f_certificate(jspec, 1e-3, tol);
        rep.rho_cond = rep.certificate->rho_cond;
        rep.status = DistributedReport::Status::Impossible;
        rep.note = "randomness extraction from the common part is "
                   "impossible; certificate constructed on the perturbed "
                   "source";
      } catch (const PreconditionError& e) {
        rep.status = DistributedReport::Status::Gap;
        rep.note = std::string("induced source is impossible but the "
                               "certificate preconditions fail: ") +
                   e.what();
      }
      return rep;
    }
    case Verdict::Status::Gap:
      rep.status = DistributedReport::Status::Gap;
      rep.note = "the induced common source is degenerate and undecided";
      return rep;
  }
  return rep;
}

DerandomizeResult derandomize(const std::vector<std::vector<double>>& joint_uv,
                              const std::vector<double>& q1_zero,
                              const std::vector<double>& q2_zero) {
  int nu = static_cast<int>(q1_zero.size());
  int nv = static_cast<int>(q2_zero.size());
  DerandomizeResult res;
  res.k1_table.resize(nu);
  res.k2_table.resize(nv);
  for (int u = 0; u < nu; ++u) res.k1_table[u] = q1_zero[u] >= 0.5 ? 0 : 1;
  for (int v = 0; v < nv; ++v) res.k2_table[v] = q2_zero[v] >= 0.5 ? 0 : 1;

  double p1_zero = 0.0, p2_zero = 0.0, disagree = 0.0;
  double r1_zero = 0.0, r2_zero = 0.0, r_disagree = 0.0;
  for (int u = 0; u < nu; ++u) {
    for (int v = 0; v < nv; ++v) {
      double p = joint_uv[u][v];
      if (p == 0.0) continue;
      double a0 = q1_zero[u], b0 = q2_zero[v];
      p1_zero += p * a0;
      p2_zero += p * b0;
      disagree += p * (a0 * (1.0 - b0) + (1.0 - a0) * b0);
      int k1 = res.k1_table[u], k2 = res.k2_table[v];
      r1_zero += p * (k1 == 0 ? 1.0 : 0.0);
      r2_zero += p * (k2 == 0 ? 1.0 : 0.0);
      r_disagree += p * (k1 != k2 ? 1.0 : 0.0);
    }
  }
  res.premise_bias1 = std::fabs(p1_zero - 0.5);
  res.premise_bias2 = std::fabs(p2_zero - 0.5);
  res.premise_disagree = disagree;
  res.premise_eps = std::max({res.premise_bias1, res.premise_bias2,
                              res.premise_disagree});
  res.rounded_bias1 = std::fabs(r1_zero - 0.5);
  res.rounded_bias2 = std::fabs(r2_zero - 0.5);
  res.rounded_disagree = r_disagree;
  double eps = res.premise_eps;
  double slack = 1e-12;
  res.bounds_hold = res.rounded_disagree <= 3.0 * eps + slack &&
                    res.rounded_bias1 <= 2.0 * eps + slack &&
                    res.rounded_bias2 <= 2.0 * eps + slack;
  return res;
}

CommonExtractResult common_extract(const JointSourceSpec& jspec, int k,
                                   const MartingaleConfig& cfg,
                                   const AdversaryStrategy& strategy,
                                   std::uint64_t seed) {
  DistributedReport rep = distributed_verdict(jspec);
  if (rep.status != DistributedReport::Status::CommonExtractable) {
    throw SpecError(std::string("common_extract needs a COMMON-EXTRACTABLE "
                                "source, got ") +
                    to_string(rep.status));
  }
  CommonExtractResult out;
  out.psi = *rep.induced_verdict->witness;
  out.bracket = bias_bracket(cfg, out.psi);

  auto local = strategy.clone();
  auto pairs = sample_pairs(jspec, *local,
                            k * cfg.block_length, seed);
  std::vector<int> alice_syms, bob_syms;
  alice_syms.reserve(pairs.size());
  bob_syms.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    alice_syms.push_back(rep.induced->a_to_symbol[a]);
    bob_syms.push_back(rep.induced->b_to_symbol[b]);
  }
  auto ra = extract_bits(out.psi, cfg, alice_syms, k);
  auto rb = extract_bits(out.psi, cfg, bob_syms, k);
  long agree = 0, ones = 0;
  for (int i = 0; i < k; ++i) {
    out.alice_bits.push_back(ra[i].bit);
    out.bob_bits.push_back(rb[i].bit);
    agree += ra[i].bit == rb[i].bit;
    ones += ra[i].bit;
  }
  out.agreement = k > 0 ? static_cast<double>(agree) / k : 1.0;
  out.freq_one_alice = k > 0 ? static_cast<double>(ones) / k : 0.0;
  return out;
}

}  // namespace svx
