#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "svx/common.hpp"
#include "svx/extractor.hpp"
#include "svx/model.hpp"

namespace svx {

// Connected components of the bipartite support graph on A u B. Ids are
// 0-based in order of first appearance (A side first, then B side).
struct CommonPart {
  std::vector<int> component_of_a;
  std::vector<int> component_of_b;
  int num_components = 0;
  int num_nonsingleton = 0;  // components containing at least one edge
};

// One joint matrix, p[a][b].
using JointMatrix = std::vector<std::vector<double>>;

CommonPart common_part(const std::vector<JointMatrix>& joints,
                       double support_tol = kSupportTol);
inline CommonPart common_part(const JointMatrix& joint,
                              double support_tol = kSupportTol) {
  return common_part(std::vector<JointMatrix>{joint}, support_tol);
}

struct MaxCorrResult {
  double rho = 0.0;
  std::vector<double> witness_x;  // zero mean, unit second moment
  std::vector<double> witness_y;
  bool degenerate = false;  // single-support marginal; rho = 0 by convention
};

// Maximal correlation via the second singular value of
// Q(a,b) = p(ab)/sqrt(p(a)p(b)) on the support, computed by deflating the
// exact top pair (sqrt p(a), sqrt p(b)).
MaxCorrResult maximal_correlation(const JointMatrix& joint);

// max over components with positive mass of the maximal correlation of the
// renormalized block.
double conditional_maximal_correlation(const JointMatrix& joint,
                                       const CommonPart& part);

struct InducedCommonSpec {
  SourceSpec spec;       // dice over the common alphabet
  CommonPart part;       // from the union support graph
  std::vector<int> a_to_symbol;  // -1 for symbols in mass-free components
  std::vector<int> b_to_symbol;
};

// Common part of the union graph, and the induced source p_s(c) =
// sum of p_s(ab) over the component c.
InducedCommonSpec induced_common_spec(const JointSourceSpec& jspec);

// Mixing perturbation: p'_s = (1-tau) p_s + (tau/|S|) sum p_s'.
// Asserts that the perturbed supports are s-independent and the union common
// part is unchanged.
JointSourceSpec perturb_spec(const JointSourceSpec& jspec, double tau);

struct DeltaConstants {
  double delta = 0.0;        // spread constant on the marginal spaces
  double delta_prime = 0.0;  // norm-ratio constant (capped when unbounded)
  bool delta_exact_1d = false;
  bool delta_prime_unbounded = false;
  bool numerical = true;
};

inline constexpr double kDeltaPrimeCap = 1e12;

// Computes Delta (minimum spread over the unit spheres of L_A-perp and
// L_B-perp) and Delta' (minimum norm ratio of the K-orthogonal part over the
// K part on L'_A and L'_B). Requires positive marginals; throws
// PreconditionError when L'_A or L'_B meets the component-constant space
// nontrivially (Delta' would be zero).
DeltaConstants compute_delta_constants(const JointSourceSpec& jspec,
                                       const CommonPart& part,
                                       std::uint64_t seed = 777);

// The distributed impossibility certificate
// f(x,y,z) = M(x+y) - 2(M+eps)z + 2xy - (1-eps)(x^2+y^2).
struct FCertificate {
  double rho_cond = 0.0;  // rho(A,B|CS) = max_s rho_s(A,B|C)
  double delta = 0.0;
  double delta_prime = 0.0;
  bool delta_prime_unbounded = false;
  double epsilon = 0.0;  // 0.5 * Delta'(1-rho)/(1+Delta')
  double big_m = 0.0;    // 24|A||B|/Delta + 2

  // Grouped as M(x+y-2z) - 2 eps z + 2xy - (1-eps)(x^2+y^2) so the corner
  // and center identities hold to roundoff regardless of M.
  double f(double x, double y, double z) const {
    return big_m * (x + y - 2.0 * z) - 2.0 * epsilon * z + 2.0 * x * y -
           (1.0 - epsilon) * (x * x + y * y);
  }
};

// The i.i.d. specialization (x+y)rho - 2z + 2xy - (x^2+y^2)rho.
struct WitsenhausenCert {
  double rho = 0.0;
  double f(double x, double y, double z) const {
    return rho * (x + y - x * x - y * y) - 2.0 * z + 2.0 * x * y;
  }
  double center() const { return -(1.0 - rho) / 2.0; }
};

// Requires rho(A,B) < 1; throws PreconditionError otherwise.
WitsenhausenCert witsenhausen_certificate(const JointMatrix& joint,
                                          double tol = kDefaultTol);

// Builds the certificate for the perturbed spec (tau defaults to 1e-3).
// Throws PreconditionError when the positivity or correlation
// preconditions fail.
FCertificate build_f_certificate(const JointSourceSpec& jspec,
                                 double tau = 1e-3,
                                 double tol = kDefaultTol,
                                 std::uint64_t seed = 777);

struct TripleSet {
  int n = 0;
  // (alpha(I), beta(J), gamma(I,J)) over enumerated subset pairs
  std::vector<std::array<double, 3>> points;
};

// Joint DP over subset pairs: alpha = max_s E_s[alpha children],
// beta = max_s E_s[beta children], gamma = min_s E_s[gamma children].
// With a single die this is the i.i.d. expectation recursion.
TripleSet distributed_triples(const JointSourceSpec& jspec, int n,
                              std::uint64_t budget = kDefaultBudget);

// Minimum over all DP nodes of f(x,y,z) - min_s E_s[f(X,Y,Z)] for one
// subset pair; nonnegative (up to roundoff) when the certificate is sound.
double f_recursion_margin(const JointSourceSpec& jspec, int n,
                          std::uint64_t mask_i, std::uint64_t mask_j,
                          const std::function<double(double, double, double)>& f);

struct DistributedReport {
  enum class Status { CommonExtractable, Impossible, Gap };
  Status status = Status::Gap;
  std::vector<double> rho_per_die;
  int iid_breaking_die = -1;  // a die with rho < 1, when step 1 fires
  std::optional<WitsenhausenCert> witsenhausen;
  CommonPart union_part;
  std::optional<InducedCommonSpec> induced;
  std::optional<Verdict> induced_verdict;
  std::optional<FCertificate> certificate;
  double rho_cond = 0.0;
  std::string note;
};

const char* to_string(DistributedReport::Status s);

DistributedReport distributed_verdict(const JointSourceSpec& jspec,
                                      double tol = kDefaultTol);

// Argmax rounding of randomized one-bit strategies to deterministic
// tables by per-string argmax, with measured premise and error accounting.
struct DerandomizeResult {
  std::vector<int> k1_table;  // bit per u (argmax, ties to 0)
  std::vector<int> k2_table;  // bit per v
  double premise_bias1 = 0.0;     // |Pr[K1=0] - 1/2|
  double premise_bias2 = 0.0;
  double premise_disagree = 0.0;  // Pr[K1 != K2]
  double premise_eps = 0.0;       // max of the three
  double rounded_bias1 = 0.0;
  double rounded_bias2 = 0.0;
  double rounded_disagree = 0.0;
  bool bounds_hold = false;  // disagree <= 3 eps and biases <= 2 eps
};

// joint_uv[u][v] is the source distribution; q1_zero[u] = Pr[K1 = 0 | u],
// q2_zero[v] = Pr[K2 = 0 | v]; the private randomness of the two sides is
// independent given (u, v).
DerandomizeResult derandomize(const std::vector<std::vector<double>>& joint_uv,
                              const std::vector<double>& q1_zero,
                              const std::vector<double>& q2_zero);

struct CommonExtractResult {
  std::vector<int> alice_bits;
  std::vector<int> bob_bits;
  double agreement = 0.0;
  double freq_one_alice = 0.0;
  BiasBracket bracket;
  PsiWitness psi;
};

// Both parties map their symbols to common-part ids and run the identical
// martingale extractor; the outputs agree on every trial by construction.
// `strategy` chooses dice from the fused pair history.
CommonExtractResult common_extract(const JointSourceSpec& jspec, int k,
                                   const MartingaleConfig& cfg,
                                   const AdversaryStrategy& strategy,
                                   std::uint64_t seed);

}  // namespace svx
