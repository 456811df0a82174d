#include "svx/extractor.hpp"

#include <algorithm>
#include <numeric>

#include "svx/linalg.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svx {

namespace {

double mean_under(const std::vector<double>& die,
                  const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t c = 0; c < die.size(); ++c) s += die[c] * f[c];
  return s;
}

double variance_under(const std::vector<double>& die,
                      const std::vector<double>& f) {
  double m = mean_under(die, f);
  double s = 0.0;
  for (std::size_t c = 0; c < die.size(); ++c) {
    double d = f[c] - m;
    s += die[c] * d * d;
  }
  return s;
}

double min_variance(const SourceSpec& spec, const std::vector<double>& f) {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& die : spec.dice) v = std::min(v, variance_under(die.probs, f));
  return v;
}

std::optional<PsiWitness> witness_from(const SourceSpec& spec,
                                       std::vector<double> f, double tol) {
  double m = 0.0;
  for (double x : f) m = std::max(m, std::fabs(x));
  if (m <= tol) return std::nullopt;
  for (auto& x : f) x /= m;
  double v = min_variance(spec, f);
  if (v <= tol) return std::nullopt;
  PsiWitness w;
  w.values = std::move(f);
  w.max_abs = 1.0;
  w.min_variance = v;
  return w;
}

}  // namespace

std::optional<PsiWitness> find_psi(const SourceSpec& spec, double tol) {
  std::vector<std::vector<double>> rows;
  rows.reserve(spec.dice.size());
  for (const auto& d : spec.dice) rows.push_back(d.probs);
  auto basis = nullspace_basis(rows, spec.alphabet_size);
  if (basis.empty()) return std::nullopt;

  for (const auto& b : basis) {
    if (auto w = witness_from(spec, b, tol)) return w;
  }
  // Some basis vector lost variance under a degenerate die; try fixed
  // mixing angles of basis pairs.
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      for (int k = 1; k <= 8; ++k) {
        double theta = M_PI * k / 9.0;
        std::vector<double> f(spec.alphabet_size);
        for (int c = 0; c < spec.alphabet_size; ++c) {
          f[c] = std::cos(theta) * basis[i][c] + std::sin(theta) * basis[j][c];
        }
        if (auto w = witness_from(spec, f, tol)) return w;
      }
    }
  }
  return std::nullopt;
}

bool check_restricted_necessary(const SourceSpec& spec,
                                const std::set<int>& subset, double tol) {
  if (subset.empty()) throw SpecError("restricted test needs nonempty subset");
  std::vector<int> support;  // C'
  for (int c = 0; c < spec.alphabet_size; ++c) {
    for (int s : subset) {
      if (spec.prob(s, c) > kSupportTol) {
        support.push_back(c);
        break;
      }
    }
  }
  if (support.empty()) {
    throw SpecError("restricted support C' is empty; invalid dice subset");
  }
  std::vector<std::vector<double>> rows;
  for (int s : subset) {
    std::vector<double> r;
    r.reserve(support.size());
    for (int c : support) r.push_back(spec.prob(s, c));
    rows.push_back(std::move(r));
  }
  auto basis =
      nullspace_basis(rows, static_cast<int>(support.size()), tol * 1e-1);
  return basis.empty();
}

Verdict spec_verdict(const SourceSpec& spec, double tol, int subset_budget) {
  Verdict v;
  if (auto w = find_psi(spec, tol)) {
    v.status = Verdict::Status::Extractable;
    v.witness = std::move(w);
    v.note = "psi witness found: zero mean and positive variance under every die";
    return v;
  }
  if (!spec.degenerate()) {
    v.status = Verdict::Status::Impossible;
    v.note = "non-degenerate dice with trivial nullspace; "
             "necessary and sufficient conditions coincide";
    return v;
  }
  if (spec.num_dice() > subset_budget) {
    v.status = Verdict::Status::Gap;
    v.note = "degenerate spec with too many dice to exhaust subsets";
    return v;
  }
  int n = spec.num_dice();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::set<int> subset;
    for (int s = 0; s < n; ++s)
      if (mask & (1u << s)) subset.insert(s);
    bool empty_support = false;
    bool holds = false;
    try {
      holds = check_restricted_necessary(spec, subset, tol);
    } catch (const SpecError&) {
      empty_support = true;
    }
    if (!empty_support && holds) {
      v.status = Verdict::Status::Impossible;
      std::string ids;
      for (int s : subset) ids += (ids.empty() ? "" : ",") + std::to_string(s);
      v.note = "restricted necessary condition holds for dice subset {" +
               ids + "}";
      return v;
    }
  }
  v.status = Verdict::Status::Gap;
  v.note = "degenerate spec: no witness and no restricted impossibility "
           "certificate; the question is open for this source";
  return v;
}

ExtractResult extract_bit(const PsiWitness& psi, const MartingaleConfig& cfg,
                          std::span<const int> stream, std::size_t* pos) {
  std::size_t* p = pos;
  auto next = [&]() {
    if (*p >= stream.size()) {
      throw StreamError("symbol stream exhausted after " +
                        std::to_string(*p) + " symbols");
    }
    return stream[(*p)++];
  };
  return extract_bit_from(psi, cfg, next);
}

std::vector<ExtractResult> extract_bits(const PsiWitness& psi,
                                        const MartingaleConfig& cfg,
                                        std::span<const int> stream, int k) {
  if (static_cast<std::uint64_t>(k) * cfg.block_length > stream.size()) {
    throw StreamError("stream of " + std::to_string(stream.size()) +
                      " symbols is shorter than k*n = " +
                      std::to_string(static_cast<std::uint64_t>(k) *
                                     cfg.block_length));
  }
  std::vector<ExtractResult> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    std::span<const int> block =
        stream.subspan(static_cast<std::size_t>(i) * cfg.block_length,
                       cfg.block_length);
    std::size_t pos = 0;
    out.push_back(extract_bit(psi, cfg, block, &pos));
  }
  return out;
}

BiasBracket bias_bracket(const MartingaleConfig& cfg, const PsiWitness& psi) {
  if (psi.min_variance <= 0.0) {
    throw SpecError("bias bracket needs positive minimum variance");
  }
  double m = psi.max_abs;
  double M = cfg.threshold;
  double n = static_cast<double>(cfg.block_length);
  BiasBracket b;
  b.tail = (M + m) * (M + m) / (psi.min_variance * n);
  b.lo = M / (2.0 * M + m) - b.tail;
  b.hi = (M + m) / (2.0 * M + m) + b.tail;
  return b;
}

namespace {

struct TrialOut {
  std::uint8_t bit;
  int tau;
  double y_tau;
};

TrialOut run_trial(const SourceSpec& spec, const PsiWitness& psi,
                   const MartingaleConfig& cfg, AdversaryStrategy& strategy,
                   std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 rng = substream(seed, 2 * trial);
  strategy.reset(substream(seed, 2 * trial + 1));
  auto next = [&]() {
    int s = strategy.choose();
    int c = draw_symbol(spec, s, rng);
    strategy.observe(c);
    return c;
  };
  ExtractResult r = extract_bit_from(psi, cfg, next);
  return {static_cast<std::uint8_t>(r.bit), r.tau, r.y_tau};
}

BiasStats reduce_trials(const std::vector<TrialOut>& res,
                        const MartingaleConfig& cfg) {
  BiasStats st;
  st.trials = static_cast<long>(res.size());
  if (res.empty()) return st;
  st.tau_min = res[0].tau;
  st.tau_max = res[0].tau;
  double sum_y = 0.0, sum_y2 = 0.0, sum_tau = 0.0;
  long ones = 0, full = 0;
  for (const auto& t : res) {
    ones += t.bit;
    if (t.tau == cfg.block_length) ++full;
    sum_y += t.y_tau;
    sum_y2 += t.y_tau * t.y_tau;
    sum_tau += t.tau;
    st.tau_min = std::min(st.tau_min, t.tau);
    st.tau_max = std::max(st.tau_max, t.tau);
  }
  double n = static_cast<double>(res.size());
  st.freq_one = ones / n;
  st.pr_tau_full = full / n;
  st.mean_y_tau = sum_y / n;
  st.stddev_y_tau = std::sqrt(std::max(0.0, sum_y2 / n - st.mean_y_tau * st.mean_y_tau));
  st.mean_tau = sum_tau / n;
  return st;
}

}  // namespace

BiasStats simulate_bias(const SourceSpec& spec, const PsiWitness& psi,
                        const MartingaleConfig& cfg,
                        const AdversaryStrategy& strategy, long trials,
                        std::uint64_t seed) {
  std::vector<TrialOut> res(static_cast<std::size_t>(trials));
#pragma omp parallel
  {
    auto local = strategy.clone();
#pragma omp for schedule(static)
    for (long t = 0; t < trials; ++t) {
      res[t] = run_trial(spec, psi, cfg, *local, seed,
                         static_cast<std::uint64_t>(t));
    }
  }
  return reduce_trials(res, cfg);
}

BiasStats simulate_bias_serial(const SourceSpec& spec, const PsiWitness& psi,
                               const MartingaleConfig& cfg,
                               const AdversaryStrategy& strategy, long trials,
                               std::uint64_t seed) {
  std::vector<TrialOut> res(static_cast<std::size_t>(trials));
  auto local = strategy.clone();
  for (long t = 0; t < trials; ++t) {
    res[t] = run_trial(spec, psi, cfg, *local, seed,
                       static_cast<std::uint64_t>(t));
  }
  return reduce_trials(res, cfg);
}

}  // namespace svx
