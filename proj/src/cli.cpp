#include "svx/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "svx/adversary.hpp"
#include "svx/binary_sv.hpp"
#include "svx/distributed.hpp"
#include "svx/extractor.hpp"
#include "svx/instances.hpp"
#include "svx/io.hpp"
#include "svx/sampling.hpp"

namespace svx {

namespace {

MartingaleConfig make_martingale_config(const RunConfig& cfg) {
  MartingaleConfig mc;
  mc.block_length = cfg.n;
  mc.threshold = cfg.threshold > 0.0 ? cfg.threshold
                                     : default_threshold(cfg.n);
  return mc;
}

void emit_report(const Json& report, const RunConfig& cfg, std::ostream& out) {
  std::string text = report.dump(2);
  text.push_back('\n');
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw SpecError("cannot write output file: " + cfg.out);
    f << text;
  } else {
    out << text;
  }
}

Json witness_json(const PsiWitness& w) {
  Json j;
  j["psi"] = w.values;
  j["m"] = w.max_abs;
  j["v"] = w.min_variance;
  return j;
}

Json g_cert_json(const GEpsilonCert& c) {
  Json j;
  j["delta"] = c.delta;
  j["epsilon"] = c.epsilon;
  j["M_f"] = c.mf;
  j["shape"] = "x*(1-x)";
  j["g_half"] = c.g(0.5);
  j["numerical"] = c.numerical;
  if (c.delta_exact) j["delta_exact"] = rational_to_string(*c.delta_exact);
  if (c.epsilon_exact)
    j["epsilon_exact"] = rational_to_string(*c.epsilon_exact);
  return j;
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const StreamError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const HullError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int cmd_analyze(const std::string& spec_path, const RunConfig& cfg,
                std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    auto t0 = std::chrono::steady_clock::now();
    SourceSpec spec = parse_source_spec(load_json_file(spec_path), cfg.exact);
    Verdict v = spec_verdict(spec, cfg.tol);

    Json rep;
    rep["schema"] = 1;
    rep["command"] = "analyze";
    rep["input"] = spec_path;
    rep["digest"] = file_digest(spec_path);
    rep["verdict"] = to_string(v.status);
    rep["degenerate"] = spec.degenerate();
    rep["note"] = v.note;
    if (v.witness) rep["witness"] = witness_json(*v.witness);
    if (v.status == Verdict::Status::Impossible) {
      if (auto cert = build_g_certificate(spec, cfg.tol, cfg.seed)) {
        rep["certificate"] = g_cert_json(*cert);
      }
    }
    emit_report(rep, cfg, out);
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0).count();
    err << "analyze: " << to_string(v.status) << " in " << dt << " s\n";
    switch (v.status) {
      case Verdict::Status::Extractable: return kExitExtractable;
      case Verdict::Status::Impossible: return kExitImpossible;
      default: return kExitGap;
    }
  });
}

int cmd_extract(const std::string& spec_path, int k,
                const std::string& adversary, const RunConfig& cfg,
                std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    SourceSpec spec = parse_source_spec(load_json_file(spec_path), cfg.exact);
    Verdict v = spec_verdict(spec, cfg.tol);
    if (v.status != Verdict::Status::Extractable) {
      err << "error: spec is not extractable (verdict "
          << to_string(v.status) << ")\n";
      return kExitImpossible;
    }
    const PsiWitness& psi = *v.witness;
    MartingaleConfig mc = make_martingale_config(cfg);

    std::vector<int> stream;
    if (adversary.rfind("file:", 0) == 0) {
      std::ifstream f(adversary.substr(5));
      if (!f) throw SpecError("cannot open stream file " + adversary.substr(5));
      int sym;
      while (f >> sym) {
        if (sym < 0 || sym >= spec.alphabet_size) {
          throw SpecError("stream symbol out of range: " +
                          std::to_string(sym));
        }
        stream.push_back(sym);
      }
      if (stream.size() <
          static_cast<std::size_t>(k) * static_cast<std::size_t>(mc.block_length)) {
        throw StreamError("stream file has " + std::to_string(stream.size()) +
                          " symbols, need k*n = " +
                          std::to_string(static_cast<long long>(k) *
                                         mc.block_length));
      }
    } else {
      std::unique_ptr<AdversaryStrategy> strat;
      if (adversary == "uniform") {
        strat = std::make_unique<UniformRandomStrategy>(spec.num_dice());
      } else if (adversary == "adaptive-sign") {
        strat = std::make_unique<AdaptiveSignStrategy>(spec, psi.values);
      } else if (adversary.rfind("constant:", 0) == 0) {
        int die = std::stoi(adversary.substr(9));
        if (die < 0 || die >= spec.num_dice()) {
          throw SpecError("constant adversary die index out of range");
        }
        strat = std::make_unique<ConstantStrategy>(die);
      } else if (adversary == "constant") {
        strat = std::make_unique<ConstantStrategy>(0);
      } else {
        throw SpecError("unknown adversary '" + adversary +
                        "' (constant[:i] | uniform | adaptive-sign | "
                        "file:PATH)");
      }
      stream = sample_sequence(spec, *strat, k * mc.block_length, cfg.seed);
    }

    auto bits = extract_bits(psi, mc, stream, k);
    std::string line;
    line.reserve(bits.size());
    long ones = 0, tau_full = 0;
    double tau_sum = 0.0;
    int tau_min = mc.block_length, tau_max = 0;
    for (const auto& r : bits) {
      line.push_back(r.bit ? '1' : '0');
      ones += r.bit;
      tau_sum += r.tau;
      tau_min = std::min(tau_min, r.tau);
      tau_max = std::max(tau_max, r.tau);
      tau_full += r.tau == mc.block_length;
    }
    out << line << "\n";

    Json stats;
    stats["schema"] = 1;
    stats["command"] = "extract";
    stats["k"] = k;
    stats["n"] = mc.block_length;
    stats["M"] = mc.threshold;
    stats["freq_one"] = k > 0 ? static_cast<double>(ones) / k : 0.0;
    if (k > 0) {
      stats["tau"] = {{"mean", tau_sum / k},
                      {"min", tau_min},
                      {"max", tau_max},
                      {"pr_full", static_cast<double>(tau_full) / k}};
    }
    auto br = bias_bracket(mc, psi);
    stats["bracket"] = {{"lo", br.lo}, {"hi", br.hi}, {"tail", br.tail}};
    out << stats.dump() << "\n";
    return kExitExtractable;
  });
}

int cmd_adversary(const std::string& spec_path, const std::string& table_path,
                  const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    SourceSpec spec = parse_source_spec(load_json_file(spec_path), cfg.exact);
    ExtractorTable table = parse_extractor_table(load_json_file(table_path));

    Json rep;
    rep["schema"] = 1;
    rep["command"] = "adversary";
    rep["input"] = spec_path;
    rep["digest"] = file_digest(spec_path);
    rep["extractor"] = table_path;
    rep["extractor_digest"] = file_digest(table_path);

    auto ab = alpha_beta<double>(spec, table, cfg.budget);
    rep["alpha"] = ab.alpha;
    rep["beta"] = ab.beta;
    if (spec.has_exact()) {
      auto abx = alpha_beta<Rational>(spec, table, cfg.budget);
      rep["alpha_exact"] = rational_to_string(abx.alpha);
      rep["beta_exact"] = rational_to_string(abx.beta);
    }
    rep["strategy_min"] =
        to_json(optimal_strategy(spec, table, Objective::Min, cfg.budget));
    rep["strategy_max"] =
        to_json(optimal_strategy(spec, table, Objective::Max, cfg.budget));
    emit_report(rep, cfg, out);
    return kExitExtractable;
  });
}

int cmd_curve(double delta, int n_max, const RunConfig& cfg,
              std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    auto pts = f_delta_curve(delta, n_max);
    std::vector<std::pair<double, double>> pairs;
    pairs.reserve(pts.size());
    for (const auto& p : pts) pairs.push_back({p.alpha, p.beta});
    std::string csv = curve_csv(pairs);
    if (!cfg.out.empty()) {
      std::ofstream f(cfg.out);
      if (!f) throw SpecError("cannot write output file: " + cfg.out);
      f << csv;
    } else {
      out << csv;
    }
    err << "points=" << pts.size()
        << " gap_to_half=" << curve_gap_to_half(pts) << "\n";
    return kExitExtractable;
  });
}

int cmd_distributed(const std::string& spec_path, const RunConfig& cfg,
                    std::ostream& out, std::ostream& err) {
  return run_guarded(err, [&]() {
    JointSourceSpec jspec = parse_joint_spec(load_json_file(spec_path));
    DistributedReport drep = distributed_verdict(jspec, cfg.tol);

    Json rep;
    rep["schema"] = 1;
    rep["command"] = "distributed";
    rep["input"] = spec_path;
    rep["digest"] = file_digest(spec_path);
    rep["verdict"] = to_string(drep.status);
    rep["note"] = drep.note;
    rep["rho"] = drep.rho_per_die;
    rep["common_part"] = {
        {"component_of_a", drep.union_part.component_of_a},
        {"component_of_b", drep.union_part.component_of_b},
        {"num_components", drep.union_part.num_components},
        {"num_nonsingleton", drep.union_part.num_nonsingleton}};
    if (drep.witsenhausen) {
      rep["witsenhausen"] = {{"rho", drep.witsenhausen->rho},
                             {"center", drep.witsenhausen->center()}};
      if (drep.iid_breaking_die >= 0) {
        rep["iid_breaking_die"] = drep.iid_breaking_die;
      }
    }
    if (drep.induced) {
      rep["induced"] = to_json(drep.induced->spec);
      rep["induced_verdict"] = to_string(drep.induced_verdict->status);
      if (drep.induced_verdict->witness) {
        rep["witness"] = witness_json(*drep.induced_verdict->witness);
      }
    }
    if (drep.certificate) {
      const auto& c = *drep.certificate;
      rep["certificate"] = {
          {"rho", c.rho_cond},
          {"delta", c.delta},
          {"delta_prime", c.delta_prime},
          {"delta_prime_unbounded", c.delta_prime_unbounded},
          {"epsilon", c.epsilon},
          {"M", c.big_m},
          {"f_center", c.f(0.5, 0.5, 0.5)}};
    }

    if (drep.status == DistributedReport::Status::CommonExtractable) {
      // short end-to-end demo: both parties extract the same bits
      MartingaleConfig mc = make_martingale_config(cfg);
      std::vector<std::vector<double>> fused;
      for (int s = 0; s < jspec.num_dice(); ++s) {
        std::vector<double> p;
        for (int a = 0; a < jspec.a_size; ++a)
          for (int b = 0; b < jspec.b_size; ++b)
            p.push_back(jspec.prob(s, a, b));
        fused.push_back(std::move(p));
      }
      const auto& witness = *drep.induced_verdict->witness;
      std::vector<double> psi_pair;
      for (int a = 0; a < jspec.a_size; ++a)
        for (int b = 0; b < jspec.b_size; ++b) {
          int sym = drep.induced->a_to_symbol[a];
          psi_pair.push_back(sym >= 0 ? witness.values[sym] : 0.0);
        }
      AdaptiveSignStrategy strat(fused, psi_pair);
      auto demo = common_extract(jspec, 50, mc, strat, cfg.seed);
      rep["demo"] = {{"bits", 50},
                     {"agreement", demo.agreement},
                     {"freq_one", demo.freq_one_alice},
                     {"bracket", {{"lo", demo.bracket.lo},
                                  {"hi", demo.bracket.hi},
                                  {"tail", demo.bracket.tail}}}};
    }

    emit_report(rep, cfg, out);
    switch (drep.status) {
      case DistributedReport::Status::CommonExtractable:
        return kExitExtractable;
      case DistributedReport::Status::Impossible: return kExitImpossible;
      default: return kExitGap;
    }
  });
}

namespace {

struct CheckRunner {
  std::ostream& out;
  bool all_pass = true;

  void run(const std::string& name, const std::function<bool()>& check) {
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
      ok = check();
    } catch (const std::exception& e) {
      detail = std::string(" (") + e.what() + ")";
    }
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0).count();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", dt);
    out << (ok ? "PASS" : "FAIL") << " " << name << " (" << buf << " s)"
        << detail << "\n";
    all_pass = all_pass && ok;
  }
};

bool check_prefix_optimality_small() {
  for (const Rational& d : {Rational(1, 4), Rational(1, 3), Rational(9, 20)}) {
    for (int n = 1; n <= 3; ++n) {
      if (!verify_prefix_optimality(d, n)) return false;
    }
  }
  return true;
}

bool check_complement_identity() {
  SourceSpec spec = binary_sv_spec(Rational(1, 3));
  for (int n = 1; n <= 3; ++n) {
    std::uint64_t leaves = upow(2, n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << leaves); ++mask) {
      ExtractorTable t, tc;
      t.alphabet_size = tc.alphabet_size = 2;
      t.depth = tc.depth = n;
      t.labels.resize(leaves);
      tc.labels.resize(leaves);
      for (std::uint64_t i = 0; i < leaves; ++i) {
        t.labels[i] = (mask >> i) & 1 ? 0 : 1;
        tc.labels[i] = 1 - t.labels[i];
      }
      auto ab = alpha_beta_serial<Rational>(spec, t);
      auto abc = alpha_beta_serial<Rational>(spec, tc);
      if (ab.alpha + abc.beta != 1) return false;
    }
  }
  return true;
}

bool check_phi_domination() {
  SourceSpec spec = binary_sv_spec(1.0 / 3.0);
  auto phi = phi_set<double>(spec, 3);
  auto curve = f_delta_curve(1.0 / 3.0, 12);
  return cloud_dominates_curve(phi.points, curve, 1e-9);
}

bool check_tensorization(std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < 100; ++i) {
    auto j = random_joint(rng, 3, 3);
    double r1 = maximal_correlation(j).rho;
    double r2 = maximal_correlation(tensor_square(j)).rho;
    if (std::fabs(r1 - r2) > 1e-9) return false;
  }
  return true;
}

bool check_data_processing(std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < 100; ++i) {
    auto j = random_joint(rng, 3, 4);
    double r = maximal_correlation(j).rho;
    auto mapped = apply_random_channels(rng, j, 3, 3);
    double rm = maximal_correlation(mapped).rho;
    if (rm > r + 1e-9) return false;
  }
  return true;
}

bool check_induction_inequality(std::uint64_t seed) {
  SplitMix64 rng(seed);
  for (int i = 0; i < 25; ++i) {
    auto j = random_joint(rng, 3, 3);
    double rho = maximal_correlation(j).rho;
    std::vector<double> pa(3, 0.0), pb(3, 0.0);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        pa[a] += j[a][b];
        pb[b] += j[a][b];
      }
    for (int t = 0; t < 20; ++t) {
      std::vector<double> x(3), y(3);
      double ex = 0.0, ey = 0.0;
      for (int a = 0; a < 3; ++a) {
        x[a] = 2.0 * rng.uniform() - 1.0;
        ex += pa[a] * x[a];
      }
      for (int b = 0; b < 3; ++b) {
        y[b] = 2.0 * rng.uniform() - 1.0;
        ey += pb[b] * y[b];
      }
      double exy = 0.0, ex2 = 0.0, ey2 = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          exy += j[a][b] * (x[a] - ex) * (y[b] - ey);
      for (int a = 0; a < 3; ++a) ex2 += pa[a] * (x[a] - ex) * (x[a] - ex);
      for (int b = 0; b < 3; ++b) ey2 += pb[b] * (y[b] - ey) * (y[b] - ey);
      if (2.0 * exy > rho * (ex2 + ey2) + 1e-9) return false;
    }
  }
  return true;
}

JointSourceSpec dsbs_jspec(double eps) {
  JointSourceSpec js;
  js.a_size = js.b_size = 2;
  js.dice = {dsbs(eps)};
  return js;
}

bool check_triple_cloud() {
  auto js = dsbs_jspec(0.1);
  WitsenhausenCert cert = witsenhausen_certificate(js.dice[0]);
  auto triples = distributed_triples(js, 2);
  for (const auto& t : triples.points) {
    if (cert.f(t[0], t[1], t[2]) < -1e-12) return false;
  }
  return true;
}

bool check_triple_recursion() {
  auto js = dsbs_jspec(0.1);
  WitsenhausenCert cert = witsenhausen_certificate(js.dice[0]);
  auto f = [&](double x, double y, double z) { return cert.f(x, y, z); };
  for (std::uint64_t mi = 0; mi < 16; ++mi) {
    for (std::uint64_t mj = 0; mj < 16; ++mj) {
      if (f_recursion_margin(js, 2, mi, mj, f) < -1e-9) return false;
    }
  }
  return true;
}

SourceSpec three_symbol_two_dice() {
  SourceSpec s;
  s.alphabet_size = 3;
  s.dice = {Distribution{{0.5, 0.25, 0.25}}, Distribution{{0.25, 0.5, 0.25}}};
  return s;
}

bool check_martingale_stats(std::uint64_t seed, long trials) {
  SourceSpec spec = three_symbol_two_dice();
  auto psi = find_psi(spec);
  if (!psi) return false;
  MartingaleConfig mc{10.0, 20000};
  AdaptiveSignStrategy strat(spec, psi->values);
  auto st = simulate_bias(spec, *psi, mc, strat, trials, seed);
  auto br = bias_bracket(mc, *psi);
  double sigma = std::sqrt(0.25 / trials);
  bool freq_ok = st.freq_one >= br.lo - 3 * sigma &&
                 st.freq_one <= br.hi + 3 * sigma;
  bool tau_ok = st.pr_tau_full <= br.tail + 3 * sigma;
  double y_sigma = st.stddev_y_tau / std::sqrt(static_cast<double>(trials));
  bool stop_ok = std::fabs(st.mean_y_tau) <= 3 * y_sigma + 1e-12;
  return freq_ok && tau_ok && stop_ok;
}

}  // namespace

int cmd_verify(const std::string& suite, const RunConfig& cfg,
               std::ostream& out, std::ostream& err) {
  bool appendix_c = suite == "appendix-c" || suite == "all";
  bool witsenhausen = suite == "witsenhausen" || suite == "all";
  bool martingale = suite == "martingale" || suite == "all";
  if (!appendix_c && !witsenhausen && !martingale) {
    err << "error: unknown suite '" << suite
        << "' (appendix-c | witsenhausen | martingale | all)\n";
    return kExitUsage;
  }
  CheckRunner runner{out};
  if (appendix_c) {
    runner.run("prefix-optimality n<=3, delta in {1/4,1/3,9/20}",
               check_prefix_optimality_small);
    runner.run("prefix-optimality n=4, delta=1/3",
               [] { return verify_prefix_optimality(Rational(1, 3), 4); });
    runner.run("basedelta-lemma n<=8, 19 deltas", [] {
      return verify_basedelta_lemma(8).ok;
    });
    runner.run("complement-identity exact n<=3", check_complement_identity);
    runner.run("phi3-dominates-curve delta=1/3", check_phi_domination);
  }
  if (witsenhausen) {
    runner.run("tensorization 100 random 3x3 joints",
               [&] { return check_tensorization(cfg.seed + 1); });
    runner.run("data-processing 100 random channels",
               [&] { return check_data_processing(cfg.seed + 2); });
    runner.run("induction-inequality random functions",
               [&] { return check_induction_inequality(cfg.seed + 3); });
    runner.run("triple-cloud DSBS(0.1) n=2 f>=0", check_triple_cloud);
    runner.run("triple-recursion-margin DSBS(0.1) n=2",
               check_triple_recursion);
  }
  if (martingale) {
    long trials = std::max(cfg.trials, 100L);
    runner.run("martingale stats (bracket, tail, stopping)",
               [&] { return check_martingale_stats(cfg.seed + 4, trials); });
  }
  return runner.all_pass ? kExitExtractable : kExitImpossible;
}

}  // namespace svx
