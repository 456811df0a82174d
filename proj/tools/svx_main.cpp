#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "svx/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"svx: extractability analysis for generalized and "
               "distributed SV sources"};
  app.require_subcommand(1);
  // global flags (--seed, --n, ...) may appear after the subcommand
  app.fallthrough();

  svx::RunConfig cfg;
  app.add_option("--seed", cfg.seed, "master seed for all randomness");
  app.add_option("--trials", cfg.trials, "Monte Carlo trials");
  app.add_option("--n", cfg.n, "block length per extracted bit");
  app.add_option("--M", cfg.threshold, "martingale threshold (0 = n^(1/3))");
  app.add_option("--tol", cfg.tol, "analytic tolerance");
  app.add_option("--budget", cfg.budget, "enumeration budget");
  app.add_flag("--exact", cfg.exact, "force exact-rational arithmetic");
  app.add_option("--out", cfg.out, "write the report/CSV to this file");

  std::string spec_path, table_path, adversary = "adaptive-sign";
  std::string suite;
  int k = 100, n_max = 12;
  double delta = 1.0 / 3.0;

  auto* analyze = app.add_subcommand(
      "analyze", "verdict + psi witness or g-certificate for a source spec");
  analyze->add_option("spec", spec_path, "source spec JSON")->required();

  auto* extract = app.add_subcommand(
      "extract", "run the martingale extractor and emit bits");
  extract->add_option("spec", spec_path, "source spec JSON")->required();
  extract->add_option("-k,--bits", k, "number of bits to extract");
  extract->add_option("--adversary", adversary,
                      "constant[:i] | uniform | adaptive-sign | file:PATH");

  auto* adversary_cmd = app.add_subcommand(
      "adversary", "exact alpha/beta and optimal strategies for an extractor");
  adversary_cmd->add_option("spec", spec_path, "source spec JSON")->required();
  adversary_cmd->add_option("extractor", table_path, "extractor table JSON")
      ->required();

  auto* curve = app.add_subcommand(
      "curve", "emit the base-delta extractor frontier as CSV");
  curve->add_option("--delta", delta, "source parameter in (0, 1/2)");
  curve->add_option("--n-max", n_max, "maximum string length (<= 20)");

  auto* distributed = app.add_subcommand(
      "distributed", "common-randomness pipeline for a joint source spec");
  distributed->add_option("spec", spec_path, "joint spec JSON")->required();

  auto* verify = app.add_subcommand(
      "verify", "exhaustive oracle suites (appendix-c | witsenhausen | "
                "martingale | all)");
  verify->add_option("suite", suite, "suite name")->required();

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) {
    return svx::cmd_analyze(spec_path, cfg, std::cout, std::cerr);
  }
  if (extract->parsed()) {
    return svx::cmd_extract(spec_path, k, adversary, cfg, std::cout,
                            std::cerr);
  }
  if (adversary_cmd->parsed()) {
    return svx::cmd_adversary(spec_path, table_path, cfg, std::cout,
                              std::cerr);
  }
  if (curve->parsed()) {
    return svx::cmd_curve(delta, n_max, cfg, std::cout, std::cerr);
  }
  if (distributed->parsed()) {
    return svx::cmd_distributed(spec_path, cfg, std::cout, std::cerr);
  }
  if (verify->parsed()) {
    return svx::cmd_verify(suite, cfg, std::cout, std::cerr);
  }
  return svx::kExitUsage;
}
