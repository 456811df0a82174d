#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "svx/cli.hpp"
#include "svx/io.hpp"

using namespace svx;

namespace {

std::string data_path(const std::string& name) {
  return std::string(SVX_DATA_DIR) + "/" + name;
}

struct CmdResult {
  int code;
  std::string out;
  std::string err;
};

template <class Fn>
CmdResult run(Fn&& fn) {
  std::ostringstream out, err;
  int code = fn(out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& text) {
  static int counter = 0;
  std::string path = "/tmp/svx_test_" + std::to_string(counter++) + ".json";
  std::ofstream f(path);
  f << text;
  return path;
}

}  // namespace

TEST_CASE("analyze maps verdicts to exit codes and is byte-identical") {
  RunConfig cfg;
  auto imp = run([&](auto& o, auto& e) {
    return cmd_analyze(data_path("binary_sv_delta13.json"), cfg, o, e);
  });
  CHECK(imp.code == kExitImpossible);
  Json rep = Json::parse(imp.out);
  CHECK(rep["verdict"] == "IMPOSSIBLE");
  CHECK(rep["schema"] == 1);
  CHECK(rep["certificate"]["delta_exact"] == "2/3");

  auto again = run([&](auto& o, auto& e) {
    return cmd_analyze(data_path("binary_sv_delta13.json"), cfg, o, e);
  });
  CHECK(again.out == imp.out);

  auto ext = run([&](auto& o, auto& e) {
    return cmd_analyze(data_path("three_symbol_two_dice.json"), cfg, o, e);
  });
  CHECK(ext.code == kExitExtractable);
  Json rep2 = Json::parse(ext.out);
  CHECK(rep2["verdict"] == "EXTRACTABLE");
  REQUIRE(rep2.contains("witness"));
}

TEST_CASE("analyze rejects malformed JSON with the usage exit code") {
  RunConfig cfg;
  std::string bad = write_temp("{\"alphabet\": 2, \"dice\": [[0.5, ");
  auto r = run([&](auto& o, auto& e) { return cmd_analyze(bad, cfg, o, e); });
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("error") != std::string::npos);
  std::remove(bad.c_str());
}

TEST_CASE("analyze rejects an unnormalized die") {
  RunConfig cfg;
  std::string bad = write_temp("{\"alphabet\": 3, \"dice\": [[0.5, 0.5, 0.1]]}");
  auto r = run([&](auto& o, auto& e) { return cmd_analyze(bad, cfg, o, e); });
  CHECK(r.code == kExitUsage);
  std::remove(bad.c_str());
}

TEST_CASE("adversary reports exact fractions and strategies") {
  RunConfig cfg;
  auto r = run([&](auto& o, auto& e) {
    return cmd_adversary(data_path("binary_sv_delta13.json"),
                         data_path("left_prefix_n3_x3.json"), cfg, o, e);
  });
  REQUIRE(r.code == 0);
  Json rep = Json::parse(r.out);
  CHECK(rep["beta_exact"] == "16/27");
  CHECK(rep["alpha_exact"] == "5/27");
  CHECK(rep["strategy_max"]["depth"] == 3);
  CHECK(rep["strategy_max"]["levels"].size() == 3);
}

TEST_CASE("curve CSV round-trips and contains the single-bit point") {
  RunConfig cfg;
  auto r = run([&](auto& o, auto& e) {
    return cmd_curve(1.0 / 3.0, 6, cfg, o, e);
  });
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  CHECK(header == "alpha,beta");
  bool found = false;
  std::string line;
  int rows = 0;
  double prev_alpha = -1.0;
  while (std::getline(in, line)) {
    double a, b;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &a, &b) == 2);
    CHECK(a >= prev_alpha);
    prev_alpha = a;
    if (std::fabs(a - 1.0 / 3) < 1e-15 && std::fabs(b - 2.0 / 3) < 1e-15) {
      found = true;
    }
    ++rows;
  }
  CHECK(found);
  CHECK(rows == 65);  // 2^6 + 1
  CHECK(r.err.find("gap_to_half=") != std::string::npos);

  // delta out of range is a usage error
  auto bad = run([&](auto& o, auto& e) { return cmd_curve(0.5, 6, cfg, o, e); });
  CHECK(bad.code == kExitUsage);
}

TEST_CASE("extract emits deterministic bits and stats") {
  RunConfig cfg;
  cfg.n = 200;
  cfg.threshold = 4.0;
  cfg.seed = 5;
  auto r1 = run([&](auto& o, auto& e) {
    return cmd_extract(data_path("three_symbol_two_dice.json"), 20,
                       "adaptive-sign", cfg, o, e);
  });
  REQUIRE(r1.code == 0);
  auto r2 = run([&](auto& o, auto& e) {
    return cmd_extract(data_path("three_symbol_two_dice.json"), 20,
                       "adaptive-sign", cfg, o, e);
  });
  CHECK(r1.out == r2.out);

  std::istringstream in(r1.out);
  std::string bits, stats_line;
  std::getline(in, bits);
  std::getline(in, stats_line);
  CHECK(bits.size() == 20);
  Json stats = Json::parse(stats_line);
  CHECK(stats["k"] == 20);
  CHECK(stats["bracket"].contains("lo"));

  // k = 0: no bits, stats only
  auto r0 = run([&](auto& o, auto& e) {
    return cmd_extract(data_path("three_symbol_two_dice.json"), 0,
                       "uniform", cfg, o, e);
  });
  CHECK(r0.code == 0);

  // non-extractable spec is refused
  auto imp = run([&](auto& o, auto& e) {
    return cmd_extract(data_path("binary_sv_delta13.json"), 5, "uniform",
                       cfg, o, e);
  });
  CHECK(imp.code == kExitImpossible);
}

TEST_CASE("extract reads stream files and checks their length") {
  RunConfig cfg;
  cfg.n = 4;
  cfg.threshold = 2.0;
  std::string stream = write_temp("0 0 1 2 0 0 0 0");
  auto ok = run([&](auto& o, auto& e) {
    return cmd_extract(data_path("three_symbol_two_dice.json"), 2,
                       "file:" + stream, cfg, o, e);
  });
  CHECK(ok.code == 0);

  auto short_stream = run([&](auto& o, auto& e) {
    return cmd_extract(data_path("three_symbol_two_dice.json"), 3,
                       "file:" + stream, cfg, o, e);
  });
  CHECK(short_stream.code == kExitData);
  CHECK(short_stream.err.find("stream") != std::string::npos);
  std::remove(stream.c_str());
}

TEST_CASE("distributed exit codes for the bundled sources") {
  RunConfig cfg;
  cfg.n = 500;
  cfg.threshold = 4.0;
  auto erasure = run([&](auto& o, auto& e) {
    return cmd_distributed(data_path("erasure_example.json"), cfg, o, e);
  });
  CHECK(erasure.code == kExitImpossible);
  Json rep = Json::parse(erasure.out);
  CHECK(rep["verdict"] == "IMPOSSIBLE");
  CHECK(rep["certificate"].contains("delta_prime"));

  auto comp = run([&](auto& o, auto& e) {
    return cmd_distributed(data_path("composite_diag3.json"), cfg, o, e);
  });
  CHECK(comp.code == kExitExtractable);
  Json rep2 = Json::parse(comp.out);
  CHECK(rep2["demo"]["agreement"] == 1.0);
}

TEST_CASE("verify rejects unknown suites") {
  RunConfig cfg;
  auto r = run([&](auto& o, auto& e) { return cmd_verify("nope", cfg, o, e); });
  CHECK(r.code == kExitUsage);
}

TEST_CASE("reports round-trip through the JSON parser") {
  RunConfig cfg;
  auto r = run([&](auto& o, auto& e) {
    return cmd_analyze(data_path("three_symbol_two_dice.json"), cfg, o, e);
  });
  Json rep = Json::parse(r.out);
  std::string dumped = rep.dump(2) + "\n";
  CHECK(dumped == r.out);
}
