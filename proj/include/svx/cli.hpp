#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "svx/common.hpp"

namespace svx {

// Exit codes: 0 EXTRACTABLE / all checks pass, 1 IMPOSSIBLE / check failed,
// 2 GAP, 64 usage or input error, 65 data/runtime error (budget, stream,
// hull), 70 internal error.
inline constexpr int kExitExtractable = 0;
inline constexpr int kExitImpossible = 1;
inline constexpr int kExitGap = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitData = 65;
inline constexpr int kExitInternal = 70;

struct RunConfig {
  std::uint64_t seed = 0;
  long trials = 10000;
  int n = 1000;           // block length per extracted bit
  double threshold = 0.0; // M; 0 means ceil(n^(1/3))
  double tol = kDefaultTol;
  std::uint64_t budget = kDefaultBudget;
  bool exact = false;
  std::string out;  // optional output path (reports, CSV)
};

int cmd_analyze(const std::string& spec_path, const RunConfig& cfg,
                std::ostream& out, std::ostream& err);

int cmd_extract(const std::string& spec_path, int k,
                const std::string& adversary, const RunConfig& cfg,
                std::ostream& out, std::ostream& err);

int cmd_adversary(const std::string& spec_path, const std::string& table_path,
                  const RunConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_curve(double delta, int n_max, const RunConfig& cfg,
              std::ostream& out, std::ostream& err);

int cmd_distributed(const std::string& spec_path, const RunConfig& cfg,
                    std::ostream& out, std::ostream& err);

int cmd_verify(const std::string& suite, const RunConfig& cfg,
               std::ostream& out, std::ostream& err);

}  // namespace svx
