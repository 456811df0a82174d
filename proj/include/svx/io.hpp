#pragma once

#include <string>

#include "json.hpp"
#include "svx/model.hpp"

namespace svx {

using Json = nlohmann::json;

// {"alphabet": k, "dice": [[...], ...], "labels": [...]} with entries given
// as numbers or fraction/decimal strings. Any string entry switches the spec
// into exact mode; in exact mode numeric entries are read via their shortest
// round-trip decimal, so 0.45 means 9/20.
SourceSpec parse_source_spec(const Json& j, bool force_exact = false);

// {"a": na, "b": nb, "dice": [[[row], ...], ...]}
JointSourceSpec parse_joint_spec(const Json& j);

// {"n": depth, "labels": "0110..."}; the alphabet size is labels^(1/n)
// unless given explicitly as "alphabet".
ExtractorTable parse_extractor_table(const Json& j);

Json to_json(const SourceSpec& spec);
Json to_json(const JointSourceSpec& spec);
Json to_json(const ExtractorTable& table);
Json to_json(const StrategyTree& tree);

Json load_json_file(const std::string& path);

// FNV-1a 64-bit hash of the raw file bytes, as fixed-width hex.
std::string file_digest(const std::string& path);

// CSV with header "alpha,beta" and 17 significant digits per value.
std::string curve_csv(const std::vector<std::pair<double, double>>& points);

}  // namespace svx
