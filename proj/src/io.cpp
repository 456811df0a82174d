#include "svx/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace svx {

namespace {

struct Entry {
  double value;
  std::optional<Rational> exact;
  bool was_string;
};

Entry parse_entry(const Json& j, const std::string& where) {
  if (j.is_number()) {
    return {j.get<double>(), std::nullopt, false};
  }
  if (j.is_string()) {
    auto r = parse_rational(j.get<std::string>());
    if (!r) {
      throw SpecError(where + ": cannot parse probability '" +
                      j.get<std::string>() + "'");
    }
    return {to_double(*r), r, true};
  }
  throw SpecError(where + ": probability must be a number or a string");
}

}  // namespace

SourceSpec parse_source_spec(const Json& j, bool force_exact) {
  if (!j.is_object() || !j.contains("alphabet") || !j.contains("dice")) {
    throw SpecError("source spec needs {\"alphabet\": k, \"dice\": [...]}");
  }
  SourceSpec spec;
  spec.alphabet_size = j.at("alphabet").get<int>();
  if (!j.at("dice").is_array() || j.at("dice").empty()) {
    throw SpecError("dice must be a nonempty array");
  }

  bool any_string = force_exact;
  std::vector<std::vector<Entry>> entries;
  int s = 0;
  for (const auto& die : j.at("dice")) {
    if (!die.is_array()) throw SpecError("each die must be an array");
    std::vector<Entry> row;
    int c = 0;
    for (const auto& e : die) {
      row.push_back(parse_entry(e, "die " + std::to_string(s) + " entry " +
                                       std::to_string(c)));
      any_string = any_string || row.back().was_string;
      ++c;
    }
    entries.push_back(std::move(row));
    ++s;
  }

  for (const auto& row : entries) {
    Distribution d;
    for (const auto& e : row) d.probs.push_back(e.value);
    spec.dice.push_back(std::move(d));
  }
  if (any_string) {
    std::vector<std::vector<Rational>> exact;
    for (const auto& row : entries) {
      std::vector<Rational> r;
      for (const auto& e : row) {
        r.push_back(e.exact ? *e.exact : rational_from_decimal(e.value));
      }
      exact.push_back(std::move(r));
    }
    spec.exact_dice = std::move(exact);
  }
  if (j.contains("labels")) {
    for (const auto& l : j.at("labels"))
      spec.labels.push_back(l.get<std::string>());
  }

  auto rep = validate_spec(spec);
  if (!rep.ok) {
    std::string msg = "invalid source spec:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw SpecError(msg);
  }
  return spec;
}

JointSourceSpec parse_joint_spec(const Json& j) {
  if (!j.is_object() || !j.contains("a") || !j.contains("b") ||
      !j.contains("dice")) {
    throw SpecError(
        "joint spec needs {\"a\": na, \"b\": nb, \"dice\": [[[..]..]..]}");
  }
  JointSourceSpec spec;
  spec.a_size = j.at("a").get<int>();
  spec.b_size = j.at("b").get<int>();
  for (const auto& die : j.at("dice")) {
    std::vector<std::vector<double>> m;
    for (const auto& row : die) {
      std::vector<double> r;
      for (const auto& e : row) r.push_back(parse_entry(e, "joint die").value);
      m.push_back(std::move(r));
    }
    spec.dice.push_back(std::move(m));
  }
  auto rep = validate_spec(spec);
  if (!rep.ok) {
    std::string msg = "invalid joint spec:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw SpecError(msg);
  }
  return spec;
}

ExtractorTable parse_extractor_table(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("labels")) {
    throw SpecError("extractor table needs {\"n\": depth, \"labels\": \"01..\"}");
  }
  int n = j.at("n").get<int>();
  std::string bits = j.at("labels").get<std::string>();
  std::vector<std::uint8_t> labels;
  labels.reserve(bits.size());
  for (char ch : bits) {
    if (ch != '0' && ch != '1') throw SpecError("labels must be 0/1");
    labels.push_back(ch == '1');
  }
  int alphabet;
  if (j.contains("alphabet")) {
    alphabet = j.at("alphabet").get<int>();
  } else if (n == 0) {
    alphabet = 2;
  } else {
    alphabet = static_cast<int>(
        std::llround(std::pow(static_cast<double>(labels.size()),
                              1.0 / static_cast<double>(n))));
  }
  if (alphabet < 1 || upow(alphabet, n) != labels.size()) {
    throw SpecError("labels length " + std::to_string(labels.size()) +
                    " is not alphabet^" + std::to_string(n));
  }
  return make_table(alphabet, n, std::move(labels));
}

Json to_json(const SourceSpec& spec) {
  Json j;
  j["alphabet"] = spec.alphabet_size;
  if (spec.has_exact()) {
    Json dice = Json::array();
    for (const auto& die : *spec.exact_dice) {
      Json row = Json::array();
      for (const auto& q : die) row.push_back(rational_to_string(q));
      dice.push_back(row);
    }
    j["dice"] = dice;
  } else {
    Json dice = Json::array();
    for (const auto& die : spec.dice) dice.push_back(die.probs);
    j["dice"] = dice;
  }
  if (!spec.labels.empty()) j["labels"] = spec.labels;
  return j;
}

Json to_json(const JointSourceSpec& spec) {
  Json j;
  j["a"] = spec.a_size;
  j["b"] = spec.b_size;
  j["dice"] = spec.dice;
  return j;
}

Json to_json(const ExtractorTable& table) {
  Json j;
  j["n"] = table.depth;
  j["alphabet"] = table.alphabet_size;
  std::string bits;
  bits.reserve(table.labels.size());
  for (auto b : table.labels) bits.push_back(b ? '1' : '0');
  j["labels"] = bits;
  return j;
}

Json to_json(const StrategyTree& tree) {
  Json j;
  j["depth"] = tree.depth;
  j["alphabet"] = tree.alphabet_size;
  j["levels"] = tree.levels;
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw SpecError("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open file: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string curve_csv(const std::vector<std::pair<double, double>>& points) {
  std::ostringstream os;
  os << "alpha,beta\n";
  char buf[96];
  for (const auto& [a, b] : points) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", a, b);
    os << buf;
  }
  return os.str();
}

}  // namespace svx
