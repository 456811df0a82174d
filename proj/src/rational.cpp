#include "svx/rational.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <sstream>

namespace svx {

namespace {

std::optional<BigInt> parse_bigint(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (i == s.size()) return std::nullopt;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
  }
  return BigInt(s);
}

}  // namespace

std::optional<Rational> parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) return std::nullopt;

  if (auto slash = s.find('/'); slash != std::string::npos) {
    auto num = parse_bigint(s.substr(0, slash));
    auto den = parse_bigint(s.substr(slash + 1));
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }

  // Decimal / scientific literal: mantissa [.frac] [e exp]
  std::string mant = s;
  long exp10 = 0;
  if (auto e = s.find_first_of("eE"); e != std::string::npos) {
    mant = s.substr(0, e);
    std::string es = s.substr(e + 1);
    if (es.empty()) return std::nullopt;
    try {
      std::size_t used = 0;
      exp10 = std::stol(es, &used);
      if (used != es.size()) return std::nullopt;
    } catch (...) {
      return std::nullopt;
    }
  }
  std::string digits = mant;
  long frac_len = 0;
  if (auto dot = mant.find('.'); dot != std::string::npos) {
    digits = mant.substr(0, dot) + mant.substr(dot + 1);
    frac_len = static_cast<long>(mant.size() - dot - 1);
  }
  auto num = parse_bigint(digits);
  if (!num) return std::nullopt;
  long net = exp10 - frac_len;
  BigInt p10 = 1;
  for (long i = 0; i < (net < 0 ? -net : net); ++i) p10 *= 10;
  if (net >= 0) return Rational(*num * p10, 1);
  return Rational(*num, p10);
}

Rational rational_from_decimal(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec <= 17; ++prec) {
    char tmp[64];
    std::snprintf(tmp, sizeof(tmp), "%.*g", prec, x);
    double back = 0.0;
    std::sscanf(tmp, "%lf", &back);
    if (back == x) {
      auto r = parse_rational(std::string(tmp));
      if (r) return *r;
      break;
    }
  }
  auto r = parse_rational(std::string(buf));
  return r ? *r : Rational(0);
}

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace svx
