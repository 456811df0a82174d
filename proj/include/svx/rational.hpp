#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace svx {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

// Parses "p/q", integers, and plain decimal/scientific literals ("0.45",
// "1e-3") into an exact rational. Returns nullopt on malformed input.
std::optional<Rational> parse_rational(const std::string& text);

// Exact rational from the shortest round-trip decimal representation of x.
// Human-entered decimals (0.45) recover the intended fraction (9/20).
Rational rational_from_decimal(double x);

std::string rational_to_string(const Rational& r);

}  // namespace svx
