#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

namespace derand {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "a", "a/b" or a decimal such as "0.125" into an exact rational.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& q);
double to_double(const Rational& q);

// {"num": "...", "den": "...", "value": <double>}
nlohmann::json rational_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j);

// 2^e as a rational, e may be negative.
Rational pow2(long e);

}  // namespace derand
