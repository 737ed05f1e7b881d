#include "derand/rational.hpp"

#include <stdexcept>

namespace derand {

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    BigInt num(text.substr(0, slash));
    BigInt den(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(BigInt(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  BigInt den = 1;
  for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
  if (digits.empty() || digits == "-") throw std::invalid_argument("bad rational '" + text + "'");
  return Rational(BigInt(digits), den);
}

std::string to_string(const Rational& q) {
  auto num = boost::multiprecision::numerator(q);
  auto den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

nlohmann::json rational_json(const Rational& q) {
  return {{"num", boost::multiprecision::numerator(q).str()},
          {"den", boost::multiprecision::denominator(q).str()},
          {"value", to_double(q)}};
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_object()) {
    return Rational(BigInt(j.at("num").get<std::string>()), BigInt(j.at("den").get<std::string>()));
  }
  throw std::invalid_argument("cannot read rational from json");
}

Rational pow2(long e) {
  BigInt p = 1;
  p <<= static_cast<unsigned>(e < 0 ? -e : e);
  if (e < 0) return Rational(BigInt(1), p);
  return Rational(p);
}

}  // namespace derand
