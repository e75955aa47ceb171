#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <regex>
#include <string>

#include "nsc/error.hpp"

namespace nsc {

/// Arbitrary-precision exact rational.
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p/q", an integer, or a decimal ("2.75", "1e6", "3.001") into an exact rational.
inline Rational parse_rational(const std::string& text) {
  using boost::multiprecision::cpp_int;
  static const std::regex fraction(R"(^\s*([+-]?\d+)\s*/\s*(\d+)\s*$)");
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, fraction)) {
    cpp_int den(m[2].str());
    require(den != 0, "zero denominator in '" + text + "'");
    return Rational(cpp_int(m[1].str()), den);
  }
  if (std::regex_match(text, m, decimal) && (m[2].length() + m[3].length()) > 0) {
    const std::string digits = m[2].str() + m[3].str();
    Rational value(cpp_int(digits), boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(m[3].length())));
    if (m[4].matched) {
      const long e = std::stol(m[4].str());
      require(std::labs(e) <= 308, "exponent out of range in '" + text + "'");
      const cpp_int p = boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(std::labs(e)));
      value = e >= 0 ? Rational(value * p) : Rational(value / p);
    }
    return m[1].str() == "-" ? Rational(-value) : value;
  }
  throw InvalidArgument("not a number: '" + text + "'");
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

}  // namespace nsc
