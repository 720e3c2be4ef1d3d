#pragma once

// Arbitrary precision integers and rationals, plus the conversions the rest
// of the library leans on (exact double -> rational, decimal parsing).

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace aperiodica {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }
inline long double to_long_double(const BigInt& v) { return v.convert_to<long double>(); }
inline long double to_long_double(const Rational& v) {
  return static_cast<long double>(numerator(v).convert_to<long double>() /
                                  denominator(v).convert_to<long double>());
}

inline BigInt abs_big(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

inline BigInt pow_big(const BigInt& base, unsigned exp) {
  return boost::multiprecision::pow(base, exp);
}

inline BigInt gcd_big(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

/// Mathematical modulus: result in [0, m) for m > 0.
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  return q;
}

inline BigInt floor_rational(const Rational& q) {
  return floor_div(numerator(q), denominator(q));
}

inline bool is_integer(const Rational& q) { return denominator(q) == 1; }

/// Every finite double is a dyadic rational; this returns it exactly.
inline Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
  // 53 significant bits
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  BigInt num = scaled;
  if (exp >= 0) return Rational(num << exp);
  return Rational(num, BigInt(1) << (-exp));
}

/// Parses "7", "-3/4", "0.125", "-2.5e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("parse_rational: empty string");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("parse_rational: zero denominator");
    return Rational(num, den);
  }
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  BigInt digits = 0;
  long scale = 0;
  bool seen_digit = false, seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      if (seen_point) --scale;
      seen_digit = true;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      scale += std::stol(s.substr(i + 1));
      break;
    } else {
      throw std::invalid_argument("parse_rational: bad character in '" + s + "'");
    }
  }
  if (!seen_digit) throw std::invalid_argument("parse_rational: no digits in '" + s + "'");
  Rational value(digits);
  if (scale > 0) value *= Rational(pow_big(BigInt(10), static_cast<unsigned>(scale)));
  if (scale < 0) value /= Rational(pow_big(BigInt(10), static_cast<unsigned>(-scale)));
  return negative ? Rational(-value) : value;
}

inline std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace aperiodica
