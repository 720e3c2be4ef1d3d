#pragma once

/**
 * @file golden.hpp
 * @brief Exact arithmetic in Z[tau] and Q(sqrt 5).
 *
 * A value is stored as a + b*tau with tau = (1 + sqrt 5)/2, so that
 * Golden<BigInt> is the ring Z[tau] and Golden<Rational> is the field
 * Q(tau) = Q(sqrt 5). Galois conjugation sends sqrt 5 to -sqrt 5, i.e.
 * tau to tau' = 1 - tau.
 *
 * Sign determination is exact. A long double estimate decides almost every
 * comparison; only values too close to zero for the estimate fall through to
 * the exact test on (2a + b) + b*sqrt 5.
 */

#include "aperiodica/exact/number.hpp"

#include <cmath>
#include <concepts>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace aperiodica {

inline constexpr long double kTau = 1.6180339887498948482045868343656381L;
inline constexpr long double kTauConj = -0.6180339887498948482045868343656381L;
inline constexpr long double kSqrt5 = 2.2360679774997896964091736687312762L;

template <class T>
class Golden {
 public:
  Golden() : a_(0), b_(0) {}
  Golden(T a) : a_(std::move(a)), b_(0) {}  // NOLINT: implicit embedding of the base ring
  Golden(T a, T b) : a_(std::move(a)), b_(std::move(b)) {}
  template <std::integral I>
  Golden(I a) : a_(a), b_(0) {}  // NOLINT
  template <std::integral I, std::integral J>
  Golden(I a, J b) : a_(a), b_(b) {}

  template <class U>
    requires(!std::same_as<U, T>)
  explicit Golden(const Golden<U>& other) : a_(T(other.a())), b_(T(other.b())) {}

  static Golden tau() { return Golden(T(0), T(1)); }
  static Golden tau_conj() { return Golden(T(1), T(-1)); }

  const T& a() const { return a_; }
  const T& b() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }

  /// Galois conjugate: (a + b tau)' = (a + b) - b tau.
  Golden conjugate() const { return Golden(a_ + b_, T(-b_)); }

  /// Field norm x * x' = a^2 + ab - b^2.
  T norm() const { return a_ * a_ + a_ * b_ - b_ * b_; }

  /// Trace x + x' = 2a + b.
  T trace() const { return T(2) * a_ + b_; }

  long double to_long_double() const {
    return to_ld(a_) + to_ld(b_) * kTau;
  }
  double to_double() const { return static_cast<double>(to_long_double()); }

  /// Real value of the conjugate, computed without forming the conjugate.
  long double conj_long_double() const { return to_ld(a_) + to_ld(b_) * kTauConj; }

  /// -1, 0 or +1, exactly.
  int sign() const {
    const long double approx = to_long_double();
    const long double scale = std::fabs(to_ld(a_)) + std::fabs(to_ld(b_)) * kTau;
    if (std::fabs(approx) > scale * 1e-15L + 1e-300L) return approx > 0 ? 1 : -1;
    return exact_sign();
  }

  int exact_sign() const {
    // value = (p + q sqrt5)/2 with p = 2a + b, q = b
    const T p = T(2) * a_ + b_;
    const T& q = b_;
    const int sp = p > 0 ? 1 : (p < 0 ? -1 : 0);
    const int sq = q > 0 ? 1 : (q < 0 ? -1 : 0);
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    const T lhs = p * p;
    const T rhs = T(5) * q * q;
    if (lhs == rhs) return 0;  // unreachable for rational p,q unless both vanish
    return (lhs > rhs) ? sp : sq;
  }

  Golden operator-() const { return Golden(T(-a_), T(-b_)); }

  Golden& operator+=(const Golden& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  Golden& operator-=(const Golden& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  Golden& operator*=(const Golden& o) {
    // tau^2 = tau + 1
    T na = a_ * o.a_ + b_ * o.b_;
    T nb = a_ * o.b_ + b_ * o.a_ + b_ * o.b_;
    a_ = std::move(na);
    b_ = std::move(nb);
    return *this;
  }
  /// Division; exact in the field case, throws if the quotient leaves Z[tau].
  Golden& operator/=(const Golden& o) {
    const T n = o.norm();
    if (n == 0) throw std::domain_error("Golden: division by zero");
    Golden num = *this * o.conjugate();
    if constexpr (std::same_as<T, BigInt>) {
      if (num.a_ % n != 0 || num.b_ % n != 0)
        throw std::domain_error("Golden: quotient not in Z[tau]");
    }
    a_ = num.a_ / n;
    b_ = num.b_ / n;
    return *this;
  }

  friend Golden operator+(Golden x, const Golden& y) { return x += y; }
  friend Golden operator-(Golden x, const Golden& y) { return x -= y; }
  friend Golden operator*(Golden x, const Golden& y) { return x *= y; }
  friend Golden operator/(Golden x, const Golden& y) { return x /= y; }

  friend bool operator==(const Golden& x, const Golden& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator<(const Golden& x, const Golden& y) { return (x - y).sign() < 0; }
  friend bool operator>(const Golden& x, const Golden& y) { return y < x; }
  friend bool operator<=(const Golden& x, const Golden& y) { return !(y < x); }
  friend bool operator>=(const Golden& x, const Golden& y) { return !(x < y); }

  friend std::ostream& operator<<(std::ostream& os, const Golden& g) { return os << to_string(g); }

  friend std::string to_string(const Golden& g) {
    auto str = [](const T& v) {
      if constexpr (std::same_as<T, Rational>) return aperiodica::to_string(v);
      else return v.str();
    };
    if (g.b_ == 0) return str(g.a_);
    std::string out;
    if (g.a_ != 0) out = str(g.a_);
    if (g.b_ < 0) {
      out += "-" + str(T(-g.b_)) + "*tau";
    } else {
      if (!out.empty()) out += "+";
      out += str(g.b_) + "*tau";
    }
    return out;
  }

 private:
  static long double to_ld(const T& v) { return aperiodica::to_long_double(v); }

  T a_;
  T b_;
};

using GoldenInt = Golden<BigInt>;
using GoldenRational = Golden<Rational>;

inline GoldenRational to_rational(const GoldenInt& g) { return GoldenRational(g); }

inline GoldenInt golden_conjugate(const GoldenInt& x) { return x.conjugate(); }

inline GoldenRational abs(const GoldenRational& x) { return x.sign() < 0 ? -x : x; }
inline GoldenInt abs(const GoldenInt& x) { return x.sign() < 0 ? -x : x; }

inline GoldenRational golden_from_double(double x) { return GoldenRational(rational_from_double(x)); }

/// Parses sums of terms like "2+3*tau", "-1/2*tau", "tau", "0.25-tau".
inline GoldenRational parse_golden(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("parse_golden: empty string");
  Rational a = 0, b = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = pos + 1;
    while (end < s.size()) {
      const char c = s[end];
      const char prev = s[end - 1];
      if ((c == '+' || c == '-') && prev != 'e' && prev != 'E' && prev != '*') break;
      ++end;
    }
    std::string term = s.substr(pos, end - pos);
    pos = end;
    bool negative = false;
    if (!term.empty() && (term[0] == '+' || term[0] == '-')) {
      negative = term[0] == '-';
      term.erase(0, 1);
    }
    if (term.empty()) throw std::invalid_argument("parse_golden: dangling sign in '" + s + "'");
    const auto tau_at = term.find("tau");
    if (tau_at == std::string::npos) {
      Rational v = parse_rational(term);
      a += negative ? Rational(-v) : v;
      continue;
    }
    if (tau_at + 3 != term.size()) throw std::invalid_argument("parse_golden: bad term '" + term + "'");
    std::string coef = term.substr(0, tau_at);
    Rational v = 1;
    if (!coef.empty()) {
      if (coef.back() != '*') throw std::invalid_argument("parse_golden: expected '*' in '" + term + "'");
      coef.pop_back();
      v = parse_rational(coef);
    }
    b += negative ? Rational(-v) : v;
  }
  return GoldenRational(a, b);
}

}  // namespace aperiodica
