#pragma once

// Truncated p-adic integers and the p-adic valuation/metric on Q.

#include "aperiodica/exact/number.hpp"

#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aperiodica {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t f = 3; f * f <= n; f += 2)
    if (n % f == 0) return false;
  return true;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument("p-adic: " + std::to_string(p) + " is not prime");
}

/// nu_p, with a dedicated infinity for nu_p(0).
struct Valuation {
  bool infinite = false;
  long value = 0;

  static Valuation infinity() { return {true, 0}; }
  friend bool operator==(const Valuation&, const Valuation&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Valuation& v) {
  return v.infinite ? (os << "inf") : (os << v.value);
}

inline long valuation_of_integer(BigInt n, std::uint64_t p) {
  long k = 0;
  const BigInt bp = p;
  while (n % bp == 0) {
    n /= bp;
    ++k;
  }
  return k;
}

inline Valuation padic_valuation(const Rational& x, std::uint64_t p) {
  require_prime(p);
  if (x == 0) return Valuation::infinity();
  return {false, valuation_of_integer(numerator(x), p) - valuation_of_integer(denominator(x), p)};
}

/// Exact p^{-nu_p(y - x)}.
inline Rational padic_distance_exact(const Rational& x, const Rational& y, std::uint64_t p) {
  const Valuation v = padic_valuation(y - x, p);
  if (v.infinite) return Rational(0);
  if (v.value >= 0) return Rational(BigInt(1), pow_big(BigInt(p), static_cast<unsigned>(v.value)));
  return Rational(pow_big(BigInt(p), static_cast<unsigned>(-v.value)));
}

inline double padic_distance(const Rational& x, const Rational& y, std::uint64_t p) {
  return to_double(padic_distance_exact(x, y, p));
}

/// An element of Z_p known modulo p^K.
class PAdicApprox {
 public:
  static constexpr int kDefaultDepth = 32;

  PAdicApprox() : PAdicApprox(2, kDefaultDepth) {}
  PAdicApprox(std::uint64_t p, int depth) : p_(p), depth_(depth), modulus_(pow_big(BigInt(p), static_cast<unsigned>(depth))) {
    if (depth < 1) throw std::invalid_argument("PAdicApprox: depth must be positive");
  }

  static PAdicApprox from_integer(const BigInt& n, std::uint64_t p, int depth = kDefaultDepth) {
    PAdicApprox out(p, depth);
    out.residue_ = mod_floor(n, out.modulus_);
    return out;
  }

  /// Rationals whose denominator is prime to p lie in Z_p.
  static PAdicApprox from_rational(const Rational& q, std::uint64_t p, int depth = kDefaultDepth) {
    PAdicApprox out(p, depth);
    const BigInt den = denominator(q);
    if (den % BigInt(p) == 0) throw std::domain_error("PAdicApprox: rational is not a p-adic integer");
    out.residue_ = mod_floor(numerator(q) * inverse_mod(den, out.modulus_), out.modulus_);
    return out;
  }

  /// Digits a_0, a_1, ... with value sum a_n p^n.
  static PAdicApprox from_digits(const std::vector<int>& digits, std::uint64_t p, int depth = kDefaultDepth) {
    BigInt v = 0, scale = 1;
    for (int i = 0; i < static_cast<int>(digits.size()) && i < depth; ++i) {
      v += scale * digits[static_cast<std::size_t>(i)];
      scale *= p;
    }
    return from_integer(v, p, depth);
  }

  std::uint64_t prime() const { return p_; }
  int depth() const { return depth_; }
  const BigInt& residue() const { return residue_; }
  const BigInt& modulus() const { return modulus_; }

  std::vector<int> digits() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(depth_));
    BigInt r = residue_;
    const BigInt bp = p_;
    for (int i = 0; i < depth_; ++i) {
      out.push_back(static_cast<int>(r % bp));
      r /= bp;
    }
    return out;
  }

  bool is_zero() const { return residue_ == 0; }

  /// Index of the first nonzero digit; a zero residue only certifies nu >= depth.
  Valuation valuation() const {
    if (residue_ == 0) return Valuation::infinity();
    return {false, valuation_of_integer(residue_, p_)};
  }

  /// True when x and y agree modulo p^k.
  bool congruent(const PAdicApprox& other, int k) const {
    const BigInt m = pow_big(BigInt(p_), static_cast<unsigned>(k));
    return mod_floor(residue_ - other.residue_, m) == 0;
  }

  /// Canonical representative of the residue in (-p^K/2, p^K/2].
  BigInt balanced() const {
    BigInt r = residue_;
    if (2 * r > modulus_) r -= modulus_;
    return r;
  }

  PAdicApprox operator-() const { return from_integer(-residue_, p_, depth_); }
  friend PAdicApprox operator+(const PAdicApprox& x, const PAdicApprox& y) {
    x.check_compatible(y);
    return from_integer(x.residue_ + y.residue_, x.p_, x.depth_);
  }
  friend PAdicApprox operator-(const PAdicApprox& x, const PAdicApprox& y) {
    x.check_compatible(y);
    return from_integer(x.residue_ - y.residue_, x.p_, x.depth_);
  }
  friend PAdicApprox operator*(const PAdicApprox& x, const PAdicApprox& y) {
    x.check_compatible(y);
    return from_integer(x.residue_ * y.residue_, x.p_, x.depth_);
  }
  friend bool operator==(const PAdicApprox& x, const PAdicApprox& y) {
    return x.p_ == y.p_ && x.depth_ == y.depth_ && x.residue_ == y.residue_;
  }

  friend std::ostream& operator<<(std::ostream& os, const PAdicApprox& x) { return os << x.digit_string(); }

  /// Digits most significant first, e.g. "...0101" in base p (comma separated when p > 10).
  std::string digit_string() const {
    const auto ds = digits();
    std::string out = "...";
    for (auto it = ds.rbegin(); it != ds.rend(); ++it) {
      if (p_ > 10 && it != ds.rbegin()) out += ',';
      out += std::to_string(*it);
    }
    return out;
  }

  static BigInt inverse_mod(const BigInt& a, const BigInt& m) {
    BigInt g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
    while (a1 != 0) {
      BigInt q = g / a1;
      BigInt t = g - q * a1;
      g = a1;
      a1 = t;
      t = x - q * x1;
      x = x1;
      x1 = t;
    }
    if (g != 1) throw std::domain_error("PAdicApprox: element not invertible");
    return mod_floor(x, m);
  }

 private:
  void check_compatible(const PAdicApprox& o) const {
    if (p_ != o.p_ || depth_ != o.depth_) throw std::invalid_argument("PAdicApprox: mismatched prime or depth");
  }

  std::uint64_t p_;
  int depth_;
  BigInt modulus_;
  BigInt residue_ = 0;
};

/// Componentwise sup of p^{-nu} over a vector of truncated p-adics; exact as a rational.
/// Differences that vanish to full depth report p^{-depth}, the resolution limit.
inline Rational padic_vector_distance(const std::vector<PAdicApprox>& x, const std::vector<PAdicApprox>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("padic_vector_distance: dimension mismatch");
  Rational best = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const PAdicApprox diff = x[i] - y[i];
    const Valuation v = diff.valuation();
    const long e = v.infinite ? diff.depth() : v.value;
    const Rational d(BigInt(1), pow_big(BigInt(diff.prime()), static_cast<unsigned>(e)));
    if (d > best) best = d;
  }
  return best;
}

}  // namespace aperiodica
