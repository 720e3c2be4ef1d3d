#pragma once

// Icosian quaternions: quaternions whose components lie in (1/2) Z[tau].
// Components are held as Z[tau] numerators over the fixed denominator 2.

#include "aperiodica/exact/golden.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

namespace aperiodica {

class Icosian {
 public:
  Icosian() = default;
  /// Components given as numerators: the quaternion is (w + x i + y j + z k)/2.
  Icosian(GoldenInt w2, GoldenInt x2, GoldenInt y2, GoldenInt z2)
      : num_{std::move(w2), std::move(x2), std::move(y2), std::move(z2)} {}

  static Icosian one() { return Icosian(2, 0, 0, 0); }
  static Icosian unit_i() { return Icosian(0, 2, 0, 0); }
  static Icosian unit_j() { return Icosian(0, 0, 2, 0); }
  static Icosian unit_k() { return Icosian(0, 0, 0, 2); }

  /// Numerator of component c (0 = real part).
  const GoldenInt& numerator(int c) const { return num_[static_cast<std::size_t>(c)]; }
  const std::array<GoldenInt, 4>& numerators() const { return num_; }

  GoldenRational component(int c) const {
    return GoldenRational(numerator(c)) / GoldenRational(Rational(2));
  }

  /// Quaternion conjugate w - xi - yj - zk.
  Icosian conjugate() const { return Icosian(num_[0], -num_[1], -num_[2], -num_[3]); }

  /// Galois conjugation of every component (the star map on the icosian ring).
  Icosian star() const {
    return Icosian(num_[0].conjugate(), num_[1].conjugate(), num_[2].conjugate(), num_[3].conjugate());
  }

  /// Quaternion norm w^2 + x^2 + y^2 + z^2.
  GoldenRational norm() const {
    GoldenInt s;
    for (const auto& c : num_) s += c * c;
    return GoldenRational(s) / GoldenRational(Rational(4));
  }

  /// Real bilinear form Re(p conj(q)) = sum of componentwise products.
  friend GoldenRational inner(const Icosian& p, const Icosian& q) {
    GoldenInt s;
    for (std::size_t c = 0; c < 4; ++c) s += p.num_[c] * q.num_[c];
    return GoldenRational(s) / GoldenRational(Rational(4));
  }

  Icosian operator-() const { return Icosian(-num_[0], -num_[1], -num_[2], -num_[3]); }
  friend Icosian operator+(const Icosian& p, const Icosian& q) {
    return Icosian(p.num_[0] + q.num_[0], p.num_[1] + q.num_[1], p.num_[2] + q.num_[2], p.num_[3] + q.num_[3]);
  }
  friend Icosian operator-(const Icosian& p, const Icosian& q) { return p + (-q); }

  friend Icosian operator*(const GoldenInt& s, const Icosian& q) {
    return Icosian(s * q.num_[0], s * q.num_[1], s * q.num_[2], s * q.num_[3]);
  }

  /// Hamilton product. Throws if the result leaves (1/2) Z[tau]^4, which
  /// cannot happen for elements of the icosian ring.
  friend Icosian operator*(const Icosian& p, const Icosian& q) {
    const auto& [a1, b1, c1, d1] = p.num_;
    const auto& [a2, b2, c2, d2] = q.num_;
    // numerators of the product are (.)/4 * 2 = (.)/2
    std::array<GoldenInt, 4> twice{
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    };
    Icosian out;
    for (std::size_t c = 0; c < 4; ++c) {
      const GoldenInt& t = twice[c];
      if (t.a() % 2 != 0 || t.b() % 2 != 0)
        throw std::domain_error("Icosian: product leaves the half-integral Z[tau] lattice");
      out.num_[c] = GoldenInt(BigInt(t.a() / 2), BigInt(t.b() / 2));
    }
    return out;
  }

  friend bool operator==(const Icosian& p, const Icosian& q) { return p.num_ == q.num_; }

  /// Lexicographic order on numerator coordinates; only used for sorting/lookup.
  friend bool operator<(const Icosian& p, const Icosian& q) {
    for (std::size_t c = 0; c < 4; ++c) {
      if (p.num_[c].a() != q.num_[c].a()) return p.num_[c].a() < q.num_[c].a();
      if (p.num_[c].b() != q.num_[c].b()) return p.num_[c].b() < q.num_[c].b();
    }
    return false;
  }

  /// The eight integers (a_w, b_w, a_x, ..., b_z) of the numerators.
  std::array<BigInt, 8> integer_coordinates() const {
    std::array<BigInt, 8> out;
    for (std::size_t c = 0; c < 4; ++c) {
      out[2 * c] = num_[c].a();
      out[2 * c + 1] = num_[c].b();
    }
    return out;
  }

 private:
  std::array<GoldenInt, 4> num_{};
};

/// The 120 unit icosians: 1/2(+-1,+-1,+-1,+-1), (+-1,0,0,0) with all
/// permutations, and 1/2(0,+-1,+-tau',+-tau) with all even permutations.
/// Returned sorted.
inline std::vector<Icosian> icosian_generators() {
  std::vector<Icosian> out;
  for (int s = 0; s < 16; ++s) {
    auto sg = [&](int bit) { return (s >> bit) & 1 ? -1 : 1; };
    out.emplace_back(sg(0), sg(1), sg(2), sg(3));
  }
  for (int c = 0; c < 4; ++c) {
    for (int sign : {2, -2}) {
      std::array<GoldenInt, 4> v{0, 0, 0, 0};
      v[static_cast<std::size_t>(c)] = sign;
      out.emplace_back(v[0], v[1], v[2], v[3]);
    }
  }
  const std::array<std::array<int, 4>, 12> even_perms{{
      {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 3, 2, 0},
      {2, 0, 1, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 2, 1, 0},
  }};
  for (int s = 0; s < 8; ++s) {
    auto sg = [&](int bit) { return (s >> bit) & 1 ? -1 : 1; };
    const std::array<GoldenInt, 4> base{
        GoldenInt(0),
        GoldenInt(sg(0)),
        GoldenInt(sg(1)) * GoldenInt::tau_conj(),
        GoldenInt(sg(2)) * GoldenInt::tau(),
    };
    for (const auto& perm : even_perms) {
      std::array<GoldenInt, 4> v;
      for (std::size_t i = 0; i < 4; ++i) v[static_cast<std::size_t>(perm[i])] = base[i];
      out.emplace_back(v[0], v[1], v[2], v[3]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline Icosian icosian_multiply(const Icosian& a, const Icosian& b) { return a * b; }

struct IcosianGroupCheck {
  std::size_t size = 0;
  std::size_t products = 0;   // pairs a, b with a b back in the set
  std::size_t maps = 0;       // maps x -> u x v checked
  std::size_t permuting = 0;  // of those, how many permute the set
  bool units = true;          // every element has norm 1

  bool ok() const { return units && products == size * size && permuting == maps && maps == size * size; }
};

/// Closure of the 120 unit icosians under exact multiplication, and the
/// two-sided maps x -> u x v, read off the exact product table.
inline IcosianGroupCheck icosian_group_check() {
  const auto g = icosian_generators();
  const std::size_t n = g.size();
  IcosianGroupCheck out;
  out.size = n;
  for (const auto& u : g) out.units = out.units && u.norm() == GoldenRational(1);
  constexpr std::size_t kMissing = static_cast<std::size_t>(-1);
  std::vector<std::size_t> table(n * n, kMissing);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const Icosian p = g[a] * g[b];
      const auto it = std::lower_bound(g.begin(), g.end(), p);
      if (it != g.end() && *it == p) {
        table[a * n + b] = static_cast<std::size_t>(it - g.begin());
        ++out.products;
      }
    }
  if (out.products != n * n) return out;
  std::vector<char> seen(n);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) {
      ++out.maps;
      std::fill(seen.begin(), seen.end(), 0);
      bool perm = true;
      for (std::size_t x = 0; x < n && perm; ++x) {
        const std::size_t y = table[table[u * n + x] * n + v];
        perm = !seen[y];
        seen[y] = 1;
      }
      out.permuting += perm;
    }
  return out;
}

/// Eight unit icosians forming a Z-basis of the icosian ring:
///   1, i, j, (1 + tau' i + tau k)/2, (1 + tau' i - tau k)/2,
///   (1 + tau i + tau' j)/2, (1 + tau j + tau' k)/2, (tau' + i + tau j)/2.
inline std::vector<Icosian> icosian_z_basis() {
  const GoldenInt t = GoldenInt::tau();
  const GoldenInt tc = GoldenInt::tau_conj();
  return {
      Icosian::one(),
      Icosian::unit_i(),
      Icosian::unit_j(),
      Icosian(1, tc, 0, t),
      Icosian(1, tc, 0, -t),
      Icosian(1, t, tc, 0),
      Icosian(1, 0, t, tc),
      Icosian(tc, 1, t, 0),
  };
}

/// The rational linear form a + b tau -> a + b under which the icosian ring,
/// with quadratic form 2 * E(N(x)), is the E8 root lattice.
inline Rational euclidean_part(const GoldenRational& x) { return x.a() + x.b(); }

}  // namespace aperiodica
