#pragma once

// Cut-and-project schemes R^d <- L~ -> G: the lattice is stored through the
// images of a Z-basis on both sides, exactly over Q(sqrt 5) where possible.

#include "aperiodica/error.hpp"
#include "aperiodica/exact/golden.hpp"
#include "aperiodica/exact/icosian.hpp"
#include "aperiodica/exact/matrix.hpp"
#include "aperiodica/exact/padic.hpp"
#include "aperiodica/numeric/lattice_enum.hpp"
#include "aperiodica/numeric/random.hpp"
#include "aperiodica/numeric/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

namespace aperiodica {

using ExactVector = std::vector<GoldenRational>;

struct PAdicVector {
  std::vector<PAdicApprox> coords;
  friend bool operator==(const PAdicVector&, const PAdicVector&) = default;
};

using InternalPoint = std::variant<ExactVector, RealVector, PAdicVector>;

inline RealVector to_real(const ExactVector& v) {
  RealVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_double();
  return out;
}

inline RealVector to_real(const InternalPoint& u) {
  if (const auto* e = std::get_if<ExactVector>(&u)) return to_real(*e);
  if (const auto* r = std::get_if<RealVector>(&u)) return *r;
  throw unsupported_error("p-adic internal point has no real coordinates");
}

inline std::size_t dimension(const InternalPoint& u) {
  return std::visit([](const auto& v) {
    if constexpr (std::is_same_v<std::decay_t<decltype(v)>, PAdicVector>) return v.coords.size();
    else return v.size();
  }, u);
}

inline std::string to_string(const InternalPoint& u) {
  std::ostringstream os;
  std::visit([&](const auto& v) {
    using V = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<V, PAdicVector>) {
      for (std::size_t i = 0; i < v.coords.size(); ++i) os << (i ? " " : "") << v.coords[i].digit_string();
    } else if constexpr (std::is_same_v<V, ExactVector>) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << to_string(v[i]);
    } else {
      os.precision(12);
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
    }
  }, u);
  return os.str();
}

struct InternalSpace {
  enum class Kind { euclidean, padic };
  Kind kind = Kind::euclidean;
  int dim = 1;
  std::uint64_t p = 0;
  int depth = PAdicApprox::kDefaultDepth;

  static InternalSpace euclidean(int n) { return {Kind::euclidean, n, 0, 0}; }
  static InternalSpace padic(std::uint64_t p, int m, int depth = PAdicApprox::kDefaultDepth) {
    require_prime(p);
    return {Kind::padic, m, p, depth};
  }
  bool is_padic() const { return kind == Kind::padic; }

  std::string describe() const {
    if (is_padic()) return "padic(" + std::to_string(p) + "," + std::to_string(dim) + ")";
    return "euclidean(" + std::to_string(dim) + ")";
  }
};

struct LatticePoint {
  IntVec coords;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

inline IntVec operator+(const IntVec& a, const IntVec& b) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}
inline IntVec operator-(const IntVec& a, const IntVec& b) {
  IntVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

class CutProjectScheme {
 public:
  std::string name;
  int d = 0;
  InternalSpace internal;
  int rank = 0;
  /// Exact images of the basis: columns of phys (D x rank) and inner (N x rank).
  /// For p-adic internal spaces inner holds integers and N = m.
  Matrix<GoldenRational> phys;
  Matrix<GoldenRational> inner;
  /// Optional orthonormal frames taking the ambient spaces (dimensions D, N) down to d and n.
  std::optional<Matrix<double>> phys_frame;
  std::optional<Matrix<double>> inner_frame;
  double covolume = 0;

  CutProjectScheme() = default;
  CutProjectScheme(std::string name_, int d_, InternalSpace internal_, Matrix<GoldenRational> phys_, Matrix<GoldenRational> inner_,
                   std::optional<Matrix<double>> phys_frame_ = std::nullopt, std::optional<Matrix<double>> inner_frame_ = std::nullopt)
      : name(std::move(name_)), d(d_), internal(internal_), rank(static_cast<int>(phys_.cols())), phys(std::move(phys_)),
        inner(std::move(inner_)), phys_frame(std::move(phys_frame_)), inner_frame(std::move(inner_frame_)) {
    if (inner.cols() != phys.cols()) throw std::invalid_argument("scheme: physical and internal bases differ in rank");
    phys_d_ = to_double_matrix(phys);
    if (phys_frame) phys_d_ = *phys_frame * phys_d_;
    if (static_cast<int>(phys_d_.rows()) != d) throw std::invalid_argument("scheme: physical basis does not match d");
    if (internal.is_padic()) {
      for (std::size_t i = 0; i < inner.rows(); ++i)
        for (std::size_t j = 0; j < inner.cols(); ++j)
          if (inner(i, j).b() != 0 || !is_integer(inner(i, j).a()))
            throw std::invalid_argument("scheme: p-adic embedding must have integer entries");
      if (static_cast<int>(inner.rows()) != internal.dim) throw std::invalid_argument("scheme: internal basis does not match m");
    } else {
      inner_d_ = to_double_matrix(inner);
      if (inner_frame) inner_d_ = *inner_frame * inner_d_;
      if (static_cast<int>(inner_d_.rows()) != internal.dim) throw std::invalid_argument("scheme: internal basis does not match n");
    }
    covolume = compute_covolume();
  }

  bool has_exact_physical() const { return !phys_frame; }
  bool has_exact_internal() const { return !inner_frame && !internal.is_padic(); }

  const Matrix<double>& physical_matrix() const { return phys_d_; }
  const Matrix<double>& internal_matrix() const {
    if (internal.is_padic()) throw unsupported_error("scheme: p-adic internal space has no real matrix");
    return inner_d_;
  }

  /// (d + n) x rank real embedding matrix; Euclidean internal spaces only.
  Matrix<double> embedding_matrix() const {
    const auto& im = internal_matrix();
    Matrix<double> m(phys_d_.rows() + im.rows(), static_cast<std::size_t>(rank));
    for (std::size_t j = 0; j < m.cols(); ++j) {
      for (std::size_t i = 0; i < phys_d_.rows(); ++i) m(i, j) = phys_d_(i, j);
      for (std::size_t i = 0; i < im.rows(); ++i) m(phys_d_.rows() + i, j) = im(i, j);
    }
    return m;
  }

  RealVector physical(const IntVec& z) const { return apply(phys_d_, z); }

  ExactVector physical_exact(const IntVec& z) const {
    if (phys_frame) throw unsupported_error("scheme '" + name + "': physical coordinates are only known numerically");
    return apply_exact(phys, z);
  }

  ExactVector internal_exact(const IntVec& z) const {
    if (!has_exact_internal()) throw unsupported_error("scheme '" + name + "': internal coordinates are only known numerically");
    return apply_exact(inner, z);
  }

  RealVector internal_real(const IntVec& z) const { return apply(internal_matrix(), z); }

  InternalPoint star(const IntVec& z) const {
    check_rank(z);
    if (internal.is_padic()) {
      PAdicVector out;
      for (std::size_t i = 0; i < inner.rows(); ++i) {
        BigInt s = 0;
        for (std::size_t j = 0; j < inner.cols(); ++j) s += numerator(inner(i, j).a()) * z[j];
        out.coords.push_back(PAdicApprox::from_integer(s, internal.p, internal.depth));
      }
      return out;
    }
    if (inner_frame) return internal_real(z);
    return internal_exact(z);
  }

  void check_rank(const IntVec& z) const {
    if (static_cast<int>(z.size()) != rank) throw std::invalid_argument("scheme: lattice coordinate vector has wrong length");
  }

 private:
  static RealVector apply(const Matrix<double>& m, const IntVec& z) {
    RealVector out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * static_cast<double>(z[j]);
    return out;
  }
  static ExactVector apply_exact(const Matrix<GoldenRational>& m, const IntVec& z) {
    ExactVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (z[j] != 0) out[i] += m(i, j) * GoldenRational(Rational(z[j]));
    return out;
  }

  double compute_covolume() const {
    if (internal.is_padic()) {
      // Haar measure of Z_p^m is 1, so only the physical lattice contributes
      if (phys_d_.rows() != phys_d_.cols()) throw std::invalid_argument("scheme: p-adic schemes need rank equal to d");
      return std::fabs(determinant(phys_d_));
    }
    const Matrix<double> m = embedding_matrix();
    if (m.rows() == m.cols() && has_exact_physical() && has_exact_internal()) {
      Matrix<GoldenRational> e(m.rows(), m.cols());
      for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < phys.rows(); ++i) e(i, j) = phys(i, j);
        for (std::size_t i = 0; i < inner.rows(); ++i) e(phys.rows() + i, j) = inner(i, j);
      }
      return std::fabs(determinant(e).to_double());
    }
    const Matrix<double> gram = m.transpose() * m;
    return std::sqrt(std::fabs(determinant(gram)));
  }

  Matrix<double> phys_d_;
  Matrix<double> inner_d_;
};

inline InternalPoint star_map(const CutProjectScheme& s, const LatticePoint& x) { return s.star(x.coords); }

// ---------------------------------------------------------------------------
// named schemes

inline CutProjectScheme make_fibonacci_scheme() {
  const GoldenRational t = GoldenRational::tau();
  return CutProjectScheme("fibonacci", 1, InternalSpace::euclidean(1),
                          Matrix<GoldenRational>::from_rows({{GoldenRational(1), t}}),
                          Matrix<GoldenRational>::from_rows({{GoldenRational(1), t.conjugate()}}));
}

/// The icosian ring with x -> (x, x*), using the basis of icosian_z_basis().
inline CutProjectScheme make_icosian_scheme() {
  const auto basis = icosian_z_basis();
  Matrix<GoldenRational> phys(4, 8), inner(4, 8);
  for (std::size_t j = 0; j < 8; ++j)
    for (int c = 0; c < 4; ++c) {
      phys(static_cast<std::size_t>(c), j) = basis[j].component(c);
      inner(static_cast<std::size_t>(c), j) = basis[j].component(c).conjugate();
    }
  return CutProjectScheme("icosian", 4, InternalSpace::euclidean(4), std::move(phys), std::move(inner));
}

/// Gram matrix of the scheme's lattice under 2 Tr(s B(x, y)) with s = tau/sqrt5,
/// i.e. the embedding rescaled by sqrt(tau/sqrt5) and its conjugate. On the
/// icosian scheme this is an E8 Gram matrix.
inline Matrix<Rational> icosian_scaled_gram(const CutProjectScheme& s) {
  if (!s.has_exact_physical()) throw unsupported_error("icosian_scaled_gram: needs an exact physical basis");
  // tau/sqrt5 = (2 + tau)/5, and Tr(s (a + b tau)) = a + b
  const GoldenRational scale(Rational(2, 5), Rational(1, 5));
  Matrix<Rational> g(static_cast<std::size_t>(s.rank), static_cast<std::size_t>(s.rank));
  for (int i = 0; i < s.rank; ++i)
    for (int j = 0; j < s.rank; ++j) {
      GoldenRational b;
      for (std::size_t c = 0; c < s.phys.rows(); ++c) b += s.phys(c, static_cast<std::size_t>(i)) * s.phys(c, static_cast<std::size_t>(j));
      const GoldenRational sb = scale * b;
      g(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = Rational(2) * Rational(sb.trace());
    }
  return g;
}

struct E8Check {
  bool integral = true, even = true, symmetric = true;
  Rational det;
  std::size_t minimal_vectors = 0;  // vectors of norm 2
  std::size_t shorter = 0;          // nonzero vectors below norm 2

  bool ok() const { return integral && even && symmetric && det == Rational(1) && minimal_vectors == 240 && shorter == 0; }
};

/// Even, unimodular, minimum 2: the scaled icosian Gram matrix as an E8 lattice.
inline E8Check icosian_e8_check(const CutProjectScheme& s) {
  const Matrix<Rational> g = icosian_scaled_gram(s);
  E8Check out;
  const std::size_t n = g.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out.integral = out.integral && is_integer(g(i, j));
      out.symmetric = out.symmetric && g(i, j) == g(j, i);
    }
  for (std::size_t i = 0; i < n && out.integral; ++i) out.even = out.even && numerator(g(i, i)) % 2 == 0;
  out.det = determinant(g);
  const Matrix<double> gd = to_double_matrix(g);
  enumerate_ellipsoid(gd, RealVector(n, 0.0), 2.0, [&](const IntVec& z) {
    double q = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) q += gd(i, j) * static_cast<double>(z[i] * z[j]);
    const long long qi = std::llround(q);
    if (qi == 2) ++out.minimal_vectors;
    else if (qi != 0) ++out.shorter;
  });
  return out;
}

namespace detail {

/// Sublattice of s cut out by integer linear conditions A z = 0; returns the kernel basis.
inline Matrix<BigInt> sublattice_kernel(const Matrix<GoldenRational>& conditions) {
  return integer_kernel(clear_denominators(split_golden(conditions)));
}

inline Matrix<double> orthonormal_complement(const RealVector& axis) {
  // Gram-Schmidt on the standard basis against the axis
  const double n = std::sqrt(norm2(axis));
  RealVector a = axis;
  for (double& v : a) v /= n;
  std::vector<RealVector> frame;
  for (int e = 0; e < 3 && frame.size() < 2; ++e) {
    RealVector v(3, 0.0);
    v[static_cast<std::size_t>(e)] = 1;
    auto project_out = [&](const RealVector& w) {
      double dot = 0;
      for (int i = 0; i < 3; ++i) dot += v[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(i)];
      for (int i = 0; i < 3; ++i) v[static_cast<std::size_t>(i)] -= dot * w[static_cast<std::size_t>(i)];
    };
    project_out(a);
    for (const auto& f : frame) project_out(f);
    const double len = std::sqrt(norm2(v));
    if (len < 1e-6) continue;
    for (double& x : v) x /= len;
    frame.push_back(v);
  }
  return Matrix<double>::from_rows(frame);
}

}  // namespace detail

/// A 5-fold axis of the icosian group in pure-quaternion coordinates: the
/// imaginary part of a unit of order 10 (real part tau/2), scaled into Z[tau]^3.
inline ExactVector default_fivefold_axis() {
  for (const auto& u : icosian_generators()) {
    if (u.component(0) == GoldenRational(Rational(0), Rational(1, 2)))
      return {GoldenRational(u.numerator(1)), GoldenRational(u.numerator(2)), GoldenRational(u.numerator(3))};
  }
  throw std::logic_error("no unit with real part tau/2");
}

/// Restriction of the icosian scheme to pure quaternions (rank 6, d = 3). With
/// an axis, the further restriction to the plane orthogonal to it (d = 2); for
/// a 5-fold axis the planar lattice has rank 4.
inline CutProjectScheme restrict_to_pure_quaternions(const CutProjectScheme& icosian,
                                                     const std::optional<ExactVector>& axis = std::nullopt) {
  if (icosian.name != "icosian" || icosian.rank != 8)
    throw std::invalid_argument("restrict_to_pure_quaternions: input must be the icosian scheme");
  // conditions: real part = 0, and <x, axis> = 0 if an axis is given
  std::vector<std::vector<GoldenRational>> rows{icosian.phys.row(0)};
  if (axis) {
    if (axis->size() != 3) throw std::invalid_argument("restrict_to_pure_quaternions: axis must have 3 components");
    std::vector<GoldenRational> cond(8);
    for (std::size_t j = 0; j < 8; ++j)
      for (std::size_t c = 0; c < 3; ++c) cond[j] += icosian.phys(c + 1, j) * (*axis)[c];
    rows.push_back(cond);
  }
  const Matrix<BigInt> k = detail::sublattice_kernel(Matrix<GoldenRational>::from_rows(rows));
  const Matrix<GoldenRational> kg = k.map([](const BigInt& v) { return GoldenRational(Rational(v)); });
  Matrix<GoldenRational> phys3(3, k.cols()), inner3(3, k.cols());
  const Matrix<GoldenRational> p = icosian.phys * kg;
  const Matrix<GoldenRational> q = icosian.inner * kg;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t j = 0; j < k.cols(); ++j) {
      phys3(c, j) = p(c + 1, j);
      inner3(c, j) = q(c + 1, j);
    }
  if (!axis) {
    if (k.cols() != 6) throw std::logic_error("pure quaternion sublattice should have rank 6");
    return CutProjectScheme("h3", 3, InternalSpace::euclidean(3), std::move(phys3), std::move(inner3));
  }
  if (k.cols() != 4)
    throw std::invalid_argument("restrict_to_pure_quaternions: planar sublattice has rank " + std::to_string(k.cols()) + ", expected 4");
  ExactVector star_axis(3);
  for (std::size_t c = 0; c < 3; ++c) star_axis[c] = (*axis)[c].conjugate();
  auto pf = detail::orthonormal_complement(to_real(*axis));
  auto nf = detail::orthonormal_complement(to_real(star_axis));
  return CutProjectScheme("h2", 2, InternalSpace::euclidean(2), std::move(phys3), std::move(inner3), std::move(pf), std::move(nf));
}

/// Z^m embedded diagonally in R^m x Z_p^m.
inline CutProjectScheme make_padic_diagonal_scheme(std::uint64_t p, int m, int depth = PAdicApprox::kDefaultDepth) {
  auto id = Matrix<GoldenRational>::identity(static_cast<std::size_t>(m));
  return CutProjectScheme("padic-diagonal", m, InternalSpace::padic(p, m, depth), id, id);
}

inline CutProjectScheme make_robinson_scheme(int depth = PAdicApprox::kDefaultDepth) {
  auto s = make_padic_diagonal_scheme(2, 2, depth);
  s.name = "robinson";
  return s;
}

inline CutProjectScheme make_custom_scheme(int d, InternalSpace internal, Matrix<GoldenRational> phys, Matrix<GoldenRational> inner) {
  return CutProjectScheme("custom", d, internal, std::move(phys), std::move(inner));
}

// ---------------------------------------------------------------------------
// dual lattice

struct DualLattice {
  int d = 0;
  /// Rows are dual basis vectors k_i in R^d x R^n with <k_i, b_j> = delta_ij.
  Matrix<double> basis;
  std::optional<Matrix<GoldenRational>> exact;

  RealVector vector(const IntVec& m) const {
    RealVector out(basis.cols(), 0.0);
    for (std::size_t i = 0; i < basis.rows(); ++i)
      for (std::size_t j = 0; j < basis.cols(); ++j) out[j] += static_cast<double>(m[i]) * basis(i, j);
    return out;
  }
  RealVector physical(const IntVec& m) const {
    auto v = vector(m);
    v.resize(static_cast<std::size_t>(d));
    return v;
  }
  RealVector internal(const IntVec& m) const {
    auto v = vector(m);
    return RealVector(v.begin() + d, v.end());
  }
  ExactVector vector_exact(const IntVec& m) const {
    if (!exact) throw unsupported_error("dual lattice: no exact basis");
    ExactVector out(exact->cols());
    for (std::size_t i = 0; i < exact->rows(); ++i)
      for (std::size_t j = 0; j < exact->cols(); ++j)
        if (m[i] != 0) out[j] += GoldenRational(Rational(m[i])) * (*exact)(i, j);
    return out;
  }
};

inline DualLattice dual_lattice(const CutProjectScheme& s) {
  if (s.internal.is_padic())
    throw unsupported_error("dual_lattice: p-adic internal space; Bragg positions are computed from dyadic characters instead");
  const Matrix<double> m = s.embedding_matrix();
  if (m.rows() != m.cols()) throw unsupported_error("dual_lattice: embedding is not full rank in R^d x R^n");
  DualLattice out;
  out.d = s.d;
  if (s.has_exact_physical() && s.has_exact_internal()) {
    Matrix<GoldenRational> e(m.rows(), m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      for (std::size_t i = 0; i < s.phys.rows(); ++i) e(i, j) = s.phys(i, j);
      for (std::size_t i = 0; i < s.inner.rows(); ++i) e(s.phys.rows() + i, j) = s.inner(i, j);
    }
    out.exact = inverse(e);  // rows pair with columns of e to the identity
    out.basis = to_double_matrix(*out.exact);
  } else {
    out.basis = inverse(m);
  }
  return out;
}

/// Max distance of <k_i, b_j> from the nearest integer over sampled pairs.
inline double dual_pairing_defect(const CutProjectScheme& s, const DualLattice& dual, int samples = 200, std::uint64_t seed = 1) {
  SplitMix64 rng(seed);
  const Matrix<double> m = s.embedding_matrix();
  double worst = 0;
  for (int t = 0; t < samples; ++t) {
    IntVec a(static_cast<std::size_t>(s.rank)), b(static_cast<std::size_t>(s.rank));
    for (auto& v : a) v = static_cast<long long>(rng() % 21) - 10;
    for (auto& v : b) v = static_cast<long long>(rng() % 21) - 10;
    const RealVector k = dual.vector(a);
    double dot = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double x = 0;
      for (std::size_t j = 0; j < m.cols(); ++j) x += m(i, j) * static_cast<double>(b[j]);
      dot += k[i] * x;
    }
    worst = std::max(worst, std::fabs(dot - std::round(dot)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// structural checks

struct InjectivityReport {
  bool exact_injective = false;   // the physical map has trivial kernel over Z (exact rank test)
  std::size_t sampled = 0;
  bool sample_distinct = false;   // no two sampled coordinate vectors share a physical image
};

/// Exact rank test plus an explicit collision scan over [-box, box]^rank
/// (the whole box when it has at most max_points elements, otherwise a random sample).
inline InjectivityReport injectivity_check(const CutProjectScheme& s, int box = 20, std::size_t max_points = 2'000'000,
                                           std::uint64_t seed = 3) {
  InjectivityReport rep;
  const Matrix<Rational> split = split_golden(s.phys);
  rep.exact_injective = static_cast<int>(matrix_rank(split)) == s.rank;
  const Matrix<BigInt> a = clear_denominators(split);
  Matrix<long long> ai(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) ai(i, j) = a(i, j).convert_to<long long>();
  struct VecHash {
    std::size_t operator()(const IntVec& v) const {
      std::uint64_t h = 0;
      for (long long x : v) h = SplitMix64::mix(h ^ static_cast<std::uint64_t>(x));
      return static_cast<std::size_t>(h);
    }
  };
  std::unordered_set<IntVec, VecHash> images;
  const auto side = static_cast<double>(2 * box + 1);
  const bool full = std::pow(side, s.rank) <= static_cast<double>(max_points);
  std::set<IntVec> seen_coords;
  bool distinct = true;
  auto add = [&](const IntVec& z) {
    if (!full && !seen_coords.insert(z).second) return;
    IntVec img(ai.rows(), 0);
    for (std::size_t i = 0; i < ai.rows(); ++i)
      for (std::size_t j = 0; j < ai.cols(); ++j) img[i] += ai(i, j) * z[j];
    if (!images.insert(img).second) distinct = false;
    ++rep.sampled;
  };
  IntVec z(static_cast<std::size_t>(s.rank), -box);
  if (full) {
    while (true) {
      add(z);
      std::size_t i = 0;
      while (i < z.size() && ++z[i] > box) z[i++] = -box;
      if (i == z.size()) break;
    }
  } else {
    SplitMix64 rng(seed);
    for (std::size_t t = 0; t < max_points / 10; ++t) {
      for (auto& v : z) v = static_cast<long long>(rng() % static_cast<std::uint64_t>(2 * box + 1)) - box;
      add(z);
    }
  }
  rep.sample_distinct = distinct;
  return rep;
}

}  // namespace aperiodica
