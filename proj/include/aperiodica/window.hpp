#pragma once

// Windows W in the internal space: membership, Haar volume, Fourier
// transform of the indicator, genericity scans and the admissible set W_Q.

#include "aperiodica/error.hpp"
#include "aperiodica/polytope.hpp"
#include "aperiodica/scheme.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace aperiodica {

enum class Membership { inside, boundary, outside };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::inside: return "inside";
    case Membership::boundary: return "boundary";
    default: return "outside";
  }
}

struct EmptyWindow {
  int dim = 1;
};

struct IntervalWindow {
  GoldenRational lo, hi;
};

struct BoxWindow {
  std::vector<IntervalWindow> sides;
};

struct BallWindow {
  RealVector center;
  double radius = 0;
};

struct Coset {
  std::vector<BigInt> rep;
  int k = 0;  // the coset rep + p^k Z_p^m
  friend bool operator==(const Coset&, const Coset&) = default;
};

struct CosetUnionWindow {
  std::uint64_t p = 2;
  int m = 1;
  std::vector<Coset> cosets;
  /// Accumulation point of an infinite union truncated to these cosets (its boundary).
  std::optional<PAdicVector> limit;
};

/// Characters of the internal group: real vectors for R^n, vectors of
/// p-power rationals (read mod 1) for Z_p^m.
using DualPoint = std::variant<RealVector, std::vector<Rational>>;

class Window {
 public:
  using Variant = std::variant<EmptyWindow, IntervalWindow, BoxWindow, BallWindow, ConvexPolytope, CosetUnionWindow>;

  static Window empty(int dim = 1) { return Window(EmptyWindow{dim}); }

  static Window interval(GoldenRational lo, GoldenRational hi) {
    if (!(lo < hi)) throw std::invalid_argument("window: interval must have lo < hi");
    return Window(IntervalWindow{std::move(lo), std::move(hi)});
  }

  static Window box(std::vector<IntervalWindow> sides) {
    if (sides.empty()) throw std::invalid_argument("window: box needs at least one side");
    for (const auto& s : sides)
      if (!(s.lo < s.hi)) throw std::invalid_argument("window: degenerate box side");
    return Window(BoxWindow{std::move(sides)});
  }

  static Window ball(RealVector center, double radius) {
    if (!(radius > 0) || center.empty()) throw std::invalid_argument("window: ball needs positive radius");
    return Window(BallWindow{std::move(center), radius});
  }

  static Window polytope(std::vector<RealVector> vertices) { return Window(ConvexPolytope(std::move(vertices))); }

  static Window coset_union(std::uint64_t p, int m, std::vector<Coset> cosets, std::optional<PAdicVector> limit = std::nullopt) {
    require_prime(p);
    if (cosets.empty()) throw std::invalid_argument("window: coset union must be nonempty");
    CosetUnionWindow w{p, m, {}, std::move(limit)};
    for (auto& c : cosets) {
      if (static_cast<int>(c.rep.size()) != m) throw std::invalid_argument("window: coset representative has wrong length");
      if (c.k < 0) throw std::invalid_argument("window: negative coset exponent");
      const BigInt mod = pow_big(BigInt(p), static_cast<unsigned>(c.k));
      for (auto& r : c.rep) r = mod_floor(r, mod);
    }
    std::sort(cosets.begin(), cosets.end(), [](const Coset& a, const Coset& b) {
      return a.k != b.k ? a.k < b.k : a.rep < b.rep;
    });
    for (const auto& c : cosets) {
      bool absorbed = false;
      for (const auto& kept : w.cosets) {
        // kept has k <= c.k: c lies in kept iff the reps agree mod p^{kept.k}
        const BigInt mod = pow_big(BigInt(p), static_cast<unsigned>(kept.k));
        bool inside = true;
        for (int i = 0; i < m && inside; ++i)
          inside = mod_floor(c.rep[static_cast<std::size_t>(i)] - kept.rep[static_cast<std::size_t>(i)], mod) == 0;
        if (inside) {
          absorbed = true;
          break;
        }
      }
      if (!absorbed) w.cosets.push_back(c);
    }
    return Window(std::move(w));
  }

  const Variant& variant() const { return v_; }

  bool is_empty() const { return std::holds_alternative<EmptyWindow>(v_); }
  bool is_padic() const { return std::holds_alternative<CosetUnionWindow>(v_); }

  int dim() const {
    return std::visit([](const auto& w) -> int {
      using W = std::decay_t<decltype(w)>;
      if constexpr (std::is_same_v<W, EmptyWindow>) return w.dim;
      else if constexpr (std::is_same_v<W, IntervalWindow>) return 1;
      else if constexpr (std::is_same_v<W, BoxWindow>) return static_cast<int>(w.sides.size());
      else if constexpr (std::is_same_v<W, BallWindow>) return static_cast<int>(w.center.size());
      else if constexpr (std::is_same_v<W, ConvexPolytope>) return static_cast<int>(w.dim());
      else return w.m;
    }, v_);
  }

  std::string kind() const {
    static const char* names[] = {"empty", "interval", "box", "ball", "polytope", "coset_union"};
    return names[v_.index()];
  }

  /// W1: nonempty, compact, closure of its interior. Checked structurally at
  /// construction for every variant except the explicit empty window.
  bool satisfies_w1() const { return !is_empty(); }

  /// W3 holds for all variants here: their boundaries are Haar-null.
  bool is_regular() const { return !is_empty(); }

  /// Ball in R^n containing W: (center, radius). Euclidean windows only.
  std::pair<RealVector, double> bounding_ball() const {
    return std::visit([](const auto& w) -> std::pair<RealVector, double> {
      using W = std::decay_t<decltype(w)>;
      if constexpr (std::is_same_v<W, EmptyWindow>) return {RealVector(static_cast<std::size_t>(w.dim), 0.0), 0.0};
      else if constexpr (std::is_same_v<W, IntervalWindow>) {
        const double lo = w.lo.to_double(), hi = w.hi.to_double();
        return {{(lo + hi) / 2}, (hi - lo) / 2 * (1 + 1e-12)};
      } else if constexpr (std::is_same_v<W, BoxWindow>) {
        RealVector c;
        double r2 = 0;
        for (const auto& s : w.sides) {
          const double lo = s.lo.to_double(), hi = s.hi.to_double();
          c.push_back((lo + hi) / 2);
          r2 += (hi - lo) * (hi - lo) / 4;
        }
        return {c, std::sqrt(r2) * (1 + 1e-12)};
      } else if constexpr (std::is_same_v<W, BallWindow>) return {w.center, w.radius};
      else if constexpr (std::is_same_v<W, ConvexPolytope>) {
        const RealVector c = w.centroid();
        return {c, w.circumradius_about(c) * (1 + 1e-12)};
      } else throw unsupported_error("bounding_ball: p-adic window");
    }, v_);
  }

  /// Twice a lower bound on the inradius: every line through W's centre
  /// meets W in at least this length. Used to bound the decay of the indicator transform.
  double min_width() const {
    return std::visit([](const auto& w) -> double {
      using W = std::decay_t<decltype(w)>;
      if constexpr (std::is_same_v<W, IntervalWindow>) return (w.hi - w.lo).to_double();
      else if constexpr (std::is_same_v<W, BoxWindow>) {
        double m = std::numeric_limits<double>::infinity();
        for (const auto& s : w.sides) m = std::min(m, (s.hi - s.lo).to_double());
        return m;
      } else if constexpr (std::is_same_v<W, BallWindow>) return 2 * w.radius;
      else if constexpr (std::is_same_v<W, ConvexPolytope>) return 2 * w.inradius_about(w.centroid());
      else return 0.0;
    }, v_);
  }

 private:
  explicit Window(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------
// membership

namespace detail {

inline Membership classify_interval(const IntervalWindow& w, const GoldenRational& u) {
  const int a = (u - w.lo).sign(), b = (w.hi - u).sign();
  if (a < 0 || b < 0) return Membership::outside;
  if (a == 0 || b == 0) return Membership::boundary;
  return Membership::inside;
}

inline Membership classify_tolerance(double excess, double tol) {
  if (excess > tol) return Membership::outside;
  if (excess < -tol) return Membership::inside;
  return Membership::boundary;
}

inline std::vector<PAdicApprox> as_padic(const InternalPoint& u, std::uint64_t p, int depth) {
  if (const auto* pv = std::get_if<PAdicVector>(&u)) return pv->coords;
  if (const auto* ev = std::get_if<ExactVector>(&u)) {
    std::vector<PAdicApprox> out;
    for (const auto& x : *ev) {
      if (x.b() != 0) throw std::invalid_argument("contains: point is not in Q^m");
      out.push_back(PAdicApprox::from_rational(x.a(), p, depth));
    }
    return out;
  }
  throw std::invalid_argument("contains: real point tested against a p-adic window");
}

}  // namespace detail

/// Relative tolerance used for balls and polytopes given in floating point.
inline constexpr double kWindowTolerance = 1e-12;

inline Membership contains(const Window& w, const InternalPoint& u) {
  if (static_cast<int>(dimension(u)) != w.dim()) throw std::invalid_argument("contains: dimension mismatch");
  return std::visit([&](const auto& win) -> Membership {
    using W = std::decay_t<decltype(win)>;
    if constexpr (std::is_same_v<W, EmptyWindow>) return Membership::outside;
    else if constexpr (std::is_same_v<W, IntervalWindow>) {
      if (const auto* e = std::get_if<ExactVector>(&u)) return detail::classify_interval(win, (*e)[0]);
      return detail::classify_interval(win, GoldenRational(rational_from_double(to_real(u)[0])));
    } else if constexpr (std::is_same_v<W, BoxWindow>) {
      ExactVector e;
      if (const auto* ev = std::get_if<ExactVector>(&u)) e = *ev;
      else for (double x : to_real(u)) e.emplace_back(rational_from_double(x));
      Membership worst = Membership::inside;
      for (std::size_t i = 0; i < e.size(); ++i) {
        const Membership m = detail::classify_interval(win.sides[i], e[i]);
        if (m == Membership::outside) return m;
        if (m == Membership::boundary) worst = m;
      }
      return worst;
    } else if constexpr (std::is_same_v<W, BallWindow>) {
      const RealVector x = to_real(u);
      const double r = std::sqrt(dist2(x, win.center));
      return detail::classify_tolerance(r - win.radius, kWindowTolerance * std::max(1.0, win.radius));
    } else if constexpr (std::is_same_v<W, ConvexPolytope>) {
      return detail::classify_tolerance(win.signed_excess(to_real(u)), win.tolerance());
    } else {
      int depth = PAdicApprox::kDefaultDepth;
      if (const auto* pv = std::get_if<PAdicVector>(&u); pv && !pv->coords.empty()) depth = pv->coords[0].depth();
      const auto x = detail::as_padic(u, win.p, depth);
      bool undecided = false;
      for (const auto& c : win.cosets) {
        const int k = std::min(c.k, depth);
        const BigInt mod = pow_big(BigInt(win.p), static_cast<unsigned>(k));
        bool match = true;
        for (std::size_t i = 0; i < x.size() && match; ++i) match = mod_floor(x[i].residue() - c.rep[i], mod) == 0;
        if (!match) continue;
        if (c.k <= depth) return Membership::inside;
        undecided = true;  // agrees with a coset deeper than the known digits
      }
      if (win.limit) {
        bool agrees = true;
        for (std::size_t i = 0; i < x.size() && agrees; ++i) {
          const int k = std::min(depth, win.limit->coords[i].depth());
          agrees = x[i].congruent(win.limit->coords[i], k);
        }
        if (agrees) return Membership::boundary;
      }
      return undecided ? Membership::boundary : Membership::outside;
    }
  }, w.variant());
}

// ---------------------------------------------------------------------------
// volume and Fourier transform

/// Exact Haar measure of a canonical coset union: the sum of p^{-mk}.
inline Rational haar_volume_exact(const CosetUnionWindow& w) {
  Rational v = 0;
  for (const auto& c : w.cosets)
    v += Rational(BigInt(1), pow_big(BigInt(w.p), static_cast<unsigned>(w.m * c.k)));
  return v;
}

inline double haar_volume(const Window& w) {
  return std::visit([](const auto& win) -> double {
    using W = std::decay_t<decltype(win)>;
    if constexpr (std::is_same_v<W, EmptyWindow>) return 0.0;
    else if constexpr (std::is_same_v<W, IntervalWindow>) return (win.hi - win.lo).to_double();
    else if constexpr (std::is_same_v<W, BoxWindow>) {
      double v = 1;
      for (const auto& s : win.sides) v *= (s.hi - s.lo).to_double();
      return v;
    } else if constexpr (std::is_same_v<W, BallWindow>) {
      const double n = static_cast<double>(win.center.size());
      return std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2 + 1) * std::pow(win.radius, n);
    } else if constexpr (std::is_same_v<W, ConvexPolytope>) return win.volume();
    else return to_double(haar_volume_exact(win));
  }, w.variant());
}

namespace detail {

/// Integral over [lo, hi] of exp(-2 pi i s u).
inline Complex interval_ft(double lo, double hi, double s) {
  const double len = hi - lo, mid = (lo + hi) / 2;
  const double x = std::numbers::pi * s * len;
  const double sinc = std::fabs(x) < 1e-8 ? 1 - x * x / 6 : std::sin(x) / x;
  return len * sinc * std::polar(1.0, -2 * std::numbers::pi * s * mid);
}

inline Rational frac(const Rational& q) { return q - Rational(floor_rational(q)); }

}  // namespace detail

/// chi^(xi) = integral over W of exp(-2 pi i xi . u) d mu(u). For Z_p^m the
/// character is exp(-2 pi i {xi . u}) with {.} the fractional part.
inline Complex indicator_ft(const Window& w, const DualPoint& xi) {
  return std::visit([&](const auto& win) -> Complex {
    using W = std::decay_t<decltype(win)>;
    if constexpr (std::is_same_v<W, EmptyWindow>) return 0.0;
    else if constexpr (std::is_same_v<W, CosetUnionWindow>) {
      const auto* q = std::get_if<std::vector<Rational>>(&xi);
      if (!q || static_cast<int>(q->size()) != win.m) throw std::invalid_argument("indicator_ft: need a rational dual point of dimension m");
      Complex total = 0;
      for (const auto& c : win.cosets) {
        const BigInt pk = pow_big(BigInt(win.p), static_cast<unsigned>(c.k));
        bool kills = true;
        Rational phase = 0;
        for (std::size_t i = 0; i < q->size(); ++i) {
          if (!is_integer((*q)[i] * Rational(pk))) kills = false;
          phase += (*q)[i] * Rational(c.rep[i]);
        }
        if (!kills) continue;
        const double measure = to_double(Rational(BigInt(1), pow_big(pk, static_cast<unsigned>(win.m))));
        total += measure * std::polar(1.0, -2 * std::numbers::pi * to_double(detail::frac(phase)));
      }
      return total;
    } else {
      const auto* r = std::get_if<RealVector>(&xi);
      if (!r || static_cast<int>(r->size()) != w.dim()) throw std::invalid_argument("indicator_ft: need a real dual point of the window's dimension");
      if constexpr (std::is_same_v<W, IntervalWindow>) return detail::interval_ft(win.lo.to_double(), win.hi.to_double(), (*r)[0]);
      else if constexpr (std::is_same_v<W, BoxWindow>) {
        Complex t = 1;
        for (std::size_t i = 0; i < win.sides.size(); ++i) t *= detail::interval_ft(win.sides[i].lo.to_double(), win.sides[i].hi.to_double(), (*r)[i]);
        return t;
      } else if constexpr (std::is_same_v<W, BallWindow>) {
        const double s = std::sqrt(norm2(*r));
        double dot = 0;
        for (std::size_t i = 0; i < r->size(); ++i) dot += (*r)[i] * win.center[i];
        const Complex phase = std::polar(1.0, -2 * std::numbers::pi * dot);
        if (s * win.radius < 1e-12) return haar_volume(w) * phase;
        const double nu = static_cast<double>(r->size()) / 2;
        return std::pow(win.radius / s, nu) * std::cyl_bessel_j(nu, 2 * std::numbers::pi * win.radius * s) * phase;
      } else return win.fourier(*r);
    }
  }, w.variant());
}

/// Upper bound on |chi^(xi)| / vol(W) valid for |xi| >= 1 / width (convex windows).
inline double indicator_ft_decay_bound(const Window& w, double xi_norm) {
  const double width = w.min_width();
  if (!(width > 0) || xi_norm <= 0) return 1.0;
  return std::min(1.0, static_cast<double>(w.dim()) / (std::numbers::pi * xi_norm * width));
}

// ---------------------------------------------------------------------------
// lattice points over a window

/// Visits every lattice coordinate vector whose physical image has norm <= R
/// (up to a tiny slack; callers filter exactly) and whose internal image lies in
/// the ball (centre, radius). For p-adic internal spaces the internal ball is ignored.
inline void enumerate_cylinder(const CutProjectScheme& s, double R, const RealVector& centre, double radius,
                               const std::function<void(const IntVec&)>& visit, const EnumerationOptions& opt = {}) {
  const Matrix<double>& p = s.physical_matrix();
  const std::size_t n = static_cast<std::size_t>(s.rank);
  Matrix<double> g = p.transpose() * p;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) /= R * R;
  RealVector x0(n, 0.0);
  double bound = 1.0;
  if (!s.internal.is_padic() && s.internal.dim > 0) {
    const Matrix<double>& q = s.internal_matrix();
    Matrix<double> gi = q.transpose() * q;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) += gi(i, j) / (radius * radius);
    // centre of the ellipsoid: G x0 = Q^T c / r^2
    RealVector rhs(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < q.rows(); ++i) rhs[j] += q(i, j) * centre[i] / (radius * radius);
    x0 = inverse(g) * rhs;
    double c2 = 0, x0gx0 = 0;
    for (double c : centre) c2 += c * c;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) x0gx0 += x0[i] * g(i, j) * x0[j];
    bound = 2.0 - c2 / (radius * radius) + x0gx0;
  }
  const double r2 = R * R * (1 + 1e-9);
  const double rad2 = radius * radius * (1 + 1e-9) + 1e-18;
  enumerate_ellipsoid(g, x0, bound, [&](const IntVec& z) {
    if (norm2(s.physical(z)) > r2) return;
    if (!s.internal.is_padic() && s.internal.dim > 0 && dist2(s.internal_real(z), centre) > rad2) return;
    visit(z);
  }, opt);
}

/// Exact test of |phys(z)| <= R when the physical side is exact and R is rational.
inline bool physical_within(const CutProjectScheme& s, const IntVec& z, double R) {
  const double n2 = norm2(s.physical(z));
  const double r2 = R * R;
  if (std::fabs(n2 - r2) > 1e-9 * std::max(1.0, r2) || !s.has_exact_physical()) return n2 <= r2;
  const ExactVector x = s.physical_exact(z);
  GoldenRational sq;
  for (const auto& v : x) sq += v * v;
  const Rational rr = rational_from_double(R);
  return sq <= GoldenRational(rr * rr);
}

// ---------------------------------------------------------------------------
// genericity and W_Q

struct GenericityReport {
  double search_radius = 0;
  bool is_generic_up_to = true;
  std::vector<LatticePoint> witnesses;  // lattice points whose star lies on the boundary
};

inline GenericityReport genericity_report(const Window& w, const CutProjectScheme& s, double R) {
  GenericityReport rep;
  rep.search_radius = R;
  if (w.is_empty()) return rep;
  if (w.is_padic()) {
    enumerate_cylinder(s, R, {}, 0.0, [&](const IntVec& z) {
      if (physical_within(s, z, R) && contains(w, s.star(z)) == Membership::boundary) rep.witnesses.push_back({z});
    });
  } else {
    const auto [c, r] = w.bounding_ball();
    enumerate_cylinder(s, R, c, r * (1 + 1e-9) + 1e-12, [&](const IntVec& z) {
      if (physical_within(s, z, R) && contains(w, s.star(z)) == Membership::boundary) rep.witnesses.push_back({z});
    });
  }
  std::sort(rep.witnesses.begin(), rep.witnesses.end());
  rep.is_generic_up_to = rep.witnesses.empty();
  return rep;
}

/// W_Q = {u : Q* W + u in W} for an interval and a scalar contraction q*.
/// Returns the empty window when W_Q has empty interior (incompatible Q).
inline Window window_Q(const Window& w, const GoldenRational& qstar) {
  const auto* iv = std::get_if<IntervalWindow>(&w.variant());
  if (!iv) throw unsupported_error("window_Q: scalar contraction needs an interval window");
  if (!(abs(qstar) < GoldenRational(1))) throw std::invalid_argument("window_Q: Q* must be contractive");
  const GoldenRational x = qstar * iv->lo, y = qstar * iv->hi;
  const GoldenRational lo = iv->lo - std::min(x, y), hi = iv->hi - std::max(x, y);
  if (!(lo < hi)) return Window::empty(1);
  return Window::interval(lo, hi);
}

/// Ball windows with Q* a similarity (Q*^T Q* = s^2 I, s < 1).
inline Window window_Q(const Window& w, const Matrix<double>& qstar) {
  const auto* b = std::get_if<BallWindow>(&w.variant());
  if (!b) throw unsupported_error("window_Q: matrix contraction is supported for ball windows only");
  const std::size_t n = b->center.size();
  if (qstar.rows() != n || qstar.cols() != n) throw std::invalid_argument("window_Q: Q* has the wrong shape");
  const Matrix<double> qtq = qstar.transpose() * qstar;
  const double s2 = qtq(0, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (std::fabs(qtq(i, j) - (i == j ? s2 : 0.0)) > 1e-12 * std::max(1.0, s2))
        throw unsupported_error("window_Q: Q* is not a similarity");
  const double s = std::sqrt(s2);
  if (!(s < 1)) throw std::invalid_argument("window_Q: Q* must be contractive");
  const RealVector qc = qstar * b->center;
  RealVector c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = b->center[i] - qc[i];
  const double r = b->radius * (1 - s);
  if (!(r > 0)) return Window::empty(static_cast<int>(n));
  return Window::ball(c, r);
}

/// Translate of a window by an internal vector: W + t.
inline Window translate(const Window& w, const ExactVector& t) {
  return std::visit([&](const auto& win) -> Window {
    using W = std::decay_t<decltype(win)>;
    if constexpr (std::is_same_v<W, EmptyWindow>) return w;
    else if constexpr (std::is_same_v<W, IntervalWindow>) return Window::interval(win.lo + t[0], win.hi + t[0]);
    else if constexpr (std::is_same_v<W, BoxWindow>) {
      auto sides = win.sides;
      for (std::size_t i = 0; i < sides.size(); ++i) {
        sides[i].lo += t[i];
        sides[i].hi += t[i];
      }
      return Window::box(sides);
    } else if constexpr (std::is_same_v<W, BallWindow>) {
      RealVector c = win.center;
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += t[i].to_double();
      return Window::ball(c, win.radius);
    } else if constexpr (std::is_same_v<W, ConvexPolytope>) {
      auto vs = win.vertices();
      for (auto& v : vs)
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += t[i].to_double();
      return Window::polytope(vs);
    } else {
      auto cosets = win.cosets;
      for (auto& c : cosets)
        for (std::size_t i = 0; i < c.rep.size(); ++i) {
          if (t[i].b() != 0 || !is_integer(t[i].a())) throw std::invalid_argument("translate: p-adic shift must be integral");
          c.rep[i] += numerator(t[i].a());
        }
      std::optional<PAdicVector> lim;
      if (win.limit) {
        lim = *win.limit;
        for (std::size_t i = 0; i < lim->coords.size(); ++i)
          lim->coords[i] = lim->coords[i] + PAdicApprox::from_integer(numerator(t[i].a()), win.p, lim->coords[i].depth());
      }
      return Window::coset_union(win.p, win.m, cosets, lim);
    }
  }, w.variant());
}

}  // namespace aperiodica
