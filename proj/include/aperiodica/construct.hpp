#pragma once

// Finite samples of model sets and their variants: translated windows,
// visible points, deformations, weights and Bernoulli thinning.

#include "aperiodica/numeric/parallel.hpp"
#include "aperiodica/numeric/random.hpp"
#include "aperiodica/window.hpp"

#include <functional>
#include <memory>
#include <numeric>

namespace aperiodica {

struct ModelPoint {
  IntVec coords;
  RealVector phys;
  InternalPoint internal;
  bool boundary = false;
};

struct Region {
  enum class Kind { ball, box } kind = Kind::ball;
  double radius = 0;
  RealVector lo, hi;  // box: lo <= x < hi

  static Region ball(double r) { return {Kind::ball, r, {}, {}}; }
  static Region box(RealVector lo, RealVector hi) { return {Kind::box, 0, std::move(lo), std::move(hi)}; }

  /// Lebesgue volume of the region in R^d.
  double volume(std::size_t d) const {
    if (kind == Kind::box) {
      double v = 1;
      for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
      return v;
    }
    const double n = static_cast<double>(d);
    return std::pow(std::numbers::pi, n / 2) / std::tgamma(n / 2 + 1) * std::pow(radius, n);
  }

  std::string describe() const {
    std::ostringstream os;
    if (kind == Kind::ball) os << "ball(R=" << radius << ")";
    else {
      os << "box(";
      for (std::size_t i = 0; i < lo.size(); ++i) os << (i ? " x " : "") << "[" << lo[i] << "," << hi[i] << ")";
      os << ")";
    }
    return os.str();
  }
};

struct PointSet {
  std::shared_ptr<const CutProjectScheme> scheme;
  std::vector<ModelPoint> points;
  Region region;
  std::optional<Window> window;
  std::optional<std::vector<Complex>> weights;
  bool physical_is_lattice = true;  // false after a deformation

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  std::size_t dim() const { return scheme ? static_cast<std::size_t>(scheme->d) : (points.empty() ? 0 : points[0].phys.size()); }

  std::vector<RealVector> physical() const {
    std::vector<RealVector> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.phys);
    return out;
  }

  std::size_t boundary_count() const {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const ModelPoint& p) { return p.boundary; }));
  }

  double density() const { return static_cast<double>(points.size()) / region.volume(dim()); }

  Complex weight(std::size_t i) const { return weights ? (*weights)[i] : Complex(1.0); }
};

namespace detail {

inline void check_window_fits(const CutProjectScheme& s, const Window& w) {
  if (w.is_empty()) return;
  if (w.is_padic() != s.internal.is_padic()) throw std::invalid_argument("window kind does not match the scheme's internal space");
  if (w.dim() != s.internal.dim) throw std::invalid_argument("window dimension " + std::to_string(w.dim()) + " does not match internal dimension " + std::to_string(s.internal.dim));
  if (const auto* cu = std::get_if<CosetUnionWindow>(&w.variant()); cu && cu->p != s.internal.p)
    throw std::invalid_argument("window prime does not match the scheme");
}

inline ExactVector exact_shift(const InternalPoint& v) {
  if (const auto* e = std::get_if<ExactVector>(&v)) return *e;
  if (const auto* p = std::get_if<PAdicVector>(&v)) {
    ExactVector out;
    for (const auto& c : p->coords) out.emplace_back(Rational(c.residue()));
    return out;
  }
  ExactVector out;
  for (double x : std::get<RealVector>(v)) out.emplace_back(rational_from_double(x));
  return out;
}

inline ExactVector negate(ExactVector v) {
  for (auto& x : v) x = -x;
  return v;
}

inline void sort_points(std::vector<ModelPoint>& pts) {
  std::sort(pts.begin(), pts.end(), [](const ModelPoint& a, const ModelPoint& b) { return a.coords < b.coords; });
}

/// Lattice points x with |shift + phys(x)| <= R and star(x) in W (or on its boundary).
inline std::vector<ModelPoint> collect(const CutProjectScheme& s, const Window& w, double R, const RealVector& shift) {
  if (w.is_empty()) return {};
  const double reach = R + std::sqrt(norm2(shift));
  std::vector<IntVec> cand;
  if (w.is_padic()) {
    enumerate_cylinder(s, reach, {}, 0.0, [&](const IntVec& z) { cand.push_back(z); });
  } else {
    const auto [c, r] = w.bounding_ball();
    enumerate_cylinder(s, reach, c, r * (1 + 1e-9) + 1e-12, [&](const IntVec& z) { cand.push_back(z); });
  }
  std::vector<std::optional<ModelPoint>> slot(cand.size());
  const bool unshifted = norm2(shift) == 0;
  parallel_for(cand.size(), [&](std::size_t i) {
    const IntVec& z = cand[i];
    RealVector x = s.physical(z);
    if (unshifted) {
      if (!physical_within(s, z, R)) return;
    } else {
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += shift[j];
      if (norm2(x) > R * R * (1 + 1e-12)) return;
    }
    InternalPoint u = s.star(z);
    const Membership m = contains(w, u);
    if (m == Membership::outside) return;
    slot[i] = ModelPoint{z, std::move(x), std::move(u), m == Membership::boundary};
  });
  std::vector<ModelPoint> out;
  for (auto& p : slot)
    if (p) out.push_back(std::move(*p));
  sort_points(out);
  return out;
}

}  // namespace detail

/// Lambda_R = {x in L : |x| <= R, x* in W}. Points with x* on the boundary are kept and flagged.
inline PointSet enumerate_model_set(std::shared_ptr<const CutProjectScheme> s, const Window& w, double R) {
  if (!(R >= 0)) throw std::invalid_argument("enumerate_model_set: negative radius");
  detail::check_window_fits(*s, w);
  PointSet ps{s, detail::collect(*s, w, R, RealVector(static_cast<std::size_t>(s->d), 0.0)), Region::ball(R), w, std::nullopt};
  return ps;
}

inline PointSet enumerate_model_set(const CutProjectScheme& s, const Window& w, double R) {
  return enumerate_model_set(std::make_shared<const CutProjectScheme>(s), w, R);
}

/// Lambda(W, u, v) = u + {x in L : x* in -v + W}, restricted to |u + x| <= R.
/// Stored lattice coordinates and internal points refer to x.
inline PointSet translated_model_set(std::shared_ptr<const CutProjectScheme> s, const Window& w, const RealVector& u, const InternalPoint& v, double R) {
  detail::check_window_fits(*s, w);
  if (static_cast<int>(u.size()) != s->d) throw std::invalid_argument("translated_model_set: physical shift has wrong dimension");
  if (!w.is_empty() && static_cast<int>(dimension(v)) != w.dim()) throw std::invalid_argument("translated_model_set: internal shift has wrong dimension");
  const Window shifted = w.is_empty() ? w : translate(w, detail::negate(detail::exact_shift(v)));
  PointSet ps{s, detail::collect(*s, shifted, R, u), Region::ball(R), shifted, std::nullopt};
  return ps;
}

inline PointSet translated_model_set(const CutProjectScheme& s, const Window& w, const RealVector& u, const InternalPoint& v, double R) {
  return translated_model_set(std::make_shared<const CutProjectScheme>(s), w, u, v, R);
}

// ---------------------------------------------------------------------------

struct DensityCoverage {
  bool covered = false;
  double radius = 0;        // smallest tested R at which every mesh cell was hit
  std::size_t cells = 0;    // cells whose centre lies in W
  std::size_t missed = 0;   // at the largest R tried, if never covered
};

/// Doubles R from r0 until the internal images hit every cell (with centre in W)
/// of a mesh with `per_axis` cells along each side of W's bounding box.
inline DensityCoverage density_check(const CutProjectScheme& s, const Window& w, int per_axis = 20, double r0 = 4, double r_max = 4096) {
  if (s.internal.is_padic() || w.is_padic()) throw unsupported_error("density_check: Euclidean internal spaces only");
  detail::check_window_fits(s, w);
  const auto [c, r] = w.bounding_ball();
  const std::size_t n = c.size();
  RealVector lo(n), step(n);
  for (std::size_t i = 0; i < n; ++i) {
    lo[i] = c[i] - r;
    step[i] = 2 * r / per_axis;
  }
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_axis);
  std::vector<char> relevant(total, 0);
  std::size_t wanted = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    RealVector centre(n);
    std::size_t rest = idx;
    for (std::size_t i = 0; i < n; ++i) {
      centre[i] = lo[i] + (static_cast<double>(rest % per_axis) + 0.5) * step[i];
      rest /= per_axis;
    }
    if (contains(w, centre) == Membership::inside) {
      relevant[idx] = 1;
      ++wanted;
    }
  }
  DensityCoverage out;
  out.cells = wanted;
  for (double R = r0; R <= r_max; R *= 2) {
    std::vector<char> hit(total, 0);
    std::size_t got = 0;
    enumerate_cylinder(s, R, c, r, [&](const IntVec& z) {
      const RealVector u = s.internal_real(z);
      std::size_t idx = 0, mul = 1;
      for (std::size_t i = 0; i < n; ++i) {
        const long k = static_cast<long>(std::floor((u[i] - lo[i]) / step[i]));
        if (k < 0 || k >= per_axis) return;
        idx += static_cast<std::size_t>(k) * mul;
        mul *= static_cast<std::size_t>(per_axis);
      }
      if (relevant[idx] && !hit[idx]) {
        hit[idx] = 1;
        ++got;
      }
    });
    out.radius = R;
    out.missed = wanted - got;
    if (got == wanted) {
      out.covered = true;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Z^d as a scheme with trivial internal space.
inline CutProjectScheme make_integer_scheme(int d) {
  auto s = make_custom_scheme(d, InternalSpace::euclidean(0), Matrix<GoldenRational>::identity(static_cast<std::size_t>(d)),
                              Matrix<GoldenRational>(0, static_cast<std::size_t>(d)));
  s.name = "Z" + std::to_string(d);
  return s;
}

/// Visible points of Z^d: 0 < |x| <= R with gcd of the coordinates equal to 1.
inline PointSet visible_points(int d, double R) {
  if (d < 2) throw std::invalid_argument("visible_points: dimension must be at least 2");
  if (!(R >= 0)) throw std::invalid_argument("visible_points: negative radius");
  auto s = std::make_shared<const CutProjectScheme>(make_integer_scheme(d));
  const long long b = static_cast<long long>(std::floor(R));
  const long long r2 = static_cast<long long>(std::floor(R * R + 1e-9));
  const std::size_t side = static_cast<std::size_t>(2 * b + 1);
  std::vector<std::vector<ModelPoint>> per_slab(side);
  parallel_for(side, [&](std::size_t slab) {
    IntVec x(static_cast<std::size_t>(d), -b);
    x[0] = static_cast<long long>(slab) - b;
    while (true) {
      long long n2 = 0, g = 0;
      for (long long v : x) {
        n2 += v * v;
        g = std::gcd(g, v);
      }
      if (n2 <= r2 && g == 1) {
        RealVector phys(x.begin(), x.end());
        per_slab[slab].push_back({x, std::move(phys), ExactVector{}, false});
      }
      std::size_t i = 1;
      while (i < x.size() && ++x[i] > b) x[i++] = -b;
      if (i == x.size()) break;
    }
  }, 1);
  PointSet ps{s, {}, Region::ball(R), std::nullopt, std::nullopt};
  for (auto& v : per_slab)
    for (auto& p : v) ps.points.push_back(std::move(p));
  return ps;
}

// ---------------------------------------------------------------------------

inline double min_physical_gap(const std::vector<RealVector>& pts) {
  if (pts.size() < 2) return std::numeric_limits<double>::infinity();
  const std::size_t d = pts[0].size();
  RealVector lo(d, std::numeric_limits<double>::infinity()), hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& p : pts)
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  double vol = 1;
  for (std::size_t i = 0; i < d; ++i) vol *= std::max(hi[i] - lo[i], 1e-9);
  const double cell = std::pow(vol / static_cast<double>(pts.size()), 1.0 / static_cast<double>(d));
  SpatialGrid grid(pts, std::max(cell, 1e-9));
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) best = std::min(best, grid.nearest_distance(pts[i], std::numeric_limits<double>::infinity(), i));
  return best;
}

/// Lambda_f = {x + g(x*)}. The displacement must stay below half the minimal gap.
inline PointSet deform_set(const PointSet& ps, const std::function<RealVector(const InternalPoint&)>& g) {
  PointSet out = ps;
  out.physical_is_lattice = false;
  const double gap = min_physical_gap(ps.physical());
  double largest = 0;
  for (auto& p : out.points) {
    const RealVector f = g(p.internal);
    if (f.size() != p.phys.size()) throw std::invalid_argument("deform_set: displacement has wrong dimension");
    largest = std::max(largest, std::sqrt(norm2(f)));
    for (std::size_t i = 0; i < f.size(); ++i) p.phys[i] += f[i];
  }
  if (std::isfinite(gap) && largest > gap / 2) throw std::invalid_argument("deform_set: displacement exceeds half the minimal gap");
  const auto moved = out.physical();
  if (min_physical_gap(moved) < 1e-9) throw std::runtime_error("deform_set: two deformed points collide");
  return out;
}

/// Keeps each point independently with probability p. The coin of a point
/// depends only on (seed, lattice coordinates).
inline PointSet occupy_stochastic(const PointSet& ps, double p, std::uint64_t seed) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("occupy_stochastic: p must lie in [0, 1]");
  PointSet out = ps;
  out.points.clear();
  std::vector<Complex> w;
  for (std::size_t i = 0; i < ps.points.size(); ++i) {
    auto rng = SplitMix64::stream(seed, ps.points[i].coords);
    if (rng.uniform() < p) {
      out.points.push_back(ps.points[i]);
      if (ps.weights) w.push_back((*ps.weights)[i]);
    }
  }
  if (ps.weights) out.weights = std::move(w);
  return out;
}

/// Weights omega(x) = g(x*).
inline PointSet weight_comb(const PointSet& ps, const std::function<Complex(const InternalPoint&)>& g) {
  PointSet out = ps;
  std::vector<Complex> w(ps.points.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = g(ps.points[i].internal);
  out.weights = std::move(w);
  return out;
}

}  // namespace aperiodica
