#pragma once

// Diagnostics on finite samples: Delone radii, the Meyer gap of Lambda - Lambda,
// patch census and repetitivity, Weyl equidistribution, self-similarities with
// their invariant density, the patch metric and the torus beta-map.

#include "aperiodica/construct.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <map>
#include <set>
#include <unordered_set>

namespace aperiodica {

// ---------------------------------------------------------------------------
// Delone radii and holes

struct DeloneRadii {
  double r_pack = 0;
  double r_cover = 0;
  std::size_t mesh_points = 0;
};

namespace detail {

/// Calls fn(x) for mesh points x = step * integer vector with the region shrunk by `collar`.
inline void for_each_mesh_point(const Region& region, std::size_t d, double step, double collar, const std::function<void(const RealVector&)>& fn) {
  RealVector lo(d), hi(d);
  if (region.kind == Region::Kind::ball) {
    const double r = region.radius - collar;
    if (r < 0) return;
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = -r;
      hi[i] = r;
    }
  } else {
    for (std::size_t i = 0; i < d; ++i) {
      lo[i] = region.lo[i] + collar;
      hi[i] = region.hi[i] - collar;
      if (hi[i] < lo[i]) return;
    }
  }
  std::vector<long long> a(d), b(d), k(d);
  for (std::size_t i = 0; i < d; ++i) {
    a[i] = static_cast<long long>(std::ceil(lo[i] / step - 1e-9));
    b[i] = static_cast<long long>(std::floor(hi[i] / step + 1e-9));
    if (b[i] < a[i]) return;
    k[i] = a[i];
  }
  const double r2 = region.kind == Region::Kind::ball ? std::pow(region.radius - collar, 2) * (1 + 1e-12) : 0;
  RealVector x(d);
  while (true) {
    for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(k[i]) * step;
    if (region.kind == Region::Kind::box || norm2(x) <= r2) fn(x);
    std::size_t i = 0;
    while (i < d && ++k[i] > b[i]) {
      k[i] = a[i];
      ++i;
    }
    if (i == d) break;
  }
}

inline double typical_spacing(const PointSet& ps) {
  return std::pow(ps.region.volume(ps.dim()) / std::max<std::size_t>(ps.size(), 1), 1.0 / static_cast<double>(ps.dim()));
}

}  // namespace detail

namespace detail {

/// Compass search for a local maximum of f, starting at x with the given step.
/// Axis and diagonal directions, so ridges along either are followed.
inline RealVector climb(RealVector x, const std::function<double(const RealVector&)>& f, double step, double until = 1e-13) {
  const std::size_t d = x.size();
  std::vector<RealVector> dirs;
  for (std::size_t i = 0; i < d; ++i)
    for (double s : {1.0, -1.0}) {
      RealVector e(d, 0.0);
      e[i] = s;
      dirs.push_back(e);
      for (std::size_t j = i + 1; j < d; ++j)
        for (double t : {1.0, -1.0}) {
          RealVector g(d, 0.0);
          g[i] = s * std::sqrt(0.5);
          g[j] = t * std::sqrt(0.5);
          dirs.push_back(g);
        }
    }
  double fx = f(x);
  RealVector y(d);
  while (step > until) {
    bool moved = false;
    for (const auto& e : dirs) {
      for (std::size_t i = 0; i < d; ++i) y[i] = x[i] + step * e[i];
      const double fy = f(y);
      if (fy > fx) {
        x = y;
        fx = fy;
        moved = true;
        break;
      }
    }
    if (!moved) step /= 2;
  }
  return x;
}

inline double distance_to_edge(const Region& region, const RealVector& x) {
  if (region.kind == Region::Kind::ball) return region.radius - std::sqrt(norm2(x));
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::min({m, x[i] - region.lo[i], region.hi[i] - x[i]});
  return m;
}

/// Mesh maxima of the nearest-point distance, refined by local search from
/// every mesh point within `slack` of the best one.
inline std::pair<double, RealVector> farthest_point(const Region& region, std::size_t d, double step, double collar,
                                                    const std::function<double(const RealVector&)>& objective, std::size_t* mesh_count) {
  std::vector<RealVector> mesh;
  for_each_mesh_point(region, d, step, collar, [&](const RealVector& x) { mesh.push_back(x); });
  if (mesh.empty()) throw std::invalid_argument("region too small for the collar");
  if (mesh_count) *mesh_count = mesh.size();
  std::vector<double> val(mesh.size());
  parallel_for(mesh.size(), [&](std::size_t i) { val[i] = objective(mesh[i]); }, 1024);
  const double best = *std::max_element(val.begin(), val.end());
  const double slack = step * std::sqrt(static_cast<double>(d));
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < mesh.size(); ++i)
    if (val[i] >= best - slack) cand.push_back(i);
  // refine only the most promising few; the mesh already bounds the error by slack
  const std::size_t keep = std::min<std::size_t>(cand.size(), 256);
  std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(keep), cand.end(), [&](std::size_t i, std::size_t j) { return val[i] > val[j]; });
  cand.resize(keep);
  std::vector<std::pair<double, RealVector>> local(cand.size());
  parallel_for(cand.size(), [&](std::size_t c) {
    const RealVector x = climb(mesh[cand[c]], objective, step / 2);
    local[c] = {objective(x), x};
  }, 1);
  std::pair<double, RealVector> out{best, mesh[static_cast<std::size_t>(std::max_element(val.begin(), val.end()) - val.begin())]};
  for (auto& l : local)
    if (l.first > out.first) out = std::move(l);
  return out;
}

}  // namespace detail

/// Largest distance to the nearest sample point over the region shrunk by
/// `collar`: a mesh of spacing `step`, then local refinement.
inline double covering_radius(const std::vector<RealVector>& pts, const Region& region, double step, double collar, std::size_t* mesh_count = nullptr) {
  if (pts.empty()) throw std::invalid_argument("covering_radius: empty point set");
  const std::size_t d = pts[0].size();
  SpatialGrid grid(pts, std::max(step, 1e-6) * 4);
  auto shrunk = [&](const RealVector& x) { return detail::distance_to_edge(region, x) >= collar - 1e-12; };
  auto f = [&](const RealVector& x) { return shrunk(x) ? grid.nearest_distance(x, std::numeric_limits<double>::infinity()) : -1.0; };
  try {
    return detail::farthest_point(region, d, step, collar, f, mesh_count).first;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("covering_radius: region too small for the collar");
  }
}

inline DeloneRadii delone_radii(const PointSet& ps, double step = 0) {
  if (ps.size() < 2) throw std::invalid_argument("delone_radii: need at least two points");
  DeloneRadii out;
  const auto pts = ps.physical();
  out.r_pack = min_physical_gap(pts) / 2;
  const double spacing = detail::typical_spacing(ps);
  if (step <= 0) step = spacing / (ps.dim() == 1 ? 50.0 : 10.0);
  // shrink by the coverage estimate itself, starting from twice the spacing
  double collar = 2 * spacing;
  for (int it = 0; it < 3; ++it) {
    out.r_cover = covering_radius(pts, ps.region, step, collar, &out.mesh_points);
    if (out.r_cover <= collar) break;
    collar = out.r_cover * 1.01;
  }
  return out;
}

struct EmptyBallReport {
  bool found = false;  // some ball of radius r inside the region holds no sample point
  RealVector center;   // centre of the largest empty ball inside the region
  double largest = 0;  // its radius
  std::size_t scanned = 0;
};

/// Largest empty ball contained in the sampled region: maximizes
/// min(distance to nearest point, distance to the region's edge).
inline EmptyBallReport find_empty_ball(const PointSet& ps, double r, double step = 0.25) {
  if (ps.empty()) throw std::invalid_argument("find_empty_ball: empty point set");
  const auto pts = ps.physical();
  SpatialGrid grid(pts, std::max(1.0, 2 * r));
  auto f = [&](const RealVector& x) {
    const double edge = detail::distance_to_edge(ps.region, x);
    return std::min(edge, grid.nearest_distance(x, std::max(edge, 0.0) + 1e-9));
  };
  EmptyBallReport out;
  auto [best, x] = detail::farthest_point(ps.region, ps.dim(), step, 0.0, f, &out.scanned);
  out.largest = best;
  out.center = std::move(x);
  out.found = out.largest > r;
  return out;
}

// ---------------------------------------------------------------------------
// Meyer property

struct MeyerReport {
  double min_gap = 0;
  std::optional<GoldenRational> exact_gap;  // when the sample is exact and one-dimensional
  std::size_t differences = 0;              // distinct elements of Lambda - Lambda
};

/// Minimal distance between distinct elements of Lambda_R - Lambda_R.
inline MeyerReport meyer_check(const PointSet& ps) {
  MeyerReport out;
  if (ps.size() < 2) throw std::invalid_argument("meyer_check: need at least two points");
  const bool exact = ps.scheme && ps.physical_is_lattice && ps.scheme->has_exact_physical();
  if (exact) {
    std::set<IntVec> diffs;
    for (const auto& a : ps.points)
      for (const auto& b : ps.points) diffs.insert(a.coords - b.coords);
    out.differences = diffs.size();
    if (ps.dim() == 1) {
      std::vector<std::pair<double, const IntVec*>> v;
      for (const auto& z : diffs) v.emplace_back(ps.scheme->physical(z)[0], &z);
      std::sort(v.begin(), v.end());
      // close candidates by float, then decided exactly
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < v.size(); ++i) best = std::min(best, v[i].first - v[i - 1].first);
      std::optional<GoldenRational> ex;
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i].first - v[i - 1].first > best * (1 + 1e-9) + 1e-12) continue;
        const GoldenRational g = abs(ps.scheme->physical_exact(*v[i].second)[0] - ps.scheme->physical_exact(*v[i - 1].second)[0]);
        if (g.sign() > 0 && (!ex || g < *ex)) ex = g;
      }
      out.exact_gap = ex;
      out.min_gap = ex ? ex->to_double() : best;
      return out;
    }
    std::vector<RealVector> pts;
    for (const auto& z : diffs) pts.push_back(ps.scheme->physical(z));
    out.min_gap = min_physical_gap(pts);
    return out;
  }
  // float samples: round differences to 1e-9 to identify coincidences
  std::set<std::vector<long long>> keys;
  std::vector<RealVector> pts;
  for (const auto& a : ps.points)
    for (const auto& b : ps.points) {
      RealVector d(a.phys.size());
      std::vector<long long> key(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = a.phys[i] - b.phys[i];
        key[i] = std::llround(d[i] * 1e9);
      }
      if (keys.insert(key).second) pts.push_back(d);
    }
  out.differences = pts.size();
  out.min_gap = min_physical_gap(pts);
  return out;
}

// ---------------------------------------------------------------------------
// patches

struct PatchClass {
  std::vector<IntVec> offsets;      // lattice coordinates relative to the anchor, sorted
  std::vector<RealVector> shape;    // the same offsets in physical space
  std::size_t count = 0;
  IntVec first_anchor;
};

struct PatchCensus {
  double radius = 0;
  std::size_t anchors = 0;
  std::vector<PatchClass> classes;  // most frequent first

  double frequency(std::size_t i) const { return anchors ? static_cast<double>(classes[i].count) / static_cast<double>(anchors) : 0.0; }
};

namespace detail {

/// Anchor points whose ball of radius r lies inside the sampled region.
inline bool interior_anchor(const Region& region, const RealVector& x, double r) {
  if (region.kind == Region::Kind::ball) return std::sqrt(norm2(x)) + r <= region.radius * (1 + 1e-12);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] - r < region.lo[i] || x[i] + r >= region.hi[i]) return false;
  return true;
}

inline std::vector<IntVec> float_key(const std::vector<RealVector>& offs) {
  std::vector<IntVec> key;
  for (const auto& o : offs) {
    IntVec k;
    for (double v : o) k.push_back(std::llround(v * 1e9));
    key.push_back(k);
  }
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace detail

/// Translation classes of the r-patches Lambda cap B_r(x), recentred at x, over
/// anchors x whose r-ball lies in the sampled region.
inline PatchCensus patch_census(const PointSet& ps, double r) {
  if (!(r > 0)) throw std::invalid_argument("patch_census: radius must be positive");
  PatchCensus out;
  out.radius = r;
  if (ps.empty()) return out;
  const auto pts = ps.physical();
  SpatialGrid grid(pts, std::max(r, 1e-6));
  const bool exact = ps.physical_is_lattice && !ps.points[0].coords.empty();
  std::map<std::vector<IntVec>, std::size_t> index;
  for (std::size_t a = 0; a < ps.size(); ++a) {
    const auto& x = ps.points[a];
    if (!detail::interior_anchor(ps.region, x.phys, r)) continue;
    ++out.anchors;
    std::vector<std::pair<IntVec, RealVector>> nb;
    grid.for_each_within(x.phys, r, [&](std::size_t j) {
      RealVector off(x.phys.size());
      for (std::size_t i = 0; i < off.size(); ++i) off[i] = pts[j][i] - x.phys[i];
      nb.emplace_back(exact ? ps.points[j].coords - x.coords : IntVec{}, off);
    });
    std::sort(nb.begin(), nb.end(), [](const auto& p, const auto& q) { return p.first != q.first ? p.first < q.first : p.second < q.second; });
    std::vector<IntVec> key;
    std::vector<RealVector> shape;
    for (auto& [c, o] : nb) {
      key.push_back(c);
      shape.push_back(o);
    }
    if (!exact) key = detail::float_key(shape);
    auto [it, fresh] = index.emplace(key, out.classes.size());
    if (fresh) out.classes.push_back({exact ? key : std::vector<IntVec>{}, shape, 0, x.coords});
    ++out.classes[it->second].count;
  }
  std::stable_sort(out.classes.begin(), out.classes.end(), [](const PatchClass& a, const PatchClass& b) { return a.count > b.count; });
  return out;
}

struct RepetitivityReport {
  double radius = 0;             // sample-based upper estimate
  std::size_t occurrences = 0;
  bool sample_based = true;
};

/// Smallest R such that every ball of radius R inside the sample contains a
/// translate of the patch: covering radius of its occurrences plus its extent.
inline RepetitivityReport repetitivity_radius(const PointSet& ps, const PatchClass& patch, double step = 0) {
  double extent = 0;
  for (const auto& o : patch.shape) extent = std::max(extent, std::sqrt(norm2(o)));
  const auto pts = ps.physical();
  SpatialGrid grid(pts, std::max(extent, 1.0));
  std::vector<RealVector> anchors;
  const auto key = detail::float_key(patch.shape);
  for (const auto& x : ps.points) {
    if (!detail::interior_anchor(ps.region, x.phys, extent)) continue;
    std::vector<RealVector> offs;
    grid.for_each_within(x.phys, extent * (1 + 1e-9) + 1e-12, [&](std::size_t j) {
      RealVector off(x.phys.size());
      for (std::size_t i = 0; i < off.size(); ++i) off[i] = pts[j][i] - x.phys[i];
      offs.push_back(off);
    });
    if (detail::float_key(offs) == key) anchors.push_back(x.phys);
  }
  if (anchors.empty()) throw std::invalid_argument("repetitivity_radius: patch does not occur in the sample");
  RepetitivityReport out;
  out.occurrences = anchors.size();
  const double spacing = detail::typical_spacing(ps);
  if (step <= 0) step = spacing / (ps.dim() == 1 ? 50.0 : 10.0);
  // mesh kept away from the edge so balls are judged on full data
  double collar = 2 * spacing + extent;
  double cover = 0;
  for (int it = 0; it < 3; ++it) {
    cover = covering_radius(anchors, ps.region, step, collar);
    if (cover + extent <= collar) break;
    collar = (cover + extent) * 1.01;
  }
  out.radius = cover + extent;
  return out;
}

// ---------------------------------------------------------------------------
// Weyl equidistribution

struct WeylReport {
  std::size_t n = 0;
  std::size_t bins = 0;
  double chi_square = 0;
  double p_value = 1;
  double discrepancy = 0;  // max |empirical - Haar| over bins (star discrepancy for intervals)
};

namespace detail {

inline double interval_position(const InternalPoint& u) { return to_real(u)[0]; }

}  // namespace detail

/// Chi-square of bin counts of the internal images against Haar-proportional
/// expectations. Intervals and boxes use equal slabs along the first axis,
/// coset unions use their cosets as bins.
inline WeylReport weyl_test(const PointSet& ps, const Window& w, int bins = 20) {
  WeylReport out;
  out.n = ps.size();
  if (ps.empty()) return out;
  std::vector<double> expected, observed;
  const double n = static_cast<double>(ps.size());
  if (const auto* cu = std::get_if<CosetUnionWindow>(&w.variant())) {
    const Rational vol = haar_volume_exact(*cu);
    observed.assign(cu->cosets.size(), 0.0);
    for (const auto& c : cu->cosets)
      expected.push_back(n * to_double(Rational(BigInt(1), pow_big(BigInt(cu->p), static_cast<unsigned>(cu->m * c.k))) / vol));
    for (const auto& p : ps.points) {
      const auto x = detail::as_padic(p.internal, cu->p, PAdicApprox::kDefaultDepth);
      for (std::size_t i = 0; i < cu->cosets.size(); ++i) {
        const auto& c = cu->cosets[i];
        const BigInt mod = pow_big(BigInt(cu->p), static_cast<unsigned>(c.k));
        bool in = true;
        for (std::size_t j = 0; j < x.size() && in; ++j) in = mod_floor(x[j].residue() - c.rep[j], mod) == 0;
        if (in) {
          observed[i] += 1;
          break;
        }
      }
    }
  } else {
    double lo = 0, hi = 0;
    if (const auto* iv = std::get_if<IntervalWindow>(&w.variant())) {
      lo = iv->lo.to_double();
      hi = iv->hi.to_double();
    } else if (const auto* bx = std::get_if<BoxWindow>(&w.variant())) {
      lo = bx->sides[0].lo.to_double();
      hi = bx->sides[0].hi.to_double();
    } else {
      throw unsupported_error("weyl_test: bins are defined for intervals, boxes and coset unions");
    }
    if (bins < 2) throw std::invalid_argument("weyl_test: need at least two bins");
    observed.assign(static_cast<std::size_t>(bins), 0.0);
    expected.assign(static_cast<std::size_t>(bins), n / bins);
    std::vector<double> xs;
    for (const auto& p : ps.points) {
      const double u = detail::interval_position(p.internal);
      xs.push_back(u);
      const long b = std::clamp(static_cast<long>(std::floor((u - lo) / (hi - lo) * bins)), 0L, static_cast<long>(bins) - 1);
      observed[static_cast<std::size_t>(b)] += 1;
    }
    // star discrepancy of the normalized positions
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = (xs[i] - lo) / (hi - lo);
      out.discrepancy = std::max({out.discrepancy, std::fabs(static_cast<double>(i + 1) / n - f), std::fabs(static_cast<double>(i) / n - f)});
    }
  }
  out.bins = observed.size();
  for (std::size_t i = 0; i < observed.size(); ++i) {
    out.chi_square += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    if (!std::holds_alternative<IntervalWindow>(w.variant()) && !std::holds_alternative<BoxWindow>(w.variant()))
      out.discrepancy = std::max(out.discrepancy, std::fabs(observed[i] - expected[i]) / n);
  }
  if (out.bins > 1) {
    boost::math::chi_squared dist(static_cast<double>(out.bins - 1));
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.chi_square));
  }
  return out;
}

struct WeylAverage {
  double average = 0;   // (1 / card Lambda_R) sum f*(x*)
  double integral = 0;  // (1 / vol W) integral over W of f*
  double gap = 0;
};

/// Discrete average of f* over the internal images against its window mean.
/// The integral is computed for intervals and boxes (up to dimension 3).
inline WeylAverage weyl_average(const PointSet& ps, const Window& w, const std::function<double(const RealVector&)>& f) {
  WeylAverage out;
  if (ps.empty()) throw std::invalid_argument("weyl_average: empty point set");
  for (const auto& p : ps.points) out.average += f(to_real(p.internal));
  out.average /= static_cast<double>(ps.size());
  std::vector<std::pair<double, double>> sides;
  if (const auto* iv = std::get_if<IntervalWindow>(&w.variant())) sides.emplace_back(iv->lo.to_double(), iv->hi.to_double());
  else if (const auto* bx = std::get_if<BoxWindow>(&w.variant())) {
    for (const auto& s : bx->sides) sides.emplace_back(s.lo.to_double(), s.hi.to_double());
  } else {
    throw unsupported_error("weyl_average: window integral is implemented for intervals and boxes");
  }
  if (sides.size() > 3) throw unsupported_error("weyl_average: boxes of dimension above 3");
  using boost::math::quadrature::gauss_kronrod;
  RealVector u(sides.size());
  std::function<double(std::size_t)> nested = [&](std::size_t axis) -> double {
    if (axis == sides.size()) return f(u);
    return gauss_kronrod<double, 61>::integrate([&](double t) {
      u[axis] = t;
      return nested(axis + 1);
    }, sides[axis].first, sides[axis].second, 8, 1e-12);
  };
  double vol = 1;
  for (const auto& [a, b] : sides) vol *= b - a;
  out.integral = nested(0) / vol;
  out.gap = std::fabs(out.average - out.integral);
  return out;
}

/// card(Lambda_R* cap U) / card(Lambda_R), to be compared with mu(U) / mu(W).
inline double weyl_fraction(const PointSet& ps, const Window& u) {
  if (ps.empty()) return 0.0;
  std::size_t in = 0;
  for (const auto& p : ps.points) in += contains(u, p.internal) != Membership::outside;
  return static_cast<double>(in) / static_cast<double>(ps.size());
}

// ---------------------------------------------------------------------------
// self-similarity

struct SelfSimilarity {
  GoldenRational q, qstar;
  Matrix<long long> lattice_map;           // Q~ in lattice coordinates
  Window wq = Window::empty(0);
  double s = 0;
  std::vector<LatticePoint> translations;  // T_Q cap B_s
  std::vector<RealVector> translation_star;
  std::size_t checked = 0;                 // inclusion checks performed
  std::size_t failures = 0;

  IntVec apply(const IntVec& z) const {
    IntVec out(z.size(), 0);
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = 0; j < z.size(); ++j) out[i] += lattice_map(i, j) * z[j];
    return out;
  }
};

/// Q = q (scalar in Q(sqrt5)) on an exact golden scheme with square embedding;
/// Q* is multiplication by the conjugate q'.
inline SelfSimilarity find_self_similarity(const CutProjectScheme& s, const Window& w, const GoldenRational& q, double radius = 100) {
  if (!(abs(q) > GoldenRational(1))) throw std::invalid_argument("find_self_similarity: |q| must exceed 1");
  if (!s.has_exact_physical() || !s.has_exact_internal()) throw unsupported_error("find_self_similarity: exact golden schemes only");
  const std::size_t n = static_cast<std::size_t>(s.rank);
  if (s.phys.rows() + s.inner.rows() != n) throw unsupported_error("find_self_similarity: embedding is not square");
  Matrix<GoldenRational> e(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < s.phys.rows(); ++i) e(i, j) = s.phys(i, j);
    for (std::size_t i = 0; i < s.inner.rows(); ++i) e(s.phys.rows() + i, j) = s.inner(i, j);
  }
  const GoldenRational qc = q.conjugate();
  Matrix<GoldenRational> scaled = e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= i < s.phys.rows() ? q : qc;
  const Matrix<GoldenRational> m = inverse(e) * scaled;
  SelfSimilarity out;
  out.q = q;
  out.qstar = qc;
  out.s = radius;
  out.lattice_map = Matrix<long long>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto& v = m(i, j);
      if (v.b() != 0 || !is_integer(v.a())) throw std::invalid_argument("find_self_similarity: Q does not map the lattice onto itself");
      out.lattice_map(i, j) = static_cast<long long>(numerator(v.a()));
    }
  if (abs(determinant(m)) != GoldenRational(1)) throw std::invalid_argument("find_self_similarity: Q does not map the lattice onto itself");
  out.wq = window_Q(w, qc);
  if (out.wq.is_empty()) throw std::runtime_error("find_self_similarity: W_Q has empty interior");
  const auto t = enumerate_model_set(s, out.wq, radius);
  const auto lambda = enumerate_model_set(s, w, radius);
  for (const auto& p : t.points) {
    out.translations.push_back({p.coords});
    out.translation_star.push_back(to_real(p.internal));
  }
  std::atomic<std::size_t> fails{0};
  parallel_for(out.translations.size(), [&](std::size_t i) {
    const IntVec& v = out.translations[i].coords;
    for (const auto& x : lambda.points)
      if (contains(w, s.star(out.apply(x.coords) + v)) == Membership::outside) ++fails;
  }, 1);
  out.checked = out.translations.size() * lambda.size();
  out.failures = fails;
  return out;
}

struct InvariantDensity {
  RealVector lo, hi;
  int resolution = 0;        // cells per axis
  std::vector<double> mass;  // per cell, row-major with the first axis slowest
  int iterations = 0;
  std::vector<double> gaps;  // L1 distance between successive iterates

  double cell_volume() const {
    double v = 1;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= (hi[i] - lo[i]) / resolution;
    return v;
  }
  double total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }
  double density(std::size_t cell) const { return mass[cell] / cell_volume(); }
};

namespace detail {

/// Fractions of the image of cell c under u -> a u + b falling in each grid cell of one axis.
inline std::vector<std::pair<int, double>> pushforward_weights(double lo, double h, int n, int c, double a, double b) {
  double x0 = a * (lo + c * h) + b, x1 = a * (lo + (c + 1) * h) + b;
  if (x0 > x1) std::swap(x0, x1);
  const double len = x1 - x0;
  std::vector<std::pair<int, double>> out;
  const int first = std::clamp(static_cast<int>(std::floor((x0 - lo) / h)), 0, n - 1);
  const int last = std::clamp(static_cast<int>(std::floor((x1 - lo) / h)), 0, n - 1);
  double total = 0;
  for (int k = first; k <= last; ++k) {
    const double a0 = std::max(x0, lo + k * h), a1 = std::min(x1, lo + (k + 1) * h);
    if (a1 > a0) {
      out.emplace_back(k, a1 - a0);
      total += a1 - a0;
    }
  }
  if (out.empty() || !(len > 0)) return {{first, 1.0}};
  for (auto& [k, w] : out) w /= total;  // slivers outside W from rounding go back in
  return out;
}

inline std::vector<std::pair<double, double>> box_sides(const Window& w, const char* who) {
  std::vector<std::pair<double, double>> sides;
  if (const auto* iv = std::get_if<IntervalWindow>(&w.variant())) sides.emplace_back(iv->lo.to_double(), iv->hi.to_double());
  else if (const auto* bx = std::get_if<BoxWindow>(&w.variant())) {
    for (const auto& s : bx->sides) sides.emplace_back(s.lo.to_double(), s.hi.to_double());
  } else {
    throw unsupported_error(std::string(who) + ": interval or box windows only");
  }
  return sides;
}

}  // namespace detail

/// Fixed point of mu -> (1/|T|) sum_v (u -> q* u + v*)_* mu on a uniform grid,
/// starting from the normalized uniform density.
inline InvariantDensity invariant_density(const SelfSimilarity& ss, const Window& w, int resolution = 400, int max_iterations = 100000, double tol = 1e-8) {
  const auto sides = detail::box_sides(w, "invariant_density");
  if (ss.translations.empty()) throw std::invalid_argument("invariant_density: empty translation set");
  if (resolution < 1) throw std::invalid_argument("invariant_density: resolution must be positive");
  const std::size_t d = sides.size();
  const int n = resolution;
  InvariantDensity out;
  for (const auto& [a, b] : sides) {
    out.lo.push_back(a);
    out.hi.push_back(b);
  }
  out.resolution = n;
  std::size_t cells = 1;
  for (std::size_t i = 0; i < d; ++i) cells *= static_cast<std::size_t>(n);
  const double a = ss.qstar.to_double();
  const double share = 1.0 / static_cast<double>(ss.translations.size());

  // sparse transfer operator, one row per source cell
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(cells);
  parallel_for(cells, [&](std::size_t src) {
    std::vector<int> idx(d);
    std::size_t rest = src;
    for (std::size_t ax = d; ax-- > 0;) {
      idx[ax] = static_cast<int>(rest % static_cast<std::size_t>(n));
      rest /= static_cast<std::size_t>(n);
    }
    std::map<std::size_t, double> acc;
    for (const auto& v : ss.translation_star) {
      std::vector<std::pair<std::size_t, double>> tensor{{0, 1.0}};
      for (std::size_t ax = 0; ax < d; ++ax) {
        const double h = (sides[ax].second - sides[ax].first) / n;
        const auto wts = detail::pushforward_weights(sides[ax].first, h, n, idx[ax], a, v[ax]);
        std::vector<std::pair<std::size_t, double>> next;
        for (const auto& [t, tw] : tensor)
          for (const auto& [k, kw] : wts) next.emplace_back(t * static_cast<std::size_t>(n) + static_cast<std::size_t>(k), tw * kw);
        tensor = std::move(next);
      }
      for (const auto& [t, tw] : tensor) acc[t] += tw * share;
    }
    rows[src].assign(acc.begin(), acc.end());
  }, 16);

  std::vector<double> mu(cells, 1.0 / static_cast<double>(cells)), next(cells);
  for (int it = 1; it <= max_iterations; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t src = 0; src < cells; ++src)
      for (const auto& [t, wt] : rows[src]) next[t] += mu[src] * wt;
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double gap = 0;
    for (std::size_t i = 0; i < cells; ++i) {
      next[i] /= total;
      gap += std::fabs(next[i] - mu[i]);
    }
    mu.swap(next);
    out.gaps.push_back(gap);
    out.iterations = it;
    if (gap < tol) {
      out.mass = std::move(mu);
      return out;
    }
  }
  throw std::runtime_error("invariant_density: no convergence within " + std::to_string(max_iterations) + " iterations");
}

// ---------------------------------------------------------------------------
// patch metric

struct PatchMatch {
  bool match = false;
  RealVector v;             // translation with (v + S) cap K = S' cap K
  double best_radius = 0;   // largest K on the schedule that matched with eps = 1/K
  double distance = 1;      // min(1, 1 / best_radius)
};

namespace detail {

inline std::vector<RealVector> inside_ball(const std::vector<RealVector>& pts, const RealVector& shift, double k) {
  std::vector<RealVector> out;
  for (const auto& p : pts) {
    RealVector x = p;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += shift[i];
    if (norm2(x) <= k * k) out.push_back(std::move(x));
  }
  return out;
}

inline bool same_points(std::vector<RealVector> a, std::vector<RealVector> b, double tol) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  SpatialGrid grid(b, 1.0);
  std::vector<char> used(b.size(), 0);
  for (const auto& x : a) {
    bool hit = false;
    grid.for_each_within(x, tol, [&](std::size_t j) {
      if (!hit && !used[j]) {
        used[j] = 1;
        hit = true;
      }
    });
    if (!hit) return false;
  }
  return true;
}

inline std::optional<RealVector> match_translation(const std::vector<RealVector>& s, const std::vector<RealVector>& t, double k, double eps) {
  const std::size_t d = s.empty() ? (t.empty() ? 0 : t[0].size()) : s[0].size();
  const RealVector zero(d, 0.0);
  const auto target = inside_ball(t, zero, k);
  std::vector<RealVector> cands;
  if (target.empty()) cands.push_back(zero);
  else {
    const auto& anchor = *std::min_element(target.begin(), target.end(), [](const RealVector& x, const RealVector& y) { return norm2(x) < norm2(y); });
    for (const auto& p : s) {
      RealVector v(d);
      for (std::size_t i = 0; i < d; ++i) v[i] = anchor[i] - p[i];
      if (norm2(v) < eps * eps) cands.push_back(v);
    }
  }
  for (const auto& v : cands)
    if (same_points(inside_ball(s, v, k), target, 1e-9)) return v;
  return std::nullopt;
}

}  // namespace detail

/// Is there |v| < eps with (v + S) cap B_K = S' cap B_K? Also scores the pair on
/// the schedule K = 2^j, eps = 1/K, up to the sample radii.
inline PatchMatch patch_metric(const PointSet& s, const PointSet& t, double k, double eps) {
  const auto a = s.physical(), b = t.physical();
  PatchMatch out;
  if (auto v = detail::match_translation(a, b, k, eps)) {
    out.match = true;
    out.v = *v;
  }
  const double reach = std::min(s.region.kind == Region::Kind::ball ? s.region.radius : 1e300, t.region.kind == Region::Kind::ball ? t.region.radius : 1e300);
  for (double kk = 1; kk <= reach; kk *= 2) {
    if (!detail::match_translation(a, b, kk, 1 / kk)) break;
    out.best_radius = kk;
  }
  out.distance = out.best_radius > 1 ? 1 / out.best_radius : 1.0;
  return out;
}

// ---------------------------------------------------------------------------
// torus parametrization

struct TorusPoint {
  RealVector u, v;
};

/// Reduces (u, v) modulo the embedded lattice into the half-open fundamental
/// parallelotope spanned by the embedded basis.
inline TorusPoint torus_reduce(const CutProjectScheme& s, const RealVector& u, const RealVector& v) {
  const Matrix<double> e = s.embedding_matrix();
  if (e.rows() != e.cols()) throw unsupported_error("torus_reduce: embedding is not square");
  const Matrix<double> inv = inverse(e);
  const std::size_t n = e.rows();
  RealVector x(n);
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = u[i];
  for (std::size_t i = 0; i < v.size(); ++i) x[u.size() + i] = v[i];
  RealVector y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) y[i] += inv(i, j) * x[j];
  for (auto& c : y) {
    c -= std::floor(c);
    if (c > 1 - 1e-12 || c < 1e-12) c = 0;  // snap so that reducing twice is a no-op
  }
  TorusPoint out{RealVector(u.size(), 0.0), RealVector(v.size(), 0.0)};
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += e(i, j) * y[j];
    (i < u.size() ? out.u[i] : out.v[i - u.size()]) = acc;
  }
  return out;
}

struct BetaResult {
  InternalPoint center;
  double diameter = 0;
  std::optional<Window> intersection;
  ExactVector lo, hi;  // exact corners for interval and box windows
};

/// Intersection over the sample of W - x*. For Lambda(W) it contains 0; for a
/// sample of Lambda(W) - u its centre moves by u*.
inline BetaResult beta_map(const PointSet& ps, const CutProjectScheme& s, const Window& w, std::size_t max_cosets = 4096) {
  if (ps.empty()) throw std::invalid_argument("beta_map: empty sample");
  BetaResult out;
  if (const auto* cu = std::get_if<CosetUnionWindow>(&w.variant())) {
    // the limit point belongs to the closure, kept as a coset at its known depth
    std::vector<Coset> pieces = cu->cosets;
    if (cu->limit) {
      Coset c{{}, cu->limit->coords.at(0).depth()};
      for (const auto& x : cu->limit->coords) c.rep.push_back(x.residue());
      pieces.push_back(std::move(c));
    }
    std::vector<Coset> cur = pieces;
    const std::size_t m = static_cast<std::size_t>(cu->m);
    for (const auto& pt : ps.points) {
      const auto x = detail::as_padic(s.star(pt.coords), cu->p, PAdicApprox::kDefaultDepth);
      std::vector<Coset> next;
      for (const auto& a : cur)
        for (const auto& b : pieces) {
          // a cap (b - x*)
          const int k = std::min(a.k, b.k);
          const BigInt mod = pow_big(BigInt(cu->p), static_cast<unsigned>(k));
          bool meet = true;
          std::vector<BigInt> brep(m);
          for (std::size_t i = 0; i < m; ++i) {
            brep[i] = b.rep[i] - x[i].residue();
            meet = meet && mod_floor(a.rep[i] - brep[i], mod) == 0;
          }
          if (meet) next.push_back(a.k >= b.k ? a : Coset{brep, b.k});
        }
      if (next.empty()) throw std::runtime_error("beta_map: empty intersection, sample inconsistent with window");
      const Window canon = Window::coset_union(cu->p, cu->m, next);
      cur = std::get<CosetUnionWindow>(canon.variant()).cosets;
      if (cur.size() > max_cosets) throw budget_exceeded("beta_map: too many cosets in the intersection");
    }
    out.intersection = Window::coset_union(cu->p, cu->m, cur);
    PAdicVector c;
    for (const auto& r : cur[0].rep) c.coords.push_back(PAdicApprox::from_integer(r, cu->p, PAdicApprox::kDefaultDepth));
    out.center = c;
    // ultrametric diameter: coarsest coset, or the largest distance between two of them
    const double p = static_cast<double>(cu->p);
    for (const auto& a : cur) {
      out.diameter = std::max(out.diameter, std::pow(p, -a.k));
      for (const auto& b : cur)
        for (std::size_t i = 0; i < m; ++i) {
          const BigInt diff = a.rep[i] - b.rep[i];
          if (diff != 0) out.diameter = std::max(out.diameter, std::pow(p, -static_cast<double>(valuation_of_integer(diff, cu->p))));
        }
    }
    return out;
  }
  std::vector<IntervalWindow> sides;
  if (const auto* iv = std::get_if<IntervalWindow>(&w.variant())) sides.push_back(*iv);
  else if (const auto* bx = std::get_if<BoxWindow>(&w.variant())) sides = bx->sides;
  else throw unsupported_error("beta_map: interval, box or coset-union windows only");
  const std::size_t m = sides.size();
  ExactVector mn(m), mx(m);
  bool first = true;
  for (const auto& pt : ps.points) {
    const ExactVector x = s.internal_exact(pt.coords);
    for (std::size_t i = 0; i < m; ++i) {
      if (first || x[i] < mn[i]) mn[i] = x[i];
      if (first || x[i] > mx[i]) mx[i] = x[i];
    }
    first = false;
  }
  out.lo.resize(m);
  out.hi.resize(m);
  ExactVector centre(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.lo[i] = sides[i].lo - mn[i];
    out.hi[i] = sides[i].hi - mx[i];
    if (out.hi[i] < out.lo[i]) throw std::runtime_error("beta_map: empty intersection, sample inconsistent with window");
    centre[i] = (out.lo[i] + out.hi[i]) / GoldenRational(2);
    out.diameter = std::max(out.diameter, (out.hi[i] - out.lo[i]).to_double());
  }
  out.center = centre;
  if (m == 1 && out.lo[0] < out.hi[0]) out.intersection = Window::interval(out.lo[0], out.hi[0]);
  return out;
}

}  // namespace aperiodica
