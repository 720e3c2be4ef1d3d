#pragma once

// Convex polytopes in R^n given by vertices (small n, few vertices):
// facets by brute force, a pulling triangulation, volume and the Fourier
// transform of the indicator as a sum over simplices.

#include "aperiodica/exact/matrix.hpp"
#include "aperiodica/numeric/spatial_grid.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

namespace aperiodica {

using Complex = std::complex<double>;

/// exp[z_0, ..., z_n], the divided difference of exp, read off the corner of
/// exp of the bidiagonal matrix with diagonal z and unit superdiagonal.
inline Complex exp_divided_difference(const std::vector<Complex>& z) {
  const std::size_t n = z.size();
  double zmax = 0;
  for (const auto& v : z) zmax = std::max(zmax, std::abs(v));
  int squarings = 0;
  while (zmax / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const double scale = std::ldexp(1.0, -squarings);
  std::vector<Complex> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = z[i] * scale;
    if (i + 1 < n) a[i * n + i + 1] = scale;
  }
  auto mul = [n](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    std::vector<Complex> out(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = i; k < n; ++k) {
        if (x[i * n + k] == 0.0) continue;
        for (std::size_t j = k; j < n; ++j) out[i * n + j] += x[i * n + k] * y[k * n + j];
      }
    return out;
  };
  // Taylor series of exp(A/2^s)
  std::vector<Complex> result(n * n, 0.0), term(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) result[i * n + i] = term[i * n + i] = 1.0;
  for (int k = 1; k <= 30; ++k) {
    term = mul(term, a);
    for (auto& v : term) v /= static_cast<double>(k);
    for (std::size_t i = 0; i < n * n; ++i) result[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) result = mul(result, result);
  return result[n - 1];
}

class ConvexPolytope {
 public:
  struct Facet {
    RealVector normal;  // unit outward normal
    double offset;      // normal . x <= offset inside
    std::vector<std::size_t> vertices;
  };

  ConvexPolytope() = default;
  explicit ConvexPolytope(std::vector<RealVector> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw std::invalid_argument("polytope: no vertices");
    dim_ = vertices_[0].size();
    for (const auto& v : vertices_)
      if (v.size() != dim_) throw std::invalid_argument("polytope: vertices of mixed dimension");
    if (dim_ == 0 || vertices_.size() < dim_ + 1) throw std::invalid_argument("polytope: not full-dimensional");
    scale_ = 0;
    for (const auto& v : vertices_)
      for (double x : v) scale_ = std::max(scale_, std::fabs(x));
    scale_ = std::max(scale_, 1.0);
    find_facets();
    if (facets_.size() < dim_ + 1) throw std::invalid_argument("polytope: not full-dimensional");
    prune_vertices();
    std::vector<std::size_t> all(vertices_.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    triangulate(all, dim_, {});
    volume_ = 0;
    for (const auto& s : simplices_) volume_ += simplex_volume(s);
  }

  std::size_t dim() const { return dim_; }
  const std::vector<RealVector>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<std::vector<std::size_t>>& simplices() const { return simplices_; }
  double volume() const { return volume_; }
  double tolerance() const { return 1e-12 * scale_; }

  /// max over facets of (normal . u - offset): negative inside, positive outside.
  double signed_excess(const RealVector& u) const {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& f : facets_) {
      double s = -f.offset;
      for (std::size_t i = 0; i < dim_; ++i) s += f.normal[i] * u[i];
      worst = std::max(worst, s);
    }
    return worst;
  }

  RealVector centroid() const {
    RealVector c(dim_, 0.0);
    for (const auto& v : vertices_)
      for (std::size_t i = 0; i < dim_; ++i) c[i] += v[i] / static_cast<double>(vertices_.size());
    return c;
  }

  double circumradius_about(const RealVector& c) const {
    double r = 0;
    for (const auto& v : vertices_) r = std::max(r, std::sqrt(dist2(v, c)));
    return r;
  }

  /// Radius of the largest ball about c inside the polytope.
  double inradius_about(const RealVector& c) const { return -signed_excess(c); }

  /// Integral over the polytope of exp(-2 pi i xi . x).
  Complex fourier(const RealVector& xi) const {
    Complex total = 0;
    double fact = 1;
    for (std::size_t k = 2; k <= dim_; ++k) fact *= static_cast<double>(k);
    for (const auto& s : simplices_) {
      std::vector<Complex> z;
      z.reserve(s.size());
      for (std::size_t idx : s) {
        double dot = 0;
        for (std::size_t i = 0; i < dim_; ++i) dot += xi[i] * vertices_[idx][i];
        z.emplace_back(0.0, -2 * std::numbers::pi * dot);
      }
      total += fact * simplex_volume(s) * exp_divided_difference(z);
    }
    return total;
  }

 private:
  double simplex_volume(const std::vector<std::size_t>& s) const {
    Matrix<double> m(dim_, dim_);
    for (std::size_t j = 1; j <= dim_; ++j)
      for (std::size_t i = 0; i < dim_; ++i) m(i, j - 1) = vertices_[s[j]][i] - vertices_[s[0]][i];
    double fact = 1;
    for (std::size_t k = 2; k <= dim_; ++k) fact *= static_cast<double>(k);
    return std::fabs(determinant(m)) / fact;
  }

  std::size_t affine_dim(const std::vector<std::size_t>& ids) const {
    if (ids.size() <= 1) return 0;
    Matrix<double> m(ids.size() - 1, dim_);
    for (std::size_t r = 1; r < ids.size(); ++r)
      for (std::size_t i = 0; i < dim_; ++i) m(r - 1, i) = (vertices_[ids[r]][i] - vertices_[ids[0]][i]) / scale_;
    return matrix_rank(m);
  }

  void find_facets() {
    const std::size_t nv = vertices_.size();
    std::set<std::vector<std::size_t>> seen;
    // all dim-subsets of vertices spanning a hyperplane
    std::vector<bool> mask(nv, false);
    std::fill(mask.begin(), mask.begin() + static_cast<long>(dim_), true);
    do {
      std::vector<std::size_t> ids;
      for (std::size_t i = 0; i < nv; ++i)
        if (mask[i]) ids.push_back(i);
      RealVector normal;
      if (!hyperplane_normal(ids, normal)) continue;
      double offset = 0;
      for (std::size_t i = 0; i < dim_; ++i) offset += normal[i] * vertices_[ids[0]][i];
      int above = 0, below = 0;
      std::vector<std::size_t> on;
      for (std::size_t v = 0; v < nv; ++v) {
        double s = -offset;
        for (std::size_t i = 0; i < dim_; ++i) s += normal[i] * vertices_[v][i];
        if (s > tolerance()) ++above;
        else if (s < -tolerance()) ++below;
        else on.push_back(v);
      }
      if (above && below) continue;
      if (above) {
        for (double& x : normal) x = -x;
        offset = -offset;
      }
      if (!seen.insert(on).second) continue;
      facets_.push_back({normal, offset, on});
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }

  bool hyperplane_normal(const std::vector<std::size_t>& ids, RealVector& normal) const {
    // normal = generalized cross product of the dim-1 edge vectors
    const std::size_t n = dim_;
    Matrix<double> m(n - 1, n);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t i = 0; i < n; ++i) m(r - 1, i) = vertices_[ids[r]][i] - vertices_[ids[0]][i];
    normal.assign(n, 0.0);
    if (n == 1) {
      normal[0] = 1;
      return true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Matrix<double> minor(n - 1, n - 1);
      for (std::size_t r = 0; r + 1 < n; ++r)
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c == i) continue;
          minor(r, cc++) = m(r, c);
        }
      normal[i] = ((i % 2) ? -1.0 : 1.0) * determinant(minor);
    }
    const double len = std::sqrt(norm2(normal));
    if (len < 1e-12 * std::pow(scale_, static_cast<double>(n - 1))) return false;
    for (double& x : normal) x /= len;
    return true;
  }

  void prune_vertices() {
    // keep vertices lying on at least dim facets (extreme points)
    std::vector<int> hits(vertices_.size(), 0);
    for (const auto& f : facets_)
      for (std::size_t v : f.vertices) ++hits[v];
    std::vector<RealVector> kept;
    std::vector<std::size_t> remap(vertices_.size(), SIZE_MAX);
    for (std::size_t v = 0; v < vertices_.size(); ++v)
      if (hits[v] >= static_cast<int>(dim_)) {
        remap[v] = kept.size();
        kept.push_back(vertices_[v]);
      }
    if (kept.size() == vertices_.size()) return;
    vertices_ = std::move(kept);
    for (auto& f : facets_) {
      std::vector<std::size_t> ids;
      for (std::size_t v : f.vertices)
        if (remap[v] != SIZE_MAX) ids.push_back(remap[v]);
      f.vertices = ids;
    }
  }

  /// Pulling triangulation of the face spanned by ids (affine dimension k):
  /// cone from its first vertex over every facet of the face not containing it.
  void triangulate(const std::vector<std::size_t>& ids, std::size_t k, std::vector<std::size_t> apexes) {
    if (k == 0) {
      apexes.push_back(ids[0]);
      simplices_.push_back(apexes);
      return;
    }
    const std::size_t v0 = ids[0];
    apexes.push_back(v0);
    std::set<std::vector<std::size_t>> subfaces;
    for (const auto& f : facets_) {
      std::vector<std::size_t> sub;
      for (std::size_t v : ids)
        if (std::find(f.vertices.begin(), f.vertices.end(), v) != f.vertices.end()) sub.push_back(v);
      if (sub.size() < k || std::find(sub.begin(), sub.end(), v0) != sub.end()) continue;
      if (sub.size() == ids.size()) continue;
      if (affine_dim(sub) != k - 1) continue;
      subfaces.insert(sub);
    }
    for (const auto& sub : subfaces) triangulate(sub, k - 1, apexes);
  }

  std::vector<RealVector> vertices_;
  std::size_t dim_ = 0;
  double scale_ = 1;
  std::vector<Facet> facets_;
  std::vector<std::vector<std::size_t>> simplices_;
  double volume_ = 0;
};

}  // namespace aperiodica
