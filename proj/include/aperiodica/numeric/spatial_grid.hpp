#pragma once

// Uniform bucket grid over points in R^d for radius and nearest-neighbour queries.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace aperiodica {

using RealVector = std::vector<double>;

inline double dist2(const RealVector& a, const RealVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline double norm2(const RealVector& a) {
  double s = 0;
  for (double v : a) s += v * v;
  return s;
}

class SpatialGrid {
 public:
  SpatialGrid(const std::vector<RealVector>& pts, double cell) : pts_(&pts), cell_(cell) {
    if (!(cell > 0)) throw std::invalid_argument("SpatialGrid: cell size must be positive");
    dim_ = pts.empty() ? 0 : pts[0].size();
    for (std::size_t i = 0; i < pts.size(); ++i) buckets_[cell_of(pts[i])].push_back(i);
  }

  std::size_t dim() const { return dim_; }

  /// Calls fn(index) for every point within distance r of q (closed ball).
  void for_each_within(const RealVector& q, double r, const std::function<void(std::size_t)>& fn) const {
    if (dim_ == 0) return;
    const auto base = cell_of(q);
    const long reach = static_cast<long>(std::ceil(r / cell_));
    std::vector<long> off(dim_, -reach);
    const double r2 = r * r * (1 + 1e-12) + 1e-300;
    while (true) {
      std::vector<long> c(dim_);
      for (std::size_t i = 0; i < dim_; ++i) c[i] = base[i] + off[i];
      if (auto it = buckets_.find(c); it != buckets_.end())
        for (std::size_t idx : it->second)
          if (dist2((*pts_)[idx], q) <= r2) fn(idx);
      std::size_t i = 0;
      while (i < dim_ && ++off[i] > reach) off[i++] = -reach;
      if (i == dim_) break;
    }
  }

  /// Distance to the nearest point, searching outward ring by ring up to max_r.
  double nearest_distance(const RealVector& q, double max_r, std::size_t exclude = std::numeric_limits<std::size_t>::max()) const {
    double best = std::numeric_limits<double>::infinity();
    for (double r = cell_; ; r *= 2) {
      const double rr = std::min(r, max_r);
      for_each_within(q, rr, [&](std::size_t idx) {
        if (idx == exclude) return;
        best = std::min(best, std::sqrt(dist2((*pts_)[idx], q)));
      });
      if (best <= rr || rr >= max_r) break;
    }
    return best;
  }

 private:
  std::vector<long> cell_of(const RealVector& p) const {
    std::vector<long> c(dim_);
    for (std::size_t i = 0; i < dim_; ++i) c[i] = static_cast<long>(std::floor(p[i] / cell_));
    return c;
  }

  struct CellHash {
    std::size_t operator()(const std::vector<long>& c) const {
      std::uint64_t h = 1469598103934665603ULL;
      for (long v : c) h = (h ^ static_cast<std::uint64_t>(v)) * 1099511628211ULL;
      return static_cast<std::size_t>(h);
    }
  };

  const std::vector<RealVector>* pts_;
  double cell_;
  std::size_t dim_ = 0;
  std::unordered_map<std::vector<long>, std::vector<std::size_t>, CellHash> buckets_;
};

}  // namespace aperiodica
