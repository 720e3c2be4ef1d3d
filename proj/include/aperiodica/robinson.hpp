#pragma once

// Centres of the Robinson square tiling as a 2-adic model set in Z^2:
// the window, its limit point and the six tile classes.

#include "aperiodica/construct.hpp"

#include <array>
#include <bit>

namespace aperiodica {

struct RobinsonConfig {
  std::vector<int> alpha, beta;
  int depth = 16;

  /// alpha_i = (-1)^{popcount(i)} (Thue-Morse), beta_i = -alpha_{i+1}.
  static RobinsonConfig defaults(int depth = 16) {
    RobinsonConfig c;
    c.depth = depth;
    for (int i = 0; i <= depth + 1; ++i) c.alpha.push_back(std::popcount(static_cast<unsigned>(i)) % 2 == 0 ? 1 : -1);
    for (int i = 0; i <= depth; ++i) c.beta.push_back(-c.alpha[static_cast<std::size_t>(i) + 1]);
    return c;
  }

  void validate() const {
    if (depth < 2) throw std::invalid_argument("robinson: depth must be at least 2");
    if (depth > 60) throw std::invalid_argument("robinson: depth above 60 is not supported");
    if (static_cast<int>(alpha.size()) < depth || static_cast<int>(beta.size()) < depth)
      throw std::invalid_argument("robinson: need at least `depth` entries of alpha and beta");
    for (int v : alpha)
      if (v != 1 && v != -1) throw std::invalid_argument("robinson: alpha entries must be +1 or -1");
    for (int v : beta)
      if (v != 1 && v != -1) throw std::invalid_argument("robinson: beta entries must be +1 or -1");
  }

  /// c_k = (sum_{i<k-1} alpha_i 2^i, sum_{i<k-1} beta_i 2^i); c_1 = 0.
  std::pair<long long, long long> c(int k) const {
    long long x = 0, y = 0;
    for (int i = 0; i < k - 1; ++i) {
      x += alpha[static_cast<std::size_t>(i)] * (1LL << i);
      y += beta[static_cast<std::size_t>(i)] * (1LL << i);
    }
    return {x, y};
  }
};

struct RobinsonWindow {
  Window window;
  PAdicVector limit;  // c = (sum alpha_k 2^k, sum beta_k 2^k) to depth K
};

/// W_K = union over k = 1..K of c_k + 2^k Z_2^2.
inline RobinsonWindow robinson_window(const RobinsonConfig& cfg) {
  cfg.validate();
  std::vector<Coset> cosets;
  for (int k = 1; k <= cfg.depth; ++k) {
    const auto [x, y] = cfg.c(k);
    cosets.push_back({{BigInt(x), BigInt(y)}, k});
  }
  BigInt cx = 0, cy = 0;
  for (int i = 0; i < cfg.depth; ++i) {
    cx += BigInt(cfg.alpha[static_cast<std::size_t>(i)]) * pow_big(BigInt(2), static_cast<unsigned>(i));
    cy += BigInt(cfg.beta[static_cast<std::size_t>(i)]) * pow_big(BigInt(2), static_cast<unsigned>(i));
  }
  PAdicVector c{{PAdicApprox::from_integer(cx, 2, cfg.depth), PAdicApprox::from_integer(cy, 2, cfg.depth)}};
  return {Window::coset_union(2, 2, cosets, c), c};
}

struct BoundaryCandidate {
  PAdicVector point;  // representative of the class, known to `level` digits
  int level = 0;
};

/// Residue classes mod p^level that W meets without containing, at the deepest
/// level where that can happen (one less than the largest coset exponent).
/// Their representatives approximate the boundary of the infinite union.
inline std::vector<BoundaryCandidate> boundary_candidates(const Window& w, std::size_t max_classes = 1u << 16) {
  const auto* cu = std::get_if<CosetUnionWindow>(&w.variant());
  if (!cu) throw unsupported_error("boundary_candidates: coset-union windows only");
  int kmax = 0;
  for (const auto& c : cu->cosets) kmax = std::max(kmax, c.k);
  const BigInt p(cu->p);
  auto classify = [&](const std::vector<BigInt>& r, int level) {
    // 0 = disjoint, 1 = partial, 2 = contained
    bool meets = false;
    for (const auto& c : cu->cosets) {
      const BigInt m = pow_big(p, static_cast<unsigned>(std::min(c.k, level)));
      bool agree = true;
      for (std::size_t i = 0; i < r.size() && agree; ++i) agree = mod_floor(r[i] - c.rep[i], m) == 0;
      if (!agree) continue;
      if (c.k <= level) return 2;
      meets = true;
    }
    return meets ? 1 : 0;
  };
  std::vector<std::vector<BigInt>> frontier{std::vector<BigInt>(static_cast<std::size_t>(cu->m), BigInt(0))};
  if (classify(frontier[0], 0) != 1) return {};
  const std::size_t children = static_cast<std::size_t>(std::pow(static_cast<double>(cu->p), cu->m));
  for (int level = 0; level + 1 < kmax; ++level) {
    const BigInt step = pow_big(p, static_cast<unsigned>(level));
    std::vector<std::vector<BigInt>> next;
    for (const auto& r : frontier)
      for (std::size_t ch = 0; ch < children; ++ch) {
        std::vector<BigInt> child = r;
        std::size_t rest = ch;
        for (auto& v : child) {
          v += BigInt(static_cast<unsigned long long>(rest % cu->p)) * step;
          rest /= cu->p;
        }
        if (classify(child, level + 1) == 1) next.push_back(std::move(child));
      }
    if (next.size() > max_classes) throw budget_exceeded("boundary_candidates: too many partially covered classes");
    frontier = std::move(next);
  }
  std::vector<BoundaryCandidate> out;
  const int level = std::max(0, kmax - 1);
  for (const auto& r : frontier) {
    PAdicVector pt;
    for (const auto& v : r) pt.coords.push_back(PAdicApprox::from_integer(v, cu->p, std::max(1, level)));
    out.push_back({std::move(pt), level});
  }
  return out;
}

enum class RobinsonType { undecided = 0, vertex = 1, cross = 2, corner = 3, edge = 4, mid_edge = 5, blank = 6 };

/// Tile type of the centre x (1..6), or undecided when it depends on squares
/// of order beyond the configured depth.
class RobinsonClassifier {
 public:
  explicit RobinsonClassifier(RobinsonConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    for (int k = 1; k <= cfg_.depth; ++k) c_.push_back(cfg_.c(k));
  }

  const RobinsonConfig& config() const { return cfg_; }

  RobinsonType classify(long long x, long long y) const {
    const int K = cfg_.depth;
    if (mod(x, 2) == 0 && mod(y, 2) == 0) return RobinsonType::vertex;
    for (int k = 2; k <= K; ++k) {
      const auto [cx, cy] = ck(k);
      if (mod(x - cx, 1LL << k) == 0 && mod(y - cy, 1LL << k) == 0) return RobinsonType::cross;
    }
    const auto [kx, ky] = ck(K);
    if (mod(x - kx, 1LL << K) == 0 || mod(y - ky, 1LL << K) == 0) return RobinsonType::undecided;
    int edges = 0;
    bool middle = false;
    for (int j = 1; j < K; ++j) {
      // sides of the order-j squares centred on c_{j+1} + 2^{j+1} Z^2
      const auto [cx, cy] = ck(j + 1);
      const long long h = 1LL << (j - 1), half = 1LL << j, period = 1LL << (j + 1);
      const long long dx = mod(x - cx + half, period) - half;
      const long long dy = mod(y - cy + half, period) - half;
      if (std::llabs(dx) == h && std::llabs(dy) <= h) {
        ++edges;
        middle = dy == 0;
      } else if (std::llabs(dy) == h && std::llabs(dx) <= h) {
        ++edges;
        middle = dx == 0;
      }
    }
    if (edges >= 2) return RobinsonType::corner;
    if (edges == 1) return middle ? RobinsonType::mid_edge : RobinsonType::edge;
    return RobinsonType::blank;
  }

 private:
  static long long mod(long long a, long long m) {
    const long long r = a % m;
    return r < 0 ? r + m : r;
  }
  std::pair<long long, long long> ck(int k) const { return c_[static_cast<std::size_t>(k - 1)]; }

  RobinsonConfig cfg_;
  std::vector<std::pair<long long, long long>> c_;
};

struct RobinsonClasses {
  std::array<PointSet, 6> types;  // types[t - 1]
  PointSet undecided;

  std::size_t decided() const {
    std::size_t n = 0;
    for (const auto& t : types) n += t.size();
    return n;
  }

  /// Fraction of decided points of each type.
  std::array<double, 6> densities() const {
    std::array<double, 6> d{};
    const double n = static_cast<double>(decided());
    for (std::size_t i = 0; i < 6; ++i) d[i] = n > 0 ? static_cast<double>(types[i].size()) / n : 0.0;
    return d;
  }
};

inline std::array<double, 6> robinson_expected_densities() { return {0.25, 1.0 / 12, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6}; }

namespace detail {

inline RobinsonClasses classify_points(const RobinsonConfig& cfg, const std::vector<IntVec>& xs, const Region& region) {
  const RobinsonClassifier cl(cfg);
  auto scheme = std::make_shared<const CutProjectScheme>(make_robinson_scheme());
  std::vector<RobinsonType> type(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { type[i] = cl.classify(xs[i][0], xs[i][1]); }, 4096);
  RobinsonClasses out;
  for (auto& t : out.types) t = PointSet{scheme, {}, region, std::nullopt, std::nullopt};
  out.undecided = PointSet{scheme, {}, region, std::nullopt, std::nullopt};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ModelPoint p{xs[i], {static_cast<double>(xs[i][0]), static_cast<double>(xs[i][1])}, scheme->star(xs[i]), false};
    if (type[i] == RobinsonType::undecided) out.undecided.points.push_back(std::move(p));
    else out.types[static_cast<std::size_t>(type[i]) - 1].points.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

/// Classifies Z^2 within the ball of radius R.
inline RobinsonClasses robinson_tile_classes(const RobinsonConfig& cfg, double R) {
  std::vector<IntVec> xs;
  const long long b = static_cast<long long>(std::floor(R));
  for (long long x = -b; x <= b; ++x)
    for (long long y = -b; y <= b; ++y)
      if (static_cast<double>(x * x + y * y) <= R * R) xs.push_back({x, y});
  return detail::classify_points(cfg, xs, Region::ball(R));
}

/// Classifies the square patch [x0, x0 + n) x [y0, y0 + n).
inline RobinsonClasses robinson_tile_classes_patch(const RobinsonConfig& cfg, long long x0, long long y0, long long n) {
  std::vector<IntVec> xs;
  xs.reserve(static_cast<std::size_t>(n * n));
  for (long long x = x0; x < x0 + n; ++x)
    for (long long y = y0; y < y0 + n; ++y) xs.push_back({x, y});
  return detail::classify_points(cfg, xs, Region::box({double(x0), double(y0)}, {double(x0 + n), double(y0 + n)}));
}

}  // namespace aperiodica
