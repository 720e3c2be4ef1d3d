#pragma once

// Enumeration of integer points in ellipsoids {z : (z-c)^T G (z-c) <= B}
// (Fincke-Pohst, after an LLL reduction of the quadratic form).

#include "aperiodica/error.hpp"
#include "aperiodica/exact/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace aperiodica {

using IntVec = std::vector<long long>;

/// Upper-triangular R with G = R^T R. Throws if G is not positive definite.
inline Matrix<double> cholesky_upper(const Matrix<double>& g) {
  const std::size_t n = g.rows();
  Matrix<double> r(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = g(i, i);
    for (std::size_t k = 0; k < i; ++k) s -= r(k, i) * r(k, i);
    if (!(s > 0)) throw std::domain_error("cholesky: form is not positive definite");
    r(i, i) = std::sqrt(s);
    for (std::size_t j = i + 1; j < n; ++j) {
      double t = g(i, j);
      for (std::size_t k = 0; k < i; ++k) t -= r(k, i) * r(k, j);
      r(i, j) = t / r(i, i);
    }
  }
  return r;
}

struct LllResult {
  Matrix<double> gram;         // U^T G U
  Matrix<long long> transform;  // U, columns are the new basis in old coordinates
};

/// LLL reduction of a positive definite Gram matrix (delta = 0.99).
inline LllResult lll_reduce(const Matrix<double>& g0, double delta = 0.99) {
  const std::size_t n = g0.rows();
  Matrix<long long> u = Matrix<long long>::identity(n);
  auto gram_of = [&]() {
    Matrix<double> ud = u.map([](long long v) { return static_cast<double>(v); });
    return ud.transpose() * g0 * ud;
  };
  Matrix<double> g = gram_of();
  auto gso = [&](std::vector<double>& bstar, Matrix<double>& mu) {
    bstar.assign(n, 0);
    mu = Matrix<double>(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double s = g(i, j);
        for (std::size_t k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * bstar[k];
        mu(i, j) = s / bstar[j];
      }
      double s = g(i, i);
      for (std::size_t k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * bstar[k];
      bstar[i] = s;
    }
  };
  std::vector<double> bstar;
  Matrix<double> mu;
  std::size_t k = 1;
  int guard = 0;
  while (k < n) {
    if (++guard > 100000) throw convergence_error("lll_reduce: no convergence");
    gso(bstar, mu);
    for (std::size_t jj = k; jj-- > 0;) {
      const double q = std::round(mu(k, jj));
      if (q != 0) {
        const auto qi = static_cast<long long>(q);
        for (std::size_t r = 0; r < n; ++r) u(r, k) -= qi * u(r, jj);
        g = gram_of();
        gso(bstar, mu);
      }
    }
    if (bstar[k] >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar[k - 1]) {
      ++k;
    } else {
      for (std::size_t r = 0; r < n; ++r) std::swap(u(r, k), u(r, k - 1));
      g = gram_of();
      k = std::max<std::size_t>(k - 1, 1);
    }
  }
  return {g, u};
}

struct EnumerationOptions {
  std::uint64_t node_budget = 200'000'000;
  bool reduce = true;
};

/// Calls visit(z) for every integer z with (z - center)^T G (z - center) <= bound.
/// Returns the number of search nodes used.
inline std::uint64_t enumerate_ellipsoid(const Matrix<double>& g, const std::vector<double>& center, double bound,
                                         const std::function<void(const IntVec&)>& visit,
                                         const EnumerationOptions& opt = {}) {
  const std::size_t n = g.rows();
  if (n == 0) {
    visit({});
    return 1;
  }
  Matrix<double> gram = g;
  Matrix<long long> u = Matrix<long long>::identity(n);
  std::vector<double> c = center;
  if (opt.reduce && n > 1) {
    auto red = lll_reduce(g);
    gram = red.gram;
    u = red.transform;
    // center in reduced coordinates: U^{-1} c
    const Matrix<double> uinv = inverse(u.map([](long long v) { return static_cast<double>(v); }));
    c = uinv * center;
  }
  const Matrix<double> r = cholesky_upper(gram);
  // q_ii = r_ii^2, q_ij = r_ij / r_ii
  std::vector<double> qd(n);
  Matrix<double> q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    qd[i] = r(i, i) * r(i, i);
    for (std::size_t j = i + 1; j < n; ++j) q(i, j) = r(i, j) / r(i, i);
  }
  std::vector<long long> z(n, 0);
  IntVec out(n);
  std::uint64_t nodes = 0;
  const double slack = 1e-9 * (1 + std::fabs(bound));

  // iterative depth-first search from coordinate n-1 down to 0
  std::vector<double> rem(n + 1, 0), mid(n, 0);
  std::vector<long long> hi(n, 0);
  rem[n] = bound + slack;
  auto centre_of = [&](std::size_t i) {
    double s = c[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= q(i, j) * (static_cast<double>(z[j]) - c[j]);
    return s;
  };
  auto start_level = [&](std::size_t i) -> bool {
    mid[i] = centre_of(i);
    const double rad2 = rem[i + 1] / qd[i];
    if (rad2 < 0) return false;
    const double rad = std::sqrt(rad2);
    z[i] = static_cast<long long>(std::ceil(mid[i] - rad));
    hi[i] = static_cast<long long>(std::floor(mid[i] + rad));
    return z[i] <= hi[i];
  };
  std::size_t level = n - 1;
  bool ok = start_level(level);
  while (true) {
    if (!ok || z[level] > hi[level]) {
      if (level == n - 1) break;
      ++level;
      ++z[level];
      ok = true;
      continue;
    }
    if (++nodes > opt.node_budget) throw budget_exceeded("lattice enumeration exceeded node budget of " + std::to_string(opt.node_budget));
    const double t = static_cast<double>(z[level]) - mid[level];
    rem[level] = rem[level + 1] - qd[level] * t * t;
    if (rem[level] < 0) {
      ++z[level];
      continue;
    }
    if (level == 0) {
      for (std::size_t i = 0; i < n; ++i) {
        long long s = 0;
        for (std::size_t j = 0; j < n; ++j) s += u(i, j) * z[j];
        out[i] = s;
      }
      visit(out);
      ++z[0];
      continue;
    }
    --level;
    ok = start_level(level);
  }
  return nodes;
}

}  // namespace aperiodica
