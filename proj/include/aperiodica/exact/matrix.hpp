#pragma once

// Small dense matrices over an arbitrary scalar type: exact fields
// (Rational, GoldenRational), integers (BigInt) and double.

#include "aperiodica/exact/golden.hpp"
#include "aperiodica/exact/number.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace aperiodica {

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw std::invalid_argument("Matrix: data size mismatch");
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    if (rows.empty()) return Matrix();
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) throw std::invalid_argument("Matrix: ragged rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const { return {data_.begin() + static_cast<long>(i * cols_), data_.begin() + static_cast<long>((i + 1) * cols_)}; }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  template <class F>
  auto map(F&& f) const {
    using U = std::decay_t<decltype(f(std::declval<const T&>()))>;
    Matrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = f((*this)(i, j));
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix: shape mismatch in product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a(i, k) == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    if (a.cols_ != v.size()) throw std::invalid_argument("Matrix: shape mismatch in matrix-vector product");
    std::vector<T> out(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {

template <class T>
bool negligible(const T& v) {
  if constexpr (std::is_floating_point_v<T>) return std::fabs(v) < 1e-300;
  else return v == T(0);
}

/// Pivot choice: largest magnitude for floats, first nonzero for exact types.
template <class T>
std::size_t pick_pivot(const Matrix<T>& m, std::size_t col, std::size_t from) {
  std::size_t best = m.rows();
  if constexpr (std::is_floating_point_v<T>) {
    T mag = 0;
    for (std::size_t r = from; r < m.rows(); ++r)
      if (std::fabs(m(r, col)) > mag) {
        mag = std::fabs(m(r, col));
        best = r;
      }
    if (best < m.rows() && mag < 1e-13) best = m.rows();
  } else {
    for (std::size_t r = from; r < m.rows(); ++r)
      if (m(r, col) != T(0)) return r;
  }
  return best;
}

template <class T>
void swap_rows(Matrix<T>& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}

}  // namespace detail

/// Determinant over a field by elimination.
template <class T>
T determinant(Matrix<T> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = m.rows();
  T det = T(1);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = detail::pick_pivot(m, c, c);
    if (p == n) return T(0);
    if (p != c) {
      detail::swap_rows(m, p, c);
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c) == T(0)) continue;
      const T f = m(r, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(r, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Fraction-free determinant for integer matrices.
inline BigInt determinant_bareiss(Matrix<BigInt> m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && m(p, k) == 0) ++p;
      if (p == n) return 0;
      detail::swap_rows(m, p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = a.rows();
  Matrix<T> m = a;
  Matrix<T> inv = Matrix<T>::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = detail::pick_pivot(m, c, c);
    if (p == n) throw std::domain_error("inverse: singular matrix");
    detail::swap_rows(m, p, c);
    detail::swap_rows(inv, p, c);
    const T piv = m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) /= piv;
      inv(c, j) /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m(r, c) == T(0)) continue;
      const T f = m(r, c);
      for (std::size_t j = 0; j < n; ++j) {
        m(r, j) -= f * m(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

/// Rank over a field.
template <class T>
std::size_t matrix_rank(Matrix<T> m) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    const std::size_t p = detail::pick_pivot(m, c, r);
    if (p == m.rows()) continue;
    detail::swap_rows(m, p, r);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (m(i, c) == T(0)) continue;
      const T f = m(i, c) / m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    ++r;
  }
  return r;
}

/// A Z-basis of {z in Z^n : A z = 0}, returned as the columns of an n x k matrix.
/// Works by unimodular column operations on [A ; I].
inline Matrix<BigInt> integer_kernel(const Matrix<BigInt>& a) {
  const std::size_t m = a.rows(), n = a.cols();
  // work on rows of the transpose: row j = (A e_j | e_j)
  std::vector<std::vector<BigInt>> rows(n, std::vector<BigInt>(m + n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) rows[j][i] = a(i, j);
    rows[j][m + j] = 1;
  }
  std::size_t lead = 0;
  for (std::size_t c = 0; c < m && lead < n; ++c) {
    // Euclid on column c among rows lead..n-1
    while (true) {
      std::size_t best = n;
      for (std::size_t r = lead; r < n; ++r)
        if (rows[r][c] != 0 && (best == n || abs_big(rows[r][c]) < abs_big(rows[best][c]))) best = r;
      if (best == n) break;
      std::swap(rows[lead], rows[best]);
      bool done = true;
      for (std::size_t r = lead + 1; r < n; ++r) {
        if (rows[r][c] == 0) continue;
        const BigInt q = rows[r][c] / rows[lead][c];
        for (std::size_t k = 0; k < m + n; ++k) rows[r][k] -= q * rows[lead][k];
        if (rows[r][c] != 0) done = false;
      }
      if (done) {
        ++lead;
        break;
      }
    }
  }
  std::vector<std::vector<BigInt>> kernel;
  for (std::size_t r = 0; r < n; ++r) {
    bool zero = true;
    for (std::size_t i = 0; i < m && zero; ++i) zero = rows[r][i] == 0;
    if (zero) kernel.emplace_back(rows[r].begin() + static_cast<long>(m), rows[r].end());
  }
  Matrix<BigInt> out(n, kernel.size());
  for (std::size_t k = 0; k < kernel.size(); ++k)
    for (std::size_t j = 0; j < n; ++j) out(j, k) = kernel[k][j];
  return out;
}

/// Splits a matrix over Q(sqrt 5) into its rational coordinates: row i of the
/// input becomes rows 2i (the a-parts) and 2i+1 (the b-parts).
inline Matrix<Rational> split_golden(const Matrix<GoldenRational>& g) {
  Matrix<Rational> out(2 * g.rows(), g.cols());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      out(2 * i, j) = g(i, j).a();
      out(2 * i + 1, j) = g(i, j).b();
    }
  return out;
}

/// Scales each row by the lcm of its denominators, giving an integer matrix with the same kernel.
inline Matrix<BigInt> clear_denominators(const Matrix<Rational>& q) {
  Matrix<BigInt> out(q.rows(), q.cols());
  for (std::size_t i = 0; i < q.rows(); ++i) {
    BigInt l = 1;
    for (std::size_t j = 0; j < q.cols(); ++j) {
      const BigInt d = denominator(q(i, j));
      l = l / gcd_big(l, d) * d;
    }
    for (std::size_t j = 0; j < q.cols(); ++j) out(i, j) = numerator(q(i, j) * Rational(l));
  }
  return out;
}

inline Matrix<double> to_double_matrix(const Matrix<GoldenRational>& g) {
  return g.map([](const GoldenRational& x) { return x.to_double(); });
}

inline Matrix<double> to_double_matrix(const Matrix<Rational>& g) {
  return g.map([](const Rational& x) { return to_double(x); });
}

inline Matrix<double> to_double_matrix(const Matrix<BigInt>& g) {
  return g.map([](const BigInt& x) { return to_double(x); });
}

}  // namespace aperiodica
