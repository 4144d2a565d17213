#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "kcl/error.hpp"
#include "kcl/rational.hpp"

namespace kcl {

/// Dense row-major matrix over an exact scalar type.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  /// Matrix whose columns are the given vectors (each of length `rows`).
  static Matrix from_columns(const std::vector<std::vector<T>>& columns, std::size_t rows) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j].at(i);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != T(0)) return false;
    return true;
  }

  template <class U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(i, j) = U((*this)(i, j));
    return out;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw error(errc::length_mismatch, "matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (aik == T(0)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend std::vector<T> operator*(const Matrix& a, const std::vector<T>& v) {
    if (a.cols_ != v.size()) throw error(errc::length_mismatch, "matrix-vector shape mismatch");
    std::vector<T> out(a.rows_, T(0));
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

namespace detail {

// (a*b - c*d) / q, exact by Sylvester's identity. Returns nullopt when an
// int64 intermediate would overflow.
inline std::optional<std::int64_t> bareiss_step(std::int64_t a, std::int64_t b, std::int64_t c,
                                                std::int64_t d, std::int64_t q) {
  __int128 v = static_cast<__int128>(a) * b - static_cast<__int128>(c) * d;
  v /= q;
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    return std::nullopt;
  return static_cast<std::int64_t>(v);
}

inline std::optional<Integer> bareiss_step(const Integer& a, const Integer& b, const Integer& c,
                                           const Integer& d, const Integer& q) {
  return Integer((a * b - c * d) / q);
}

// Fraction-free Gaussian elimination; returns nullopt on int64 overflow.
template <class Int>
std::optional<std::size_t> bareiss_rank(std::vector<std::vector<Int>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  Int prev(1);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t i = rank + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) {
        auto v = bareiss_step(a[rank][col], a[i][j], a[i][col], a[rank][j], prev);
        if (!v) return std::nullopt;
        a[i][j] = std::move(*v);
      }
      a[i][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return rank;
}

}  // namespace detail

/// Exact rank by fraction-free elimination. Rows are cleared of denominators
/// first; int64 arithmetic is tried before falling back to big integers.
inline std::size_t rank(const Matrix<Rational>& m) {
  std::vector<std::vector<Integer>> rows(m.rows(), std::vector<Integer>(m.cols()));
  bool fits = true;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) l = boost::multiprecision::lcm(l, denominator(m(i, j)));
    for (std::size_t j = 0; j < m.cols(); ++j) {
      rows[i][j] = numerator(m(i, j)) * (l / denominator(m(i, j)));
      if (boost::multiprecision::abs(rows[i][j]) > Integer(1) << 30) fits = false;
    }
  }
  if (fits) {
    std::vector<std::vector<std::int64_t>> small(m.rows(), std::vector<std::int64_t>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) small[i][j] = rows[i][j].convert_to<std::int64_t>();
    if (auto r = detail::bareiss_rank(std::move(small))) return *r;
  }
  return *detail::bareiss_rank(std::move(rows));
}

inline std::size_t rank(const Matrix<std::int64_t>& m) {
  std::vector<std::vector<std::int64_t>> rows(m.rows(), std::vector<std::int64_t>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  if (auto r = detail::bareiss_rank(rows)) return *r;
  std::vector<std::vector<Integer>> big(m.rows(), std::vector<Integer>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) big[i][j] = m(i, j);
  return *detail::bareiss_rank(std::move(big));
}

inline std::size_t nullity(const Matrix<Rational>& m) { return m.cols() - rank(m); }

struct EchelonForm {
  Matrix<Rational> reduced;
  std::vector<std::size_t> pivot_columns;
};

/// Reduced row echelon form over the rationals.
inline EchelonForm rref(Matrix<Rational> a) {
  EchelonForm out;
  std::size_t r = 0;
  for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
    std::size_t pivot = r;
    while (pivot < a.rows() && a(pivot, col) == 0) ++pivot;
    if (pivot == a.rows()) continue;
    if (pivot != r)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(pivot, j), a(r, j));
    Rational inv = 1 / a(r, col);
    for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, col) == 0) continue;
      Rational factor = a(i, col);
      for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) -= factor * a(r, j);
    }
    out.pivot_columns.push_back(col);
    ++r;
  }
  out.reduced = std::move(a);
  return out;
}

/// Basis of { v : m v = 0 }.
inline std::vector<std::vector<Rational>> nullspace_basis(const Matrix<Rational>& m) {
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_columns) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(m.cols(), Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivot_columns.size(); ++r) v[e.pivot_columns[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Basis of the column space of m, taken from the pivot columns of m itself.
inline std::vector<std::vector<Rational>> column_space_basis(const Matrix<Rational>& m) {
  auto e = rref(m);
  std::vector<std::vector<Rational>> basis;
  for (auto c : e.pivot_columns) basis.push_back(m.column(c));
  return basis;
}

}  // namespace kcl
