#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pingpong/scalar.hpp"

namespace pingpong {

template <class T>
using Vec = std::vector<T>;

/// Dense row-major square or rectangular matrix over one of the supported
/// fields. The field spec travels with the matrix so that constants (0, 1)
/// can be produced without a side channel.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const FieldSpec& field)
      : rows_(rows), cols_(cols), field_(field), data_(rows * cols, scalar_zero<T>(field)) {}

  Matrix(std::initializer_list<std::initializer_list<T>> init, const FieldSpec& field) : field_(field) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw DomainError("ragged matrix initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n, const FieldSpec& field) {
    Matrix m(n, n, field);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = scalar_one<T>(field);
    return m;
  }

  static Matrix diagonal(const Vec<T>& d, const FieldSpec& field) {
    Matrix m(d.size(), d.size(), field);
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const FieldSpec& field() const { return field_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vec<T> row_vec(std::size_t i) const { return Vec<T>(row(i).begin(), row(i).end()); }
  Vec<T> col_vec(std::size_t j) const {
    Vec<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  const Vec<T>& data() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix adjoint() const {
    Matrix t(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = ScalarTraits<T>::conj((*this)(i, j));
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DomainError("matrix product shape mismatch");
    Matrix c(a.rows_, b.cols_, a.field_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (is_exact_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix difference shape mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = a.data_[i] - b.data_[i];
    return c;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DomainError("matrix sum shape mismatch");
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = a.data_[i] + b.data_[i];
    return c;
  }

  Matrix scaled(const T& s) const {
    Matrix c = *this;
    for (auto& x : c.data_) x = x * s;
    return c;
  }

  /// Largest absolute value of an entry.
  double max_abs() const {
    double m = 0.0;
    for (const T& x : data_) m = std::max(m, ScalarTraits<T>::abs(x));
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  FieldSpec field_{};
  Vec<T> data_;
};

template <class T>
Vec<T> apply(const Matrix<T>& g, std::span<const T> v) {
  if (g.cols() != v.size()) throw DomainError("matrix-vector shape mismatch");
  Vec<T> out(g.rows(), scalar_zero<T>(g.field()));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) out[i] += g(i, j) * v[j];
  return out;
}

/// Row vector times matrix: the linear form x -> f(g x).
template <class T>
Vec<T> pull_back(std::span<const T> form, const Matrix<T>& g) {
  if (g.rows() != form.size()) throw DomainError("form-matrix shape mismatch");
  Vec<T> out(g.cols(), scalar_zero<T>(g.field()));
  for (std::size_t j = 0; j < g.cols(); ++j)
    for (std::size_t i = 0; i < g.rows(); ++i) out[j] += form[i] * g(i, j);
  return out;
}

namespace detail {

// Index of the entry of largest absolute value in column `col`, rows >= from.
// Over Q_p this is the entry of least valuation; ties go to the first row.
template <class T>
std::size_t pivot_row(const Matrix<T>& m, std::size_t col, std::size_t from) {
  std::size_t best = from;
  double best_abs = -1.0;
  for (std::size_t i = from; i < m.rows(); ++i) {
    const double a = ScalarTraits<T>::abs(m(i, col));
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  return best;
}

}  // namespace detail

template <class T>
T determinant(Matrix<T> m) {
  if (!m.square()) throw DomainError("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  T det = scalar_one<T>(m.field());
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = detail::pivot_row(m, c, c);
    if (ScalarTraits<T>::is_zero(m(p, c))) return scalar_zero<T>(m.field());
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det = det * m(c, c);
    const T inv = scalar_one<T>(m.field()) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      const T factor = m(i, c) * inv;
      if (is_exact_zero(factor)) continue;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= factor * m(c, j);
    }
  }
  return det;
}

/// Gauss-Jordan inverse with partial pivoting by absolute value.
template <class T>
Matrix<T> inverse(const Matrix<T>& g) {
  if (!g.square()) throw DomainError("inverse of a non-square matrix");
  const std::size_t n = g.rows();
  Matrix<T> m = g;
  Matrix<T> inv = Matrix<T>::identity(n, g.field());
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t p = detail::pivot_row(m, c, c);
    if (ScalarTraits<T>::is_zero(m(p, c))) throw DomainError("matrix is singular");
    if (p != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(m(p, j), m(c, j));
        std::swap(inv(p, j), inv(c, j));
      }
    const T pinv = scalar_one<T>(g.field()) / m(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      m(c, j) = m(c, j) * pinv;
      inv(c, j) = inv(c, j) * pinv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const T factor = m(i, c);
      if (is_exact_zero(factor)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) -= factor * m(c, j);
        inv(i, j) -= factor * inv(c, j);
      }
    }
  }
  return inv;
}

/// Inverse of an element of SL_n. A 2x2 matrix whose determinant is 1 to
/// the tracked precision is inverted by its adjugate, which involves no
/// cancellation; otherwise this is inverse(g).
template <class T>
Matrix<T> sl_inverse(const Matrix<T>& g) {
  if (!g.square() || g.rows() != 2) return inverse(g);
  const T det = g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0);
  const T diff = det - scalar_one<T>(g.field());
  bool unimodular;
  if constexpr (is_archimedean_v<T>) {
    unimodular = std::abs(diff) <= tolerance();
  } else {
    unimodular = diff.is_zero();
  }
  if (!unimodular) return inverse(g);
  Matrix<T> inv(2, 2, g.field());
  inv(0, 0) = g(1, 1);
  inv(0, 1) = -g(0, 1);
  inv(1, 0) = -g(1, 0);
  inv(1, 1) = g(0, 0);
  return inv;
}

}  // namespace pingpong
