#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "cmg/algebra/ratfun.hpp"

namespace cmg {

template <class T>
T from_unit() {
  if constexpr (Scalar<T>) {
    return from_int<T>(1);
  } else {
    return T(from_int<typename T::scalar_type>(1));
  }
}

/// Dense row-major matrix over a commutative ring T (scalars, polynomials or
/// rational functions). Default-constructed entries are zero.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw Error(ErrorKind::ShapeMismatch, "matrix data size");
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    for (const auto& r : rows) {
      if (r.size() != cols_) throw Error(ErrorKind::ShapeMismatch, "ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n, const T& one) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one;
    return m;
  }
  static Matrix diagonal(const std::vector<T>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T>& data() const { return data_; }

  Matrix row(std::size_t i) const {
    Matrix r(1, cols_);
    for (std::size_t j = 0; j < cols_; ++j) r(0, j) = (*this)(i, j);
    return r;
  }
  Matrix col(std::size_t j) const {
    Matrix c(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) c(i, 0) = (*this)(i, j);
    return c;
  }
  void set_row(std::size_t i, const Matrix& r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r(0, j);
  }
  void set_col(std::size_t j, const Matrix& c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c(i, 0);
  }
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  template <class Fn>
  auto map(Fn&& fn) const {
    using U = std::decay_t<decltype(fn(std::declval<const T&>()))>;
    Matrix<U> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = fn((*this)(i, j));
    return m;
  }

  bool is_zero() const {
    for (const auto& a : data_)
      if (!cmg::is_zero(a)) return false;
    return true;
  }

  T trace() const {
    T acc{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) acc += (*this)(i, i);
    return acc;
  }

  Matrix operator-() const {
    Matrix m = *this;
    for (auto& a : m.data_) a = -a;
    return m;
  }
  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::ShapeMismatch, "matrix product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (cmg::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Matrix operator*(Matrix a, const T& s) {
    for (auto& x : a.data_) x = x * s;
    return a;
  }
  friend Matrix operator*(const T& s, Matrix a) {
    for (auto& x : a.data_) x = s * x;
    return a;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.data_.size(); ++k)
      if (!equal_entry(a.data_[k], b.data_[k])) return false;
    return true;
  }

 private:
  static bool equal_entry(const T& x, const T& y) {
    if constexpr (Scalar<T>) {
      return scalar_equal(x, y);
    } else {
      return x == y;
    }
  }
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::ShapeMismatch, "matrix sum");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
bool is_zero(const Matrix<T>& m) {
  return m.is_zero();
}

template <class T>
std::string matrix_str(const Matrix<T>& m, const std::function<std::string(const T&)>& fmt) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    s += i ? "; " : "";
    for (std::size_t j = 0; j < m.cols(); ++j) s += (j ? ", " : "") + fmt(m(i, j));
  }
  return s + "]";
}

/// Reduced row echelon form over a field; returns pivot columns.
template <class T>
std::vector<std::size_t> rref(Matrix<T>& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m.cols() && row < m.rows(); ++c) {
    std::size_t best = row;
    for (std::size_t i = row + 1; i < m.rows(); ++i)
      if (better_pivot(m(i, c), m(best, c))) best = i;
    if (cmg::is_zero(m(best, c))) continue;
    if (best != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(best, j), m(row, j));
    const T inv = from_unit<T>() / m(row, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(row, j) = m(row, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || cmg::is_zero(m(i, c))) continue;
      const T f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

template <class T>
std::size_t rank(Matrix<T> m) {
  return rref(m).size();
}

/// Basis of {x : m x = 0}, as columns of the returned matrix.
template <class T>
Matrix<T> nullspace(Matrix<T> m) {
  const std::vector<std::size_t> piv = rref(m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_piv[c]) free.push_back(c);
  Matrix<T> basis(m.cols(), free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = from_unit<T>();
    for (std::size_t r = 0; r < piv.size(); ++r) basis(piv[r], k) = -m(r, free[k]);
  }
  return basis;
}

template <class T>
T determinant(Matrix<T> m) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeMismatch, "determinant of non-square matrix");
  T det = from_unit<T>();
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (better_pivot(m(i, c), m(best, c))) best = i;
    if (cmg::is_zero(m(best, c))) return T{};
    if (best != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(best, j), m(c, j));
      det = -det;
    }
    det = det * m(c, c);
    const T inv = from_unit<T>() / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (cmg::is_zero(m(i, c))) continue;
      const T f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  if (!m.is_square()) throw Error(ErrorKind::ShapeMismatch, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix<T> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = from_unit<T>();
  }
  const std::vector<std::size_t> piv = rref(aug);
  if (piv.size() < n || piv[n - 1] != n - 1) throw Error(ErrorKind::SingularMatrix, "matrix is not invertible");
  return aug.block(0, n, n, n);
}

/// Solves a x = b (b may have several columns); throws SingularMatrix when a
/// solution does not exist. Free variables are set to zero.
template <class T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::ShapeMismatch, "solve");
  Matrix<T> aug(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
  }
  const std::vector<std::size_t> piv = rref(aug);
  Matrix<T> x(a.cols(), b.cols());
  for (std::size_t r = 0; r < piv.size(); ++r) {
    if (piv[r] >= a.cols()) throw Error(ErrorKind::SingularMatrix, "inconsistent linear system");
    for (std::size_t j = 0; j < b.cols(); ++j) x(piv[r], j) = aug(r, a.cols() + j);
  }
  return x;
}

/// Leibniz expansion; works over any commutative ring (used for polynomial
/// matrices, where elimination would need division).
template <class T>
T determinant_expand(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  if (n == 0) return from_unit<T>();
  if (n == 1) return m(0, 0);
  T acc{};
  for (std::size_t j = 0; j < n; ++j) {
    if (cmg::is_zero(m(0, j))) continue;
    Matrix<T> minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, kk = 0; k < n; ++k) {
        if (k == j) continue;
        minor(i - 1, kk++) = m(i, k);
      }
    T term = m(0, j) * determinant_expand(minor);
    if (j % 2) acc -= term;
    else acc += term;
  }
  return acc;
}

template <class T>
Matrix<T> adjugate(const Matrix<T>& m) {
  const std::size_t n = m.rows();
  Matrix<T> adj(n, n);
  if (n == 1) {
    adj(0, 0) = from_unit<T>();
    return adj;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Matrix<T> minor(n - 1, n - 1);
      for (std::size_t a = 0, aa = 0; a < n; ++a) {
        if (a == j) continue;
        for (std::size_t b = 0, bb = 0; b < n; ++b) {
          if (b == i) continue;
          minor(aa, bb++) = m(a, b);
        }
        ++aa;
      }
      T c = determinant_expand(minor);
      adj(i, j) = ((i + j) % 2) ? -c : c;
    }
  return adj;
}

template <Scalar F>
Matrix<F> identity(std::size_t n) {
  return Matrix<F>::identity(n, from_int<F>(1));
}

template <Scalar F>
Matrix<F> matrix_power(const Matrix<F>& m, unsigned k) {
  Matrix<F> r = identity<F>(m.rows());
  for (unsigned i = 0; i < k; ++i) r = r * m;
  return r;
}

/// Lifts a scalar matrix to constant polynomial / rational entries.
template <class U, Scalar F>
Matrix<U> lift(const Matrix<F>& m) {
  return m.map([](const F& a) { return U(a); });
}

}  // namespace cmg
