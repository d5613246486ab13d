#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "cmg/algebra/matrix.hpp"

namespace cmg {

/// Generalized binomial coefficient C(k, j) for integer k (possibly negative).
inline long long gen_binomial(long long k, long long j) {
  long long c = 1;
  for (long long i = 1; i <= j; ++i) c = c * (k - i + 1) / i;
  return c;
}

/// Matrix pseudo-differential operator sum_k a_k(x) d^k, coefficients to the
/// left of the powers of d. Orders below -depth are never stored.
template <Scalar F>
class MatPDO {
 public:
  using Coef = Matrix<RatFun<F>>;

  MatPDO() = default;
  MatPDO(std::size_t rows, std::size_t cols, int depth) : rows_(rows), cols_(cols), depth_(depth) {
    if (depth < 1) throw Error(ErrorKind::InvalidArgument, "truncation depth must be positive");
  }

  static MatPDO identity(std::size_t n, int depth) {
    MatPDO p(n, n, depth);
    p.set(0, Coef::identity(n, RatFun<F>(from_int<F>(1))));
    return p;
  }
  /// A constant-coefficient monomial c * d^k (scalar operator, 1x1).
  static MatPDO monomial(const RatFun<F>& c, int k, int depth) {
    MatPDO p(1, 1, depth);
    Coef m(1, 1);
    m(0, 0) = c;
    p.set(k, m);
    return p;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int depth() const { return depth_; }
  const std::map<int, Coef>& terms() const { return terms_; }

  bool empty() const { return terms_.empty(); }
  int max_order() const { return terms_.empty() ? -depth_ - 1 : terms_.rbegin()->first; }
  int min_order() const { return terms_.empty() ? 0 : terms_.begin()->first; }

  Coef coeff(int k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Coef(rows_, cols_) : it->second;
  }

  void set(int k, const Coef& m) {
    if (m.rows() != rows_ || m.cols() != cols_) throw Error(ErrorKind::ShapeMismatch, "operator coefficient shape");
    if (k < -depth_) return;
    if (m.is_zero()) {
      terms_.erase(k);
    } else {
      terms_[k] = m;
    }
  }
  void add(int k, const Coef& m) {
    if (k < -depth_) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      set(k, m);
    } else {
      it->second += m;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// Same operator with fewer stored orders.
  MatPDO truncated(int depth) const {
    MatPDO p(rows_, cols_, depth);
    for (const auto& [k, m] : terms_) p.set(k, m);
    return p;
  }

  MatPDO transpose() const {
    MatPDO t(cols_, rows_, depth_);
    for (const auto& [k, m] : terms_) t.set(k, m.transpose());
    return t;
  }

  /// Part of order >= 0.
  MatPDO differential_part() const {
    MatPDO p(rows_, cols_, depth_);
    for (const auto& [k, m] : terms_)
      if (k >= 0) p.set(k, m);
    return p;
  }

  bool has_polynomial_coefficients() const {
    for (const auto& [k, m] : terms_)
      for (const auto& e : m.data())
        if (!e.is_polynomial()) return false;
    return true;
  }

  MatPDO operator-() const {
    MatPDO p = *this;
    for (auto& [k, m] : p.terms_) m = -m;
    return p;
  }
  friend MatPDO operator+(const MatPDO& a, const MatPDO& b) {
    a.check_same(b);
    MatPDO s(a.rows_, a.cols_, std::min(a.depth_, b.depth_));
    for (const auto& [k, m] : a.terms_) s.add(k, m);
    for (const auto& [k, m] : b.terms_) s.add(k, m);
    return s;
  }
  friend MatPDO operator-(const MatPDO& a, const MatPDO& b) { return a + (-b); }

  /// Equality of all stored orders (down to the smaller depth).
  friend bool operator==(const MatPDO& a, const MatPDO& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    const MatPDO d = (a - b);
    return d.terms_.empty();
  }

  std::string str(char var = 'x') const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!s.empty()) s += " + ";
      s += matrix_str<RatFun<F>>(it->second, [var](const RatFun<F>& f) { return f.str(var); });
      if (it->first != 0) s += " d^" + std::to_string(it->first);
    }
    return s;
  }

 private:
  void check_same(const MatPDO& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorKind::ShapeMismatch, "operator sum");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  int depth_ = 8;
  std::map<int, Coef> terms_;
};

template <Scalar F>
Matrix<RatFun<F>> derivative(const Matrix<RatFun<F>>& m) {
  return m.map([](const RatFun<F>& f) { return f.derivative(); });
}

/// Composition P * Q using d^k a = sum_j C(k,j) a^(j) d^(k-j); exact for all
/// orders >= -depth.
template <Scalar F>
MatPDO<F> pdo_mul(const MatPDO<F>& p, const MatPDO<F>& q, int depth) {
  if (p.cols() != q.rows()) throw Error(ErrorKind::ShapeMismatch, "operator composition");
  MatPDO<F> out(p.rows(), q.cols(), depth);
  for (const auto& [l, b] : q.terms()) {
    std::vector<Matrix<RatFun<F>>> ders{b};  // b, b', b'', ...
    for (const auto& [k, a] : p.terms()) {
      // j ranges over [0, k] for k >= 0; for k < 0 until the order drops below -depth
      const int jmax = k >= 0 ? k : k + l + depth;
      for (int j = 0; j <= jmax; ++j) {
        const int ord = k - j + l;
        if (ord < -depth) break;
        while (static_cast<int>(ders.size()) <= j) ders.push_back(derivative(ders.back()));
        if (ders[j].is_zero()) break;
        const long long c = gen_binomial(k, j);
        out.add(ord, (a * ders[j]) * RatFun<F>(from_int<F>(static_cast<long>(c))));
      }
    }
  }
  return out;
}

/// Opposite-ring matrix product P * Q := (Q^t P^t)^t.
template <Scalar F>
MatPDO<F> pdo_star_mul(const MatPDO<F>& p, const MatPDO<F>& q) {
  if (p.cols() != q.rows()) throw Error(ErrorKind::ShapeMismatch, "star product");
  return pdo_mul(q.transpose(), p.transpose(), std::min(p.depth(), q.depth())).transpose();
}

/// Entrywise anti-automorphism exchanging x and d: c x^a d^k -> c x^k d^a.
/// Matrix shape is preserved (no transpose).
template <Scalar F>
MatPDO<F> pdo_b(const MatPDO<F>& p) {
  if (!p.has_polynomial_coefficients())
    throw Error(ErrorKind::NonPolynomialCoefficient, "b requires polynomial coefficients");
  MatPDO<F> out(p.rows(), p.cols(), p.depth());
  for (const auto& [k, m] : p.terms()) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        const Poly<F>& c = m(i, j).num();
        for (int a = 0; a <= c.degree(); ++a) {
          if (cmg::is_zero(c.coeff(a))) continue;
          Matrix<RatFun<F>> e(m.rows(), m.cols());
          // x^k with k < 0 becomes a rational coefficient
          e(i, j) = k >= 0 ? RatFun<F>(Poly<F>::monomial(k, c.coeff(a)))
                           : RatFun<F>(Poly<F>(c.coeff(a)), Poly<F>::monomial(-k));
          out.add(a, e);
        }
      }
  }
  return out;
}

/// b extended to rational coefficients: b(f(x) d^a) = x^a f(d), with f(d)
/// expanded at infinity and truncated below -depth.
template <Scalar F>
MatPDO<F> pdo_b_expanded(const MatPDO<F>& p, int depth) {
  MatPDO<F> out(p.rows(), p.cols(), depth);
  for (const auto& [a, m] : p.terms()) {
    if (a < 0) throw Error(ErrorKind::NotDifferential, "expanded b needs a differential operator");
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        if (m(i, j).is_zero()) continue;
        const int top = m(i, j).num().degree() - m(i, j).den().degree();
        if (top < -depth) continue;
        for (const auto& [k, c] : expand_at_infinity(m(i, j), -depth, top)) {
          if (cmg::is_zero(c)) continue;
          Matrix<RatFun<F>> e(m.rows(), m.cols());
          e(i, j) = RatFun<F>(Poly<F>::monomial(static_cast<std::size_t>(a), c));
          out.add(k, e);
        }
      }
  }
  return out;
}

/// Inverse of I + N (N of strictly negative order) by the Neumann series.
template <Scalar F>
MatPDO<F> pdo_invert(const MatPDO<F>& p, int depth) {
  if (p.rows() != p.cols()) throw Error(ErrorKind::ShapeMismatch, "inverse of non-square operator");
  const std::size_t n = p.rows();
  const auto one = Matrix<RatFun<F>>::identity(n, RatFun<F>(from_int<F>(1)));
  if (p.max_order() > 0 || !(p.coeff(0) == one))
    throw Error(ErrorKind::NotUnitriangular, "operator is not I + (negative orders)");
  MatPDO<F> neg_n(n, n, depth);
  for (const auto& [k, m] : p.terms())
    if (k < 0) neg_n.set(k, -m);
  MatPDO<F> result = MatPDO<F>::identity(n, depth);
  MatPDO<F> power = result;
  for (int k = 1; k <= depth && !neg_n.empty(); ++k) {
    power = pdo_mul(power, neg_n, depth);
    if (power.empty()) break;
    result = result + power;
  }
  return result;
}

/// True iff the orders -1 ... -depth all vanish.
template <Scalar F>
bool is_differential(const MatPDO<F>& p, int depth) {
  for (const auto& [k, m] : p.terms())
    if (k < 0 && k >= -depth && !m.is_zero()) return false;
  return true;
}

/// Left action of a differential operator on a matrix of functions:
/// (D.phi) = sum_k D_k phi^(k).
template <Scalar F>
Matrix<RatFun<F>> pdo_apply(const MatPDO<F>& d, const Matrix<RatFun<F>>& phi) {
  if (d.cols() != phi.rows()) throw Error(ErrorKind::ShapeMismatch, "operator application");
  Matrix<RatFun<F>> out(d.rows(), phi.cols());
  Matrix<RatFun<F>> der = phi;
  int at = 0;
  for (const auto& [k, m] : d.terms()) {
    if (k < 0) throw Error(ErrorKind::NotDifferential, "cannot apply a pseudo-differential operator");
    while (at < k) {
      der = derivative(der);
      ++at;
    }
    out += m * der;
  }
  return out;
}

/// Right opposite action phi * D := (D^t . phi^t)^t.
template <Scalar F>
Matrix<RatFun<F>> star_act(const Matrix<RatFun<F>>& phi, const MatPDO<F>& d) {
  return pdo_apply(d.transpose(), phi.transpose()).transpose();
}

/// Scalar polynomial in d with constant coefficients, as an n x n operator.
template <Scalar F>
MatPDO<F> poly_in_d(const Poly<F>& g, std::size_t n, int depth) {
  MatPDO<F> out(n, n, depth);
  for (int k = 0; k <= g.degree(); ++k)
    out.set(k, Matrix<RatFun<F>>::identity(n, RatFun<F>(g.coeff(static_cast<std::size_t>(k)))));
  return out;
}

/// Multiplication operator by a matrix of functions (order 0).
template <Scalar F>
MatPDO<F> multiplication_operator(const Matrix<RatFun<F>>& m, int depth) {
  MatPDO<F> out(m.rows(), m.cols(), depth);
  out.set(0, m);
  return out;
}

}  // namespace cmg
