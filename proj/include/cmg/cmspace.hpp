#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "cmg/algebra/eigen_bridge.hpp"
#include "cmg/algebra/matrix.hpp"

namespace cmg {

/// Raw point (X, Y; v, w) of the ambient space: X, Y are n x n, v is n x r,
/// w is r x n.
template <Scalar F>
struct Quadruple {
  std::size_t n = 0;
  std::size_t r = 1;
  Matrix<F> X, Y, v, w;

  Quadruple() = default;
  Quadruple(Matrix<F> x, Matrix<F> y, Matrix<F> vv, Matrix<F> ww)
      : n(x.rows()), r(vv.cols()), X(std::move(x)), Y(std::move(y)), v(std::move(vv)), w(std::move(ww)) {
    validate();
  }
  /// The base point of rank r (n = 0).
  static Quadruple base(std::size_t r) {
    Quadruple q;
    q.n = 0;
    q.r = r;
    q.X = Matrix<F>(0, 0);
    q.Y = Matrix<F>(0, 0);
    q.v = Matrix<F>(0, r);
    q.w = Matrix<F>(r, 0);
    return q;
  }

  void validate() const {
    if (X.rows() != n || X.cols() != n || Y.rows() != n || Y.cols() != n || v.rows() != n || v.cols() != r ||
        w.rows() != r || w.cols() != n)
      throw Error(ErrorKind::ShapeMismatch, "quadruple shapes");
  }

  friend bool operator==(const Quadruple& a, const Quadruple& b) {
    return a.n == b.n && a.r == b.r && a.X == b.X && a.Y == b.Y && a.v == b.v && a.w == b.w;
  }
};

/// Canonical chart coordinates of a point with diagonal Y: positions lambda,
/// diagonal entries alpha of X, rows v_i (n x r) and columns w_i (r x n).
template <Scalar F>
struct CMPoint {
  std::size_t n = 0;
  std::size_t r = 1;
  std::vector<F> lambda;
  std::vector<F> alpha;
  Matrix<F> vrow;  // n x r
  Matrix<F> wcol;  // r x n

  static CMPoint base(std::size_t r) {
    CMPoint p;
    p.r = r;
    p.vrow = Matrix<F>(0, r);
    p.wcol = Matrix<F>(r, 0);
    return p;
  }

  Matrix<F> v(std::size_t i) const { return vrow.row(i); }
  Matrix<F> w(std::size_t i) const { return wcol.col(i); }

  friend bool operator==(const CMPoint& a, const CMPoint& b) {
    if (a.n != b.n || a.r != b.r) return false;
    for (std::size_t i = 0; i < a.n; ++i)
      if (!scalar_equal(a.lambda[i], b.lambda[i]) || !scalar_equal(a.alpha[i], b.alpha[i])) return false;
    return a.vrow == b.vrow && a.wcol == b.wcol;
  }
};

template <Scalar F>
Matrix<F> commutator(const Matrix<F>& a, const Matrix<F>& b) {
  return a * b - b * a;
}

/// [X, Y] + vw + I; zero exactly on the moment fiber over -I.
template <Scalar F>
Matrix<F> moment_residual(const Quadruple<F>& q) {
  return commutator(q.X, q.Y) + q.v * q.w + identity<F>(q.n);
}

template <Scalar F>
bool on_fiber(const Quadruple<F>& q) {
  const Matrix<F> res = moment_residual(q);
  if constexpr (ScalarTraits<F>::exact) {
    return res.is_zero();
  } else {
    // relative to |X||Y| + |Y||X| + |v||w|, the size of the cancelling products
    auto mag = [](const Matrix<F>& m) { return m.map([](const F& e) { return F(std::abs(e)); }); };
    const Matrix<F> scale = mag(q.X) * mag(q.Y) + mag(q.Y) * mag(q.X) + mag(q.v) * mag(q.w);
    for (std::size_t i = 0; i < q.n; ++i)
      for (std::size_t j = 0; j < q.n; ++j)
        if (std::abs(res(i, j)) > numeric_tolerance() * std::max(1.0, std::abs(scale(i, j)))) return false;
    return true;
  }
}

template <Scalar F>
Quadruple<F> gl_conjugate(const Matrix<F>& g, const Quadruple<F>& q) {
  if (g.rows() != q.n || g.cols() != q.n) throw Error(ErrorKind::ShapeMismatch, "conjugating matrix");
  const Matrix<F> gi = inverse(g);
  return Quadruple<F>(g * q.X * gi, g * q.Y * gi, g * q.v, q.w * gi);
}

template <Scalar F>
void check_distinct(const std::vector<F>& xs, ErrorKind kind, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      if (scalar_equal(xs[i], xs[j])) throw Error(kind, what);
}

/// Quadruple with Y = diag(lambda), X_ii = alpha_i, X_ij = v_i w_j / (lambda_i - lambda_j).
template <Scalar F>
Quadruple<F> from_cd_coords(const CMPoint<F>& p) {
  check_distinct(p.lambda, ErrorKind::RepeatedEigenvalues, "positions must be distinct");
  Matrix<F> X(p.n, p.n), Y(p.n, p.n);
  const Matrix<F> vw = p.vrow * p.wcol;
  for (std::size_t i = 0; i < p.n; ++i) {
    Y(i, i) = p.lambda[i];
    for (std::size_t j = 0; j < p.n; ++j) X(i, j) = i == j ? p.alpha[i] : vw(i, j) / (p.lambda[i] - p.lambda[j]);
  }
  Quadruple<F> q(X, Y, p.vrow, p.wcol);
  if (p.n == 0) q = Quadruple<F>::base(p.r);
  return q;
}

/// Chart where X = diag(x): Y_ii = alpha_i, Y_ij = -v_i w_j / (x_i - x_j).
template <Scalar F>
Quadruple<F> from_cprime_coords(const std::vector<F>& x, const std::vector<F>& alpha, const Matrix<F>& vrow,
                                const Matrix<F>& wcol) {
  check_distinct(x, ErrorKind::RepeatedPositions, "positions must be distinct");
  const std::size_t n = x.size();
  if (alpha.size() != n || vrow.rows() != n || wcol.cols() != n) throw Error(ErrorKind::ShapeMismatch, "chart data");
  Matrix<F> X(n, n), Y(n, n);
  const Matrix<F> vw = vrow * wcol;
  for (std::size_t i = 0; i < n; ++i) {
    X(i, i) = x[i];
    for (std::size_t j = 0; j < n; ++j) Y(i, j) = i == j ? alpha[i] : -vw(i, j) / (x[i] - x[j]);
  }
  if (n == 0) return Quadruple<F>::base(vrow.cols());
  return Quadruple<F>(X, Y, vrow, wcol);
}

namespace detail {

/// Fixes the torus gauge (first nonzero entry of v_i is 1) and sorts by lambda.
template <Scalar F>
CMPoint<F> gauge_fix(std::size_t r, std::vector<F> lambda, std::vector<F> alpha, const Matrix<F>& v,
                     const Matrix<F>& w) {
  const std::size_t n = lambda.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lex_less(lambda[a], lambda[b]); });
  CMPoint<F> p;
  p.n = n;
  p.r = r;
  p.vrow = Matrix<F>(n, r);
  p.wcol = Matrix<F>(r, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    p.lambda.push_back(lambda[i]);
    p.alpha.push_back(alpha[i]);
    std::size_t piv = 0;
    if constexpr (ScalarTraits<F>::exact) {
      while (piv < r && cmg::is_zero(v(i, piv))) ++piv;
    } else {
      // numeric: first entry that is clearly nonzero relative to the row
      double mx = 0;
      for (std::size_t a = 0; a < r; ++a) mx = std::max(mx, std::abs(to_complex(v(i, a))));
      while (piv < r && std::abs(to_complex(v(i, piv))) <= 1e-6 * mx) ++piv;
    }
    if (piv == r) throw Error(ErrorKind::NotOnFiber, "zero row v_i");
    const F s = v(i, piv);
    for (std::size_t a = 0; a < r; ++a) {
      p.vrow(k, a) = v(i, a) / s;
      p.wcol(a, k) = w(a, i) * s;
    }
    if constexpr (!ScalarTraits<F>::exact) p.vrow(k, piv) = from_int<F>(1);
  }
  return p;
}

}  // namespace detail

/// Gauge-fixed chart coordinates. Exact mode requires diagonal Y; numeric mode
/// diagonalizes Y first.
template <Scalar F>
CMPoint<F> canonicalize(const Quadruple<F>& q) {
  q.validate();
  if (q.n == 0) return CMPoint<F>::base(q.r);
  Quadruple<F> d = q;
  bool diagonal = true;
  for (std::size_t i = 0; i < q.n; ++i)
    for (std::size_t j = 0; j < q.n; ++j)
      if (i != j && !cmg::is_zero(q.Y(i, j))) diagonal = false;
  if (!diagonal) {
    if constexpr (ScalarTraits<F>::exact) {
      throw Error(ErrorKind::NonDiagonalExact, "exact canonicalization needs diagonal Y");
    } else {
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(to_eigen(q.Y));
      const Matrix<F> s = from_eigen(es.eigenvectors());
      d = gl_conjugate(inverse(s), q);
      for (std::size_t i = 0; i < q.n; ++i)
        for (std::size_t j = 0; j < q.n; ++j)
          if (i != j) d.Y(i, j) = F{};
    }
  }
  std::vector<F> lambda(q.n), alpha(q.n);
  for (std::size_t i = 0; i < q.n; ++i) {
    lambda[i] = d.Y(i, i);
    alpha[i] = d.X(i, i);
  }
  check_distinct(lambda, ErrorKind::RepeatedEigenvalues, "Y has repeated eigenvalues");
  if (!on_fiber(d)) throw Error(ErrorKind::NotOnFiber, "point is not on the moment fiber");
  return detail::gauge_fix(q.r, lambda, alpha, d.v, d.w);
}

template <Scalar F>
CMPoint<F> canonicalize(const CMPoint<F>& p) {
  return detail::gauge_fix(p.r, p.lambda, p.alpha, p.vrow, p.wcol);
}

/// (X, Y; v, w) -> (-Y^t, -X^t; -w^t, -v^t).
template <Scalar F>
Quadruple<F> bisp_involution(const Quadruple<F>& q) {
  if (q.n == 0) return Quadruple<F>::base(q.r);
  return Quadruple<F>(-q.Y.transpose(), -q.X.transpose(), -q.w.transpose(), -q.v.transpose());
}

/// Rank r -> r + 1: zero column on v, zero row on w.
template <Scalar F>
Quadruple<F> embed_rank(const Quadruple<F>& q) {
  Matrix<F> v(q.n, q.r + 1), w(q.r + 1, q.n);
  for (std::size_t i = 0; i < q.n; ++i)
    for (std::size_t a = 0; a < q.r; ++a) {
      v(i, a) = q.v(i, a);
      w(a, i) = q.w(a, i);
    }
  if (q.n == 0) return Quadruple<F>::base(q.r + 1);
  return Quadruple<F>(q.X, q.Y, v, w);
}

template <Scalar F>
CMPoint<F> embed_rank(const CMPoint<F>& p) {
  return canonicalize(embed_rank(from_cd_coords(p)));
}

template <Scalar To, Scalar From>
Matrix<To> convert(const Matrix<From>& m) {
  return m.map([](const From& a) -> To {
    if constexpr (std::is_same_v<To, From>) {
      return a;
    } else {
      return to_complex(a);
    }
  });
}

template <Scalar To, Scalar From>
Quadruple<To> convert(const Quadruple<From>& q) {
  if (q.n == 0) return Quadruple<To>::base(q.r);
  return Quadruple<To>(convert<To>(q.X), convert<To>(q.Y), convert<To>(q.v), convert<To>(q.w));
}

template <Scalar To, Scalar From>
CMPoint<To> convert(const CMPoint<From>& p) {
  CMPoint<To> o;
  o.n = p.n;
  o.r = p.r;
  for (const auto& a : p.lambda) o.lambda.push_back(to_complex(a));
  for (const auto& a : p.alpha) o.alpha.push_back(to_complex(a));
  o.vrow = convert<To>(p.vrow);
  o.wcol = convert<To>(p.wcol);
  return o;
}

}  // namespace cmg
