#pragma once

#include <random>
#include <vector>

#include "cmg/loopgroup.hpp"

namespace cmg {

/// Seeded generator for test data: small Gaussian integers in exact mode,
/// small complex numbers in numeric mode.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
  std::mt19937_64& engine() { return eng_; }

  template <Scalar F>
  F scalar(long bound = 3) {
    if constexpr (ScalarTraits<F>::exact) {
      const long re = integer(-bound, bound);
      const long im = integer(0, 3) == 0 ? integer(-bound, bound) : 0;
      return GaussQ(mpq_class(re), mpq_class(im));
    } else {
      const double b = static_cast<double>(bound);
      return Cplx(real(-b, b), real(-b, b) * 0.5);
    }
  }

  template <Scalar F>
  F nonzero_scalar(long bound = 3) {
    while (true) {
      F s = scalar<F>(bound);
      if (!cmg::is_zero(s)) return s;
    }
  }

  template <Scalar F>
  Matrix<F> matrix(std::size_t rows, std::size_t cols, long bound = 3) {
    Matrix<F> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = scalar<F>(bound);
    return m;
  }

 private:
  std::mt19937_64 eng_;
};

/// Random chart point: distinct positions, v_i w_i = -1, gauge fixed.
template <Scalar F>
CMPoint<F> random_point(Rng& rng, std::size_t n, std::size_t r, long bound = 3) {
  std::vector<F> lambda;
  while (lambda.size() < n) {
    F l = rng.scalar<F>(bound + static_cast<long>(n));
    bool fresh = true;
    for (const auto& m : lambda)
      if (scalar_equal(l, m)) fresh = false;
    if (fresh) lambda.push_back(l);
  }
  std::vector<F> alpha;
  Matrix<F> v(n, r), w(r, n);
  for (std::size_t i = 0; i < n; ++i) {
    alpha.push_back(rng.scalar<F>(bound));
    std::size_t piv = 0;
    do {
      for (std::size_t a = 0; a < r; ++a) v(i, a) = rng.scalar<F>(bound);
      piv = 0;
      while (piv < r && cmg::is_zero(v(i, piv))) ++piv;
    } while (piv == r);
    F acc{};
    for (std::size_t a = 0; a < r; ++a) {
      if (a == piv) continue;
      w(a, i) = rng.scalar<F>(bound);
      acc += v(i, a) * w(a, i);
    }
    w(piv, i) = (from_int<F>(-1) - acc) / v(i, piv);
  }
  return detail::gauge_fix(r, lambda, alpha, v, w);
}

/// The same point in a random GL(n) frame, so that Y is not diagonal.
template <Scalar F>
Quadruple<F> random_frame(Rng& rng, const Quadruple<F>& q) {
  if (q.n == 0) return q;
  while (true) {
    Matrix<F> g = rng.matrix<F>(q.n, q.n, 2);
    if (!cmg::is_zero(determinant(g))) return gl_conjugate(g, q);
  }
}

/// Product of elementary matrices I + c z^k E_ij and constant diagonal rescalings,
/// hence unimodular.
template <Scalar F>
PolyMatrix<F> random_unimodular(Rng& rng, std::size_t r, int factors, int max_degree) {
  PolyMatrix<F> m = PolyMatrix<F>::identity(r, Poly<F>(from_int<F>(1)));
  for (int f = 0; f < factors; ++f) {
    PolyMatrix<F> e = PolyMatrix<F>::identity(r, Poly<F>(from_int<F>(1)));
    if (r == 1 || rng.integer(0, 3) == 0) {
      const std::size_t i = static_cast<std::size_t>(rng.integer(0, static_cast<long>(r) - 1));
      e(i, i) = Poly<F>(rng.nonzero_scalar<F>(2));
    } else {
      const std::size_t i = static_cast<std::size_t>(rng.integer(0, static_cast<long>(r) - 1));
      std::size_t j = i;
      while (j == i) j = static_cast<std::size_t>(rng.integer(0, static_cast<long>(r) - 1));
      std::vector<F> c(static_cast<std::size_t>(max_degree + 1));
      for (auto& x : c) x = rng.scalar<F>(2);
      e(i, j) = Poly<F>(c);
    }
    m = m * e;
  }
  return m;
}

template <Scalar F>
Poly<F> random_poly(Rng& rng, int degree, long bound = 3) {
  std::vector<F> c(static_cast<std::size_t>(degree + 1));
  for (auto& x : c) x = rng.scalar<F>(bound);
  return Poly<F>(c);
}

/// Random polynomial loop, invertible at the given points (retries otherwise).
template <Scalar F>
PolyMatrix<F> random_loop_at(Rng& rng, std::size_t r, const std::vector<F>& points, int max_degree) {
  while (true) {
    PolyMatrix<F> g(r, r);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < r; ++j) g(i, j) = random_poly<F>(rng, max_degree, 2);
    bool ok = true;
    for (const F& l : points)
      if (cmg::is_zero(determinant(evaluate(g, l)))) ok = false;
    if (ok) return g;
  }
}

}  // namespace cmg
