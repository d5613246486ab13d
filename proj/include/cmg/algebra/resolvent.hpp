#pragma once

#include <vector>

#include "cmg/algebra/matrix.hpp"

namespace cmg {

/// det(zI - A) together with the coefficients of adj(zI - A) = sum_k B_k z^k,
/// by the Faddeev-LeVerrier recursion.
template <Scalar F>
struct Resolvent {
  Poly<F> charpoly;
  std::vector<Matrix<F>> adj;  // adj[k] multiplies z^k, k < n
};

template <Scalar F>
Resolvent<F> resolvent(const Matrix<F>& a) {
  const std::size_t n = a.rows();
  Resolvent<F> res;
  std::vector<F> c(n + 1);
  c[n] = from_int<F>(1);
  res.adj.assign(n, Matrix<F>(n, n));
  Matrix<F> m(n, n);
  const Matrix<F> id = identity<F>(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + id * c[n - k + 1];
    res.adj[n - k] = m;
    c[n - k] = -(a * m).trace() / from_int<F>(static_cast<long>(k));
  }
  res.charpoly = Poly<F>(c);
  return res;
}

/// Matrix of rational functions L * (zI - A)^{-1} * R for constant L, R.
template <Scalar F>
Matrix<RatFun<F>> sandwich_resolvent(const Matrix<F>& l, const Resolvent<F>& res, const Matrix<F>& r) {
  Matrix<RatFun<F>> out(l.rows(), r.cols());
  std::vector<Matrix<F>> parts;
  for (const auto& b : res.adj) parts.push_back(l * b * r);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) {
      std::vector<F> num(parts.size());
      for (std::size_t k = 0; k < parts.size(); ++k) num[k] = parts[k](i, j);
      out(i, j) = RatFun<F>(Poly<F>(num), res.charpoly);
    }
  return out;
}

}  // namespace cmg
