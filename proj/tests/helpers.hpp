#pragma once

#include <vector>

#include <gtest/gtest.h>

#include "cmg/opcalc.hpp"
#include "cmg/random.hpp"
#include "cmg/serialize.hpp"

namespace th {

using cmg::GaussQ;
using Q = GaussQ;
using RF = cmg::RatFun<GaussQ>;
using P = cmg::Poly<GaussQ>;
using M = cmg::Matrix<GaussQ>;
using Op = cmg::MatPDO<GaussQ>;

inline Q q(long n, long d = 1) { return GaussQ::rational(n, d); }

/// Polynomial from integer coefficients, lowest degree first.
inline P poly(std::vector<long> c) {
  std::vector<Q> cs;
  for (long v : c) cs.push_back(q(v));
  return P(cs);
}

inline RF rf(std::vector<long> num, std::vector<long> den = {1}) { return RF(poly(num), poly(den)); }
inline RF x_pow(int k) { return k >= 0 ? RF(P::monomial(static_cast<std::size_t>(k))) : RF(P(q(1)), P::monomial(static_cast<std::size_t>(-k))); }

/// 1x1 operator sum c_k d^k.
inline Op op(std::vector<std::pair<int, RF>> terms, int depth = 8) {
  Op p(1, 1, depth);
  for (const auto& [k, c] : terms) {
    cmg::Matrix<RF> m(1, 1);
    m(0, 0) = c;
    p.add(k, m);
  }
  return p;
}

inline cmg::CMPoint<Q> point1(const Q& lambda, const Q& alpha) {
  cmg::CMPoint<Q> p;
  p.n = 1;
  p.r = 1;
  p.lambda = {lambda};
  p.alpha = {alpha};
  p.vrow = M{{q(1)}};
  p.wcol = M{{q(-1)}};
  return p;
}

}  // namespace th
