#pragma once

#include <string>
#include <vector>

#include "cmg/opcalc.hpp"
#include "cmg/random.hpp"
#include "cmg/serialize.hpp"
#include "cmg/verify.hpp"

namespace cmg::checks {

inline Check make_check(std::string name, bool pass, json payload = json::object()) {
  return Check{std::move(name), pass, std::move(payload)};
}

/// Runs a case body; any library error becomes a failed check with its kind.
template <class Body>
Check guarded(const std::string& name, json payload, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    payload["error"] = e.what();
    if (!e.payload().empty()) payload["error_payload"] = e.payload();
    return make_check(name, false, payload);
  }
}

/// Sample points for comparing rational functions in numeric mode.
template <Scalar F>
std::vector<F> probe_points() {
  return {ScalarTraits<F>::from_rational(37, 11), ScalarTraits<F>::from_rational(-53, 17),
          ScalarTraits<F>::from_rational(71, 13), ScalarTraits<F>::from_rational(-29, 7)};
}

/// Exact equality, or agreement at probe points within tolerance.
template <Scalar F>
bool same_ratmat(const Matrix<RatFun<F>>& a, const Matrix<RatFun<F>>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  if constexpr (ScalarTraits<F>::exact) {
    return a == b;
  } else {
    for (const F& z : probe_points<F>())
      for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
          if (!scalar_equal(a(i, j)(z), b(i, j)(z))) return false;
    return true;
  }
}

template <Scalar F>
bool same_ratfun(const RatFun<F>& a, const RatFun<F>& b) {
  Matrix<RatFun<F>> ma(1, 1), mb(1, 1);
  ma(0, 0) = a;
  mb(0, 0) = b;
  return same_ratmat(ma, mb);
}

template <Scalar F>
json point_payload(const CMPoint<F>& p) {
  return cmpoint_to_json(p);
}

template <Scalar F>
json ratmat_payload(const Matrix<RatFun<F>>& m) {
  return matrix_str<RatFun<F>>(m, [](const RatFun<F>& f) { return f.str(); });
}

template <Scalar F>
Matrix<RatFun<F>> constant_ratmat(const Matrix<F>& m) {
  return m.map([](const F& a) { return RatFun<F>(a); });
}

/// Scalar operator sum_k c_k(z) d^k as a 1x1 MatPDO.
template <Scalar F>
MatPDO<F> scalar_op(const std::vector<std::pair<int, RatFun<F>>>& terms, int depth) {
  MatPDO<F> p(1, 1, depth);
  for (const auto& [k, c] : terms) {
    Matrix<RatFun<F>> m(1, 1);
    m(0, 0) = c;
    p.add(k, m);
  }
  return p;
}

/// 1 x r row of scalar operators.
template <Scalar F>
MatPDO<F> row_op(const std::vector<MatPDO<F>>& entries, int depth) {
  MatPDO<F> p(1, entries.size(), depth);
  for (std::size_t a = 0; a < entries.size(); ++a)
    for (const auto& [k, c] : entries[a].terms()) {
      Matrix<RatFun<F>> m(1, entries.size());
      m(0, a) = c(0, 0);
      p.add(k, m);
    }
  return p;
}

/// CMPoint from explicit small data.
template <Scalar F>
CMPoint<F> make_point(std::vector<F> lambda, std::vector<F> alpha, Matrix<F> v, Matrix<F> w) {
  CMPoint<F> p;
  p.n = lambda.size();
  p.r = v.cols();
  p.lambda = std::move(lambda);
  p.alpha = std::move(alpha);
  p.vrow = std::move(v);
  p.wcol = std::move(w);
  return p;
}

/// The rank-one n = 1 point (lambda, alpha; 1, -1).
template <Scalar F>
CMPoint<F> simple_point(const F& lambda, const F& alpha) {
  return make_point<F>({lambda}, {alpha}, Matrix<F>{{from_int<F>(1)}}, Matrix<F>{{from_int<F>(-1)}});
}

}  // namespace cmg::checks
