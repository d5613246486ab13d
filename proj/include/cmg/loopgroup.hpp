#pragma once

#include <string>
#include <vector>

#include "cmg/cmspace.hpp"

namespace cmg {

/// Values and first derivatives of a loop gamma(z) at the points lambda_i.
template <Scalar F>
struct GammaJet {
  std::vector<F> lambdas;
  std::vector<Matrix<F>> values;
  std::vector<Matrix<F>> derivs;

  std::size_t size() const { return lambdas.size(); }

  static GammaJet identity(const std::vector<F>& lambdas, std::size_t r) {
    GammaJet j;
    j.lambdas = lambdas;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      j.values.push_back(cmg::identity<F>(r));
      j.derivs.push_back(Matrix<F>(r, r));
    }
    return j;
  }

  /// The jet of a scalar loop e^{s(z)} I given s(lambda_i) exponentials and s'(lambda_i).
  static GammaJet scalar(const std::vector<F>& lambdas, std::size_t r, const std::vector<F>& value,
                         const std::vector<F>& deriv) {
    GammaJet j;
    j.lambdas = lambdas;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      j.values.push_back(cmg::identity<F>(r) * value[i]);
      j.derivs.push_back(cmg::identity<F>(r) * deriv[i]);
    }
    return j;
  }
};

template <Scalar F>
using PolyMatrix = Matrix<Poly<F>>;

template <Scalar F>
Matrix<F> evaluate(const PolyMatrix<F>& m, const F& z) {
  return m.map([&z](const Poly<F>& p) { return p(z); });
}

template <Scalar F>
PolyMatrix<F> derivative(const PolyMatrix<F>& m) {
  return m.map([](const Poly<F>& p) { return p.derivative(); });
}

template <Scalar F>
GammaJet<F> jet_of_polymat(const PolyMatrix<F>& g, const std::vector<F>& lambdas) {
  if (!g.is_square()) throw Error(ErrorKind::ShapeMismatch, "loop must be square");
  GammaJet<F> j;
  j.lambdas = lambdas;
  const PolyMatrix<F> dg = derivative(g);
  for (const F& l : lambdas) {
    Matrix<F> val = evaluate(g, l);
    if (cmg::is_zero(determinant(val)))
      throw Error(ErrorKind::SingularValueAtSpectrum, "loop is singular at " + scalar_str(l));
    j.values.push_back(std::move(val));
    j.derivs.push_back(evaluate(dg, l));
  }
  return j;
}

template <Scalar F>
void check_same_spectrum(const std::vector<F>& a, const std::vector<F>& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::SpectrumMismatch, "jet length differs from the spectrum");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!scalar_equal(a[i], b[i])) throw Error(ErrorKind::SpectrumMismatch, "jet is taken at a different spectrum");
}

/// Product rule: (ab, a'b + ab').
template <Scalar F>
GammaJet<F> jet_mul(const GammaJet<F>& a, const GammaJet<F>& b) {
  check_same_spectrum(a.lambdas, b.lambdas);
  GammaJet<F> c;
  c.lambdas = a.lambdas;
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.values.push_back(a.values[i] * b.values[i]);
    c.derivs.push_back(a.derivs[i] * b.values[i] + a.values[i] * b.derivs[i]);
  }
  return c;
}

template <Scalar F>
GammaJet<F> jet_inverse(const GammaJet<F>& a) {
  GammaJet<F> c;
  c.lambdas = a.lambdas;
  for (std::size_t i = 0; i < a.size(); ++i) {
    Matrix<F> gi;
    try {
      gi = inverse(a.values[i]);
    } catch (const Error&) {
      throw Error(ErrorKind::SingularJet, "jet value is singular");
    }
    c.derivs.push_back(-(gi * a.derivs[i] * gi));
    c.values.push_back(std::move(gi));
  }
  return c;
}

template <Scalar F>
bool operator==(const GammaJet<F>& a, const GammaJet<F>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!scalar_equal(a.lambdas[i], b.lambdas[i]) || !(a.values[i] == b.values[i]) || !(a.derivs[i] == b.derivs[i]))
      return false;
  return true;
}

/// Right action on the chart with diagonal Y:
/// v_i -> v_i g_i, w_i -> g_i^{-1} w_i, alpha_i -> alpha_i + sign * v_i g'_i g_i^{-1} w_i.
/// `sign` exists only so that verification can be mutation-tested; it is +1 in the action.
template <Scalar F>
CMPoint<F> act_signed(const CMPoint<F>& p, const GammaJet<F>& j, int sign) {
  check_same_spectrum(p.lambda, j.lambdas);
  CMPoint<F> out = p;
  for (std::size_t i = 0; i < p.n; ++i) {
    Matrix<F> gi;
    try {
      gi = inverse(j.values[i]);
    } catch (const Error&) {
      throw Error(ErrorKind::SingularJet, "jet value is singular");
    }
    const F shift = (p.v(i) * j.derivs[i] * gi * p.w(i))(0, 0);
    out.alpha[i] = p.alpha[i] + from_int<F>(sign) * shift;
    out.vrow.set_row(i, p.v(i) * j.values[i]);
    out.wcol.set_col(i, gi * p.w(i));
  }
  return canonicalize(out);
}

template <Scalar F>
CMPoint<F> act(const CMPoint<F>& p, const GammaJet<F>& j) {
  return act_signed(p, j, 1);
}

/// Action when Y = lambda I: (X + v g' g^{-1} w, Y; v g, g^{-1} w).
template <Scalar F>
Quadruple<F> act_scalar_Y(const Quadruple<F>& q, const Matrix<F>& g, const Matrix<F>& gp) {
  if (!q.Y.is_square()) throw Error(ErrorKind::ShapeMismatch, "Y");
  for (std::size_t i = 0; i < q.n; ++i)
    for (std::size_t k = 0; k < q.n; ++k) {
      if (i != k && !cmg::is_zero(q.Y(i, k))) throw Error(ErrorKind::YNotScalar, "Y is not scalar");
      if (i == k && !scalar_equal(q.Y(i, i), q.Y(0, 0))) throw Error(ErrorKind::YNotScalar, "Y is not scalar");
    }
  Matrix<F> gi;
  try {
    gi = inverse(g);
  } catch (const Error&) {
    throw Error(ErrorKind::SingularJet, "jet value is singular");
  }
  Quadruple<F> o = q;
  o.X = q.X + q.v * gp * gi * q.w;
  o.v = q.v * g;
  o.w = gi * q.w;
  return o;
}

/// Scalar part e^{p(z)} of a factored loop: either a polynomial exponent or
/// an opaque entire function known only by name.
template <Scalar F>
struct EntireDescriptor {
  bool polynomial = true;
  Poly<F> poly;
  std::string name;

  static EntireDescriptor of_poly(Poly<F> p) { return {true, std::move(p), {}}; }
  static EntireDescriptor opaque(std::string n) { return {false, {}, std::move(n)}; }
};

/// Membership in the algebraic loop group: polynomial exponent and a polynomial
/// matrix whose determinant is a nonzero constant.
template <Scalar F>
bool is_gamma_alg(const EntireDescriptor<F>& p, const PolyMatrix<F>& m) {
  if (!p.polynomial || !m.is_square()) return false;
  const Poly<F> d = determinant_expand(m);
  return d.degree() == 0;
}

}  // namespace cmg
