#pragma once

#include <functional>

#include "cmg/cmspace.hpp"

namespace cmg {

/// Flow parameters: Hamiltonian tr(Y^k v alpha w) run for time t.
template <Scalar F>
struct FlowSpec {
  unsigned k = 0;
  Matrix<F> alpha;
  F t{};
};

template <Scalar F>
F hamiltonian(const Quadruple<F>& q, unsigned k, const Matrix<F>& alpha) {
  return (matrix_power(q.Y, k) * q.v * alpha * q.w).trace();
}

/// Sum_{j<k} Y^{k-1-j} M Y^j (zero for k = 0).
template <Scalar F>
Matrix<F> graded_sum(const Matrix<F>& Y, const Matrix<F>& M, unsigned k) {
  Matrix<F> acc(M.rows(), M.cols());
  if (k == 0) return acc;
  std::vector<Matrix<F>> pw{identity<F>(Y.rows())};
  for (unsigned j = 1; j < k; ++j) pw.push_back(pw.back() * Y);
  for (unsigned j = 0; j < k; ++j) acc += pw[k - 1 - j] * M * pw[j];
  return acc;
}

/// Tangent vector (dX, dY, dv, dw) of the Hamiltonian flow.
template <Scalar F>
Quadruple<F> vector_field(const Quadruple<F>& q, unsigned k, const Matrix<F>& alpha) {
  const Matrix<F> yk = matrix_power(q.Y, k);
  Quadruple<F> d;
  d.n = q.n;
  d.r = q.r;
  d.X = graded_sum(q.Y, q.v * alpha * q.w, k);
  d.Y = Matrix<F>(q.n, q.n);
  d.v = yk * q.v * alpha;
  d.w = -(alpha * q.w * yk);
  return d;
}

template <Scalar F>
bool is_scalar_matrix(const Matrix<F>& a, F* value = nullptr) {
  if (!a.is_square()) return false;
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && !cmg::is_zero(a(i, j))) return false;
      if (i == j && !scalar_equal(a(i, i), a(0, 0))) return false;
    }
  if (value) *value = n ? a(0, 0) : F{};
  return true;
}

template <Scalar F>
F scalar_power(const F& a, unsigned k) {
  F r = from_int<F>(1);
  for (unsigned i = 0; i < k; ++i) r = r * a;
  return r;
}

/// Closed-form trajectory on the chart with diagonal Y. Numeric mode uses
/// matrix exponentials; exact mode handles alpha with alpha^2 = 0 and scalar alpha.
template <Scalar F>
CMPoint<F> flow_closed(const CMPoint<F>& p, unsigned k, const Matrix<F>& alpha, const F& t) {
  if (alpha.rows() != p.r || alpha.cols() != p.r) throw Error(ErrorKind::ShapeMismatch, "alpha shape");
  CMPoint<F> out = p;
  F c{};
  const bool scalar = is_scalar_matrix(alpha, &c);
  const bool nilpotent = (alpha * alpha).is_zero();
  if constexpr (ScalarTraits<F>::exact) {
    if (!scalar && !nilpotent)
      throw Error(ErrorKind::UnsupportedExactExponential, "exact flow needs nilpotent or scalar alpha");
  }
  for (std::size_t i = 0; i < p.n; ++i) {
    const F lk = scalar_power(p.lambda[i], k);
    const F dx = k == 0 ? F{} : from_int<F>(static_cast<long>(k)) * scalar_power(p.lambda[i], k - 1);
    out.alpha[i] = p.alpha[i] + dx * (p.v(i) * alpha * p.w(i))(0, 0) * t;
    Matrix<F> e, einv;
    if constexpr (ScalarTraits<F>::exact) {
      if (scalar) {
        // exp(c lambda^k t) is a torus gauge factor: v and w stay put in the quotient
        e = einv = identity<F>(p.r);
      } else {
        e = identity<F>(p.r) + alpha * (lk * t);
        einv = identity<F>(p.r) - alpha * (lk * t);
      }
    } else {
      e = matrix_exp(alpha * (lk * t));
      einv = matrix_exp(alpha * (-(lk * t)));
    }
    out.vrow.set_row(i, p.v(i) * e);
    out.wcol.set_col(i, einv * p.w(i));
  }
  return canonicalize(out);
}

/// Scalar loop e^{p(z)}: X -> X - p'(Y).
template <Scalar F>
Matrix<F> poly_of_matrix(const Poly<F>& p, const Matrix<F>& a) {
  Matrix<F> acc(a.rows(), a.cols());
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * a + identity<F>(a.rows()) * *it;
  return acc;
}

template <Scalar F>
Quadruple<F> flow_scalar(const Quadruple<F>& q, const Poly<F>& p) {
  Quadruple<F> o = q;
  o.X = q.X - poly_of_matrix(p.derivative(), q.Y);
  return o;
}

/// Exact flow for alpha^2 = 0 and any Y.
template <Scalar F>
Quadruple<F> flow_nilpotent(const Quadruple<F>& q, unsigned k, const Matrix<F>& alpha, const F& t) {
  if (!(alpha * alpha).is_zero()) throw Error(ErrorKind::NotNilpotent, "alpha^2 must vanish");
  const Matrix<F> yk = matrix_power(q.Y, k);
  Quadruple<F> o = q;
  o.v = q.v + yk * q.v * alpha * t;
  o.w = q.w - alpha * q.w * yk * t;
  o.X = q.X + graded_sum(q.Y, q.v * alpha * q.w, k) * t;
  return o;
}

namespace detail {

inline Quadruple<Cplx> axpy(const Quadruple<Cplx>& a, Cplx s, const Quadruple<Cplx>& d) {
  Quadruple<Cplx> o = a;
  o.X += d.X * s;
  o.Y += d.Y * s;
  o.v += d.v * s;
  o.w += d.w * s;
  return o;
}

}  // namespace detail

/// Classical RK4 integration of the equations of motion (independent oracle).
inline Quadruple<Cplx> flow_numeric(const Quadruple<Cplx>& q, unsigned k, const Matrix<Cplx>& alpha, Cplx t,
                                    int steps) {
  if (steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be positive");
  const Cplx h = t / static_cast<double>(steps);
  Quadruple<Cplx> s = q;
  for (int i = 0; i < steps; ++i) {
    const auto k1 = vector_field(s, k, alpha);
    const auto k2 = vector_field(detail::axpy(s, h / 2.0, k1), k, alpha);
    const auto k3 = vector_field(detail::axpy(s, h / 2.0, k2), k, alpha);
    const auto k4 = vector_field(detail::axpy(s, h, k3), k, alpha);
    s = detail::axpy(s, h / 6.0, k1);
    s = detail::axpy(s, h / 3.0, k2);
    s = detail::axpy(s, h / 3.0, k3);
    s = detail::axpy(s, h / 6.0, k4);
  }
  return s;
}

/// Finite-difference Poisson bracket for the pairing tr(dY ^ dX + dw ^ dv):
/// {F, G} = sum dF/dp dG/dq - dF/dq dG/dp with q = (X_ij, v_ia), p = (Y_ji, w_ai).
inline Cplx poisson_bracket(const Quadruple<Cplx>& q, unsigned k, const Matrix<Cplx>& alpha, unsigned l,
                            const Matrix<Cplx>& beta, double h = 1e-4) {
  using Fn = std::function<Cplx(const Quadruple<Cplx>&)>;
  const Fn f = [&](const Quadruple<Cplx>& s) { return hamiltonian(s, k, alpha); };
  const Fn g = [&](const Quadruple<Cplx>& s) { return hamiltonian(s, l, beta); };
  auto diff = [h, &q](const Fn& fn, int which, std::size_t i, std::size_t j) {
    Quadruple<Cplx> a = q, b = q;
    auto entry = [which, i, j](Quadruple<Cplx>& s) -> Cplx& {
      switch (which) {
        case 0: return s.X(i, j);
        case 1: return s.Y(i, j);
        case 2: return s.v(i, j);
        default: return s.w(i, j);
      }
    };
    entry(a) += h;
    entry(b) -= h;
    return (fn(a) - fn(b)) / (2.0 * h);
  };
  Cplx acc{};
  for (std::size_t i = 0; i < q.n; ++i)
    for (std::size_t j = 0; j < q.n; ++j) {
      // q-coordinate X_ij, conjugate p-coordinate Y_ji
      acc += diff(f, 1, j, i) * diff(g, 0, i, j) - diff(f, 0, i, j) * diff(g, 1, j, i);
    }
  for (std::size_t i = 0; i < q.n; ++i)
    for (std::size_t a = 0; a < q.r; ++a) {
      // q-coordinate v_ia, conjugate p-coordinate w_ai
      acc += diff(f, 3, a, i) * diff(g, 2, i, a) - diff(f, 2, i, a) * diff(g, 3, a, i);
    }
  return acc;
}

}  // namespace cmg
