#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmg/algebra/pdo.hpp"
#include "cmg/grass.hpp"

namespace cmg {

/// Point data behind a K-operator: the base point or a beta image.
template <Scalar F>
Quadruple<F> quadruple_of(const GrPoint<F>& w) {
  if (w.sites.empty()) return Quadruple<F>::base(w.r);
  if (w.provenance == Provenance::Beta && w.point) return from_cd_coords(*w.point);
  throw Error(ErrorKind::NotKRepresentable, "K-operators need the base point or a beta image");
}

/// I + w (xI + X)^{-1} (d - Y)^{-1} v, with (d - Y)^{-1} = sum_m Y^m d^{-m-1}.
template <Scalar F>
MatPDO<F> kw(const Quadruple<F>& q, int depth) {
  MatPDO<F> k = MatPDO<F>::identity(q.r, depth);
  if (q.n == 0) return k;
  const Resolvent<F> res = resolvent(Matrix<F>(-q.X));
  Matrix<F> ymv = q.v;
  for (int m = 0; m < depth; ++m) {
    k.set(-m - 1, sandwich_resolvent(q.w, res, ymv));
    ymv = q.Y * ymv;
  }
  return k;
}

template <Scalar F>
MatPDO<F> kw(const CMPoint<F>& p, int depth) {
  return kw(from_cd_coords(p), depth);
}

/// I + v^t (xI - Y^t)^{-1} (dI + X^t)^{-1} w^t.
template <Scalar F>
MatPDO<F> kbw(const Quadruple<F>& q, int depth) {
  MatPDO<F> k = MatPDO<F>::identity(q.r, depth);
  if (q.n == 0) return k;
  const Resolvent<F> res = resolvent(q.Y.transpose());
  const Matrix<F> vt = q.v.transpose();
  const Matrix<F> mxt = -q.X.transpose();
  Matrix<F> pw = q.w.transpose();
  for (int m = 0; m < depth; ++m) {
    k.set(-m - 1, sandwich_resolvent(vt, res, pw));
    pw = mxt * pw;
  }
  return k;
}

template <Scalar F>
MatPDO<F> kbw(const CMPoint<F>& p, int depth) {
  return kbw(from_cd_coords(p), depth);
}

template <Scalar F>
struct ThetaReport {
  bool differential = false;
  MatPDO<F> theta;              // differential part solved order by order
  int bad_order = 0;            // first failing negative order
  Matrix<RatFun<F>> bad_coeff;  // coefficient of K_U b(D) K_V^{-1} there
  bool intertwining_checked = false;
  bool intertwining = false;
};

/// Solves Theta K_V = K_U b(D) for differential Theta given b(D), then checks
/// that the remainder vanishes at orders -1 ... -depth.
template <Scalar F>
ThetaReport<F> theta_from_b(const MatPDO<F>& bd, const Quadruple<F>& u, const Quadruple<F>& v, int depth) {
  if (bd.rows() != u.r || bd.cols() != v.r) throw Error(ErrorKind::ShapeMismatch, "operator shape vs points");
  const int m = bd.max_order();
  const int work = depth + std::max(m, 0);
  const MatPDO<F> ku = kw(u, work);
  const MatPDO<F> kv = kw(v, work);
  const MatPDO<F> rhs = pdo_mul(ku, bd.truncated(work), work);
  MatPDO<F> nv(v.r, v.r, work);
  for (const auto& [k, c] : kv.terms())
    if (k < 0) nv.set(k, c);
  ThetaReport<F> rep;
  rep.theta = MatPDO<F>(u.r, v.r, depth);
  MatPDO<F> acc(u.r, v.r, work);  // sum over solved orders of Theta_j d^j N_V
  for (int k = m; k >= 0; --k) {
    const auto tk = rhs.coeff(k) - acc.coeff(k);
    rep.theta.set(k, tk);
    MatPDO<F> single(u.r, v.r, work);
    single.set(k, tk);
    acc = acc + pdo_mul(single, nv, work);
  }
  MatPDO<F> theta_w(u.r, v.r, work);
  for (const auto& [k, c] : rep.theta.terms()) theta_w.set(k, c);
  const MatPDO<F> resid = pdo_mul(theta_w, kv, work) - rhs;
  rep.differential = true;
  for (int k = -1; k >= -depth; --k) {
    const auto c = resid.coeff(k);
    if (!c.is_zero()) {
      rep.differential = false;
      rep.bad_order = k;
      rep.bad_coeff = -c;
      break;
    }
  }
  return rep;
}

/// d_z^a of the reduced stationary Baker function at z = z0, as functions of x.
template <Scalar F>
Matrix<RatFun<F>> baker_z_derivative(const Quadruple<F>& q, const F& z0, int a) {
  const auto one = Matrix<RatFun<F>>::identity(q.r, RatFun<F>(from_int<F>(1)));
  if (q.n == 0) return a == 0 ? one : Matrix<RatFun<F>>(q.r, q.r);
  F fact = from_int<F>(1);
  for (int i = 2; i <= a; ++i) fact = fact * from_int<F>(i);
  if (a % 2) fact = -fact;
  const Matrix<F> inv = inverse(identity<F>(q.n) * z0 - q.Y);
  Matrix<F> t = inv * q.v;
  for (int i = 0; i < a; ++i) t = inv * t;
  Matrix<RatFun<F>> out = baker_x_kernel(q, Matrix<F>(t * fact));
  return a == 0 ? one + out : out;
}

template <Scalar F>
Matrix<RatFun<F>> scale(const Matrix<RatFun<F>>& m, const RatFun<F>& s) {
  return m.map([&s](const RatFun<F>& e) { return e * s; });
}

/// Checks psi_U * D = Theta . psi_V at z = z0 as rational functions of x, with the
/// common factor e^{x z0} removed. D may have rational coefficients in z.
template <Scalar F>
bool intertwining_at(const MatPDO<F>& d, const MatPDO<F>& theta, const Quadruple<F>& u, const Quadruple<F>& v,
                     const F& z0) {
  const RatFun<F> x = RatFun<F>::variable();
  auto xpow = [&x](int e) {
    RatFun<F> p(from_int<F>(1));
    for (int i = 0; i < e; ++i) p = p * x;
    return p;
  };
  Matrix<RatFun<F>> lhs(u.r, v.r);
  std::vector<Matrix<RatFun<F>>> psi_u;
  for (const auto& [l, c] : d.terms()) {
    if (l < 0) throw Error(ErrorKind::NotDifferential, "D must be differential");
    const Matrix<RatFun<F>> cz = c.map([&z0](const RatFun<F>& e) { return RatFun<F>(e(z0)); });
    for (int b = 0; b <= l; ++b) {
      while (static_cast<int>(psi_u.size()) <= b) psi_u.push_back(baker_z_derivative(u, z0, static_cast<int>(psi_u.size())));
      const RatFun<F> w = RatFun<F>(from_int<F>(static_cast<long>(gen_binomial(l, b)))) * xpow(l - b);
      lhs += scale(psi_u[static_cast<std::size_t>(b)] * cz, w);
    }
  }
  Matrix<RatFun<F>> rhs(u.r, v.r);
  Matrix<RatFun<F>> der = stationary_baker_x(v, z0);
  std::vector<Matrix<RatFun<F>>> ders{der};
  for (const auto& [k, c] : theta.terms()) {
    if (k < 0) throw Error(ErrorKind::NotDifferential, "Theta must be differential");
    while (static_cast<int>(ders.size()) <= k) ders.push_back(derivative(ders.back()));
    for (int a = 0; a <= k; ++a) {
      F zp = from_int<F>(1);
      for (int i = 0; i < k - a; ++i) zp = zp * z0;
      rhs += scale(c * ders[static_cast<std::size_t>(a)], RatFun<F>(from_int<F>(static_cast<long>(gen_binomial(k, a))) * zp));
    }
  }
  return lhs == rhs;
}

template <Scalar F>
bool usable_sample(const F& z0, const Quadruple<F>& q) {
  return q.n == 0 || !cmg::is_zero(determinant(identity<F>(q.n) * z0 - q.Y));
}

template <Scalar F>
bool usable_sample(const F& z0, const MatPDO<F>& d) {
  for (const auto& [k, c] : d.terms())
    for (const auto& e : c.data())
      if (cmg::is_zero(e.den()(z0))) return false;
  return true;
}

/// Three fixed sample points off the spectra and coefficient poles.
template <Scalar F>
std::vector<F> intertwining_samples(const MatPDO<F>& d, const Quadruple<F>& u, const Quadruple<F>& v) {
  std::vector<F> out;
  const long nums[] = {7, -11, 13, 17, -19, 23, 29, -31};
  for (long n : nums) {
    const F z0 = ScalarTraits<F>::from_rational(n, 3);
    if (usable_sample(z0, u) && usable_sample(z0, v) && usable_sample(z0, d)) out.push_back(z0);
    if (out.size() == 3) break;
  }
  return out;
}

template <Scalar F>
bool verify_intertwining(const MatPDO<F>& d, const MatPDO<F>& theta, const Quadruple<F>& u, const Quadruple<F>& v) {
  for (const F& z0 : intertwining_samples(d, u, v))
    if (!intertwining_at(d, theta, u, v, z0)) return false;
  return true;
}

template <Scalar F>
std::string not_differential_payload(const ThetaReport<F>& rep) {
  std::string s = "{\"order\":" + std::to_string(rep.bad_order) + ",\"coefficient\":\"";
  s += matrix_str<RatFun<F>>(rep.bad_coeff, [](const RatFun<F>& f) { return f.str(); });
  return s + "\"}";
}

/// Full report for a differential D with polynomial coefficients.
template <Scalar F>
ThetaReport<F> theta_report(const MatPDO<F>& d, const Quadruple<F>& u, const Quadruple<F>& v, int depth) {
  ThetaReport<F> rep = theta_from_b(pdo_b(d), u, v, depth);
  if (rep.differential) {
    rep.intertwining_checked = true;
    rep.intertwining = verify_intertwining(d, rep.theta, u, v);
  }
  return rep;
}

/// Theta = K_U b(D) K_V^{-1}, or NotDifferential with the offending order.
template <Scalar F>
MatPDO<F> theta(const MatPDO<F>& d, const GrPoint<F>& u, const GrPoint<F>& v, int depth) {
  const ThetaReport<F> rep = theta_report(d, quadruple_of(u), quadruple_of(v), depth);
  if (!rep.differential) throw Error(ErrorKind::NotDifferential, "K_U b(D) K_V^{-1} has negative orders", not_differential_payload(rep));
  if (!rep.intertwining) throw Error(ErrorKind::NotDifferential, "intertwining identity fails at the rational level");
  return rep.theta;
}

template <Scalar F>
struct BMapResult {
  MatPDO<F> image;         // Theta^t, read as an operator in z
  bool reverified = false; // theta of the image on the involuted points is differential and returns D^t
};

/// B(D) = Theta^t, then re-verifies membership in D(b(V), b(U)) by running theta
/// on the involuted points (b extended to rational coefficients by expansion).
template <Scalar F>
BMapResult<F> b_map(const MatPDO<F>& d, const Quadruple<F>& u, const Quadruple<F>& v, int depth) {
  const ThetaReport<F> rep = theta_report(d, u, v, depth);
  if (!rep.differential || !rep.intertwining)
    throw Error(ErrorKind::NotDifferential, "D is not in D(U, V)", not_differential_payload(rep));
  BMapResult<F> out;
  out.image = rep.theta.transpose();
  const Quadruple<F> bu = bisp_involution(u), bv = bisp_involution(v);
  const int m = std::max(out.image.max_order(), 0);
  const ThetaReport<F> back = theta_from_b(pdo_b_expanded(out.image, depth + m), bv, bu, depth);
  out.reverified = back.differential && back.theta == d.transpose().truncated(depth) &&
                   verify_intertwining(out.image, back.theta, bv, bu);
  return out;
}

template <Scalar F>
BMapResult<F> b_map(const MatPDO<F>& d, const GrPoint<F>& u, const GrPoint<F>& v, int depth) {
  return b_map(d, quadruple_of(u), quadruple_of(v), depth);
}

/// T = [g(d) I + v^t (xI - Y^t)^{-1} adj(dI + X^t) w^t] o p(x), g(mu) = det(mu I + X).
/// Exactly differential, of order n with leading coefficient p.
template <Scalar F>
MatPDO<F> latt_witness(const Quadruple<F>& q, const std::vector<Poly<F>>& p) {
  if (p.size() != q.r) throw Error(ErrorKind::ShapeMismatch, "p must have r entries");
  const int depth = 1;
  const std::size_t r = q.r;
  const auto one = Matrix<RatFun<F>>::identity(r, RatFun<F>(from_int<F>(1)));
  MatPDO<F> g(r, r, depth);
  if (q.n == 0) {
    g.set(0, one);
  } else {
    const Resolvent<F> adj = resolvent(Matrix<F>(-q.X.transpose()));
    const Resolvent<F> ry = resolvent(q.Y.transpose());
    const Matrix<F> vt = q.v.transpose(), wt = q.w.transpose();
    for (std::size_t k = 0; k <= q.n; ++k) {
      Matrix<RatFun<F>> c = scale(one, RatFun<F>(adj.charpoly.coeff(k)));
      if (k < q.n) c += sandwich_resolvent(vt, ry, Matrix<F>(adj.adj[k] * wt));
      g.set(static_cast<int>(k), c);
    }
  }
  Matrix<RatFun<F>> pm(r, 1);
  for (std::size_t a = 0; a < r; ++a) pm(a, 0) = RatFun<F>(p[a]);
  return pdo_mul(g, multiplication_operator(pm, depth), depth);
}

template <Scalar F>
MatPDO<F> latt_witness(const CMPoint<F>& pt, const std::vector<Poly<F>>& p) {
  return latt_witness(from_cd_coords(pt), p);
}

/// Exact decision of D.C[z] in W for a differential operator whose rows are
/// width-r operator rows (an r x 1 column is read as its transpose).
template <Scalar F>
bool d_membership_direct(const MatPDO<F>& d_in, const GrPoint<F>& w) {
  MatPDO<F> d = d_in;
  if (d.cols() != w.r && d.cols() == 1 && d.rows() == w.r) d = d.transpose();
  if (d.cols() != w.r) throw Error(ErrorKind::ShapeMismatch, "operator width differs from the point");
  std::vector<F> pts;
  for (const auto& s : w.sites) pts.push_back(s.lambda);
  int coef_pole = 0;
  for (const auto& [k, c] : d.terms()) {
    if (k < 0) throw Error(ErrorKind::NotDifferential, "D must be differential");
    for (const auto& e : c.data()) {
      if (!poles_within(e, pts)) throw Error(ErrorKind::UnsupportedPoleLocus, "coefficient pole off the sites");
      for (const F& l : pts) coef_pole = std::max(coef_pole, e.pole_order_at(l));
    }
  }
  const int order = std::max(d.max_order(), 0);
  const MatPDO<F> dt = d.transpose();  // r x rows, applied to a scalar polynomial
  auto check = [&](const Poly<F>& p) {
    Matrix<RatFun<F>> phi(1, 1);
    phi(0, 0) = RatFun<F>(p);
    const Matrix<RatFun<F>> img = pdo_apply(dt, phi).transpose();
    for (std::size_t i = 0; i < img.rows(); ++i)
      if (!member(matrix_row(img, i), w)) return false;
    return true;
  };
  if (w.sites.empty()) {
    // base point: only polynomiality matters
    for (const auto& [k, c] : d.terms())
      for (const auto& e : c.data())
        if (!e.is_polynomial()) return false;
    return true;
  }
  for (const auto& s : w.sites) {
    const int jmax = coef_pole + s.pole_order + s.window_top + order;
    const Poly<F> lin = Poly<F>::linear_root(s.lambda);
    Poly<F> p(from_int<F>(1));
    for (int e = 0; e <= jmax; ++e) {
      if (!check(p)) return false;
      p = p * lin;
    }
  }
  return true;
}

}  // namespace cmg
