#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cmg/algebra/resolvent.hpp"
#include "cmg/cmspace.hpp"
#include "cmg/loopgroup.hpp"

namespace cmg {

enum class Provenance { Base, Beta, Cell, Custom };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Base: return "base";
    case Provenance::Beta: return "beta";
    case Provenance::Cell: return "cell";
    case Provenance::Custom: return "custom";
  }
  return "custom";
}

/// Local conditions at one point: f may have a pole of order <= pole_order,
/// and every functional annihilates the Laurent window c_{-m} ... c_{top}
/// (blocks of width r, lowest order first).
template <Scalar F>
struct Site {
  F lambda{};
  int pole_order = 0;
  int window_top = 0;
  std::vector<std::vector<F>> conditions;

  int window_len() const { return window_top + pole_order + 1; }
  std::size_t index(int k, std::size_t a, std::size_t r) const {
    return static_cast<std::size_t>(k + pole_order) * r + a;
  }
};

/// Conditions f_{-1} A + f_0 B = 0 at z = 0.
template <Scalar F>
struct CellPoint {
  Matrix<F> A, B;
};

/// A rational Grassmannian point given by finitely many local conditions.
template <Scalar F>
struct GrPoint {
  std::size_t r = 1;
  std::vector<Site<F>> sites;
  Provenance provenance = Provenance::Custom;
  std::optional<CMPoint<F>> point;  // for beta images
  std::optional<CellPoint<F>> cell;

  static GrPoint base(std::size_t r) {
    GrPoint w;
    w.r = r;
    w.provenance = Provenance::Base;
    w.point = CMPoint<F>::base(r);
    return w;
  }

  std::size_t condition_count() const {
    std::size_t c = 0;
    for (const auto& s : sites) c += s.conditions.size();
    return c;
  }

  /// prod (z - lambda_j)^{m_j}
  Poly<F> pole_polynomial() const {
    Poly<F> q(from_int<F>(1));
    for (const auto& s : sites)
      for (int k = 0; k < s.pole_order; ++k) q = q * Poly<F>::linear_root(s.lambda);
    return q;
  }

  const Site<F>* site_at(const F& l) const {
    for (const auto& s : sites)
      if (scalar_equal(s.lambda, l)) return &s;
    return nullptr;
  }
};

template <Scalar F>
std::size_t first_nonzero(const Matrix<F>& row) {
  for (std::size_t a = 0; a < row.cols(); ++a)
    if (!cmg::is_zero(row(0, a))) return a;
  return row.cols();
}

/// The beta image: at each lambda_i a simple pole whose residue is a multiple
/// of v_i, and (f_0 + alpha_i f_{-1}) w_i = 0.
template <Scalar F>
GrPoint<F> beta(const CMPoint<F>& p) {
  GrPoint<F> w;
  w.r = p.r;
  w.provenance = p.n == 0 ? Provenance::Base : Provenance::Beta;
  w.point = p;
  const std::size_t r = p.r;
  for (std::size_t i = 0; i < p.n; ++i) {
    Site<F> s;
    s.lambda = p.lambda[i];
    s.pole_order = 1;
    s.window_top = 0;
    const Matrix<F> vi = p.v(i);
    const std::size_t piv = first_nonzero(vi);
    if (piv == r) throw Error(ErrorKind::InvalidArgument, "v_i vanishes");
    // residue in span(v_i): kill the complement spanned by the non-pivot unit vectors
    for (std::size_t k = 0; k < r; ++k) {
      if (k == piv) continue;
      std::vector<F> c(2 * r);
      c[s.index(-1, k, r)] = from_int<F>(1);
      c[s.index(-1, piv, r)] = -vi(0, k) / vi(0, piv);
      s.conditions.push_back(std::move(c));
    }
    std::vector<F> c(2 * r);
    for (std::size_t a = 0; a < r; ++a) {
      c[s.index(-1, a, r)] = p.alpha[i] * p.wcol(a, i);
      c[s.index(0, a, r)] = p.wcol(a, i);
    }
    s.conditions.push_back(std::move(c));
    w.sites.push_back(std::move(s));
  }
  return w;
}

template <Scalar F>
GrPoint<F> cell_grpoint(const CellPoint<F>& c) {
  const std::size_t r = c.A.rows();
  if (c.A.cols() != r || c.B.rows() != r || c.B.cols() != r) throw Error(ErrorKind::ShapeMismatch, "cell matrices");
  Matrix<F> ab(r, 2 * r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) {
      ab(i, j) = c.A(i, j);
      ab(i, r + j) = c.B(i, j);
    }
  if (rank(ab) != r) throw Error(ErrorKind::DegenerateCell, "(A | B) must have full rank");
  GrPoint<F> w;
  w.r = r;
  w.provenance = Provenance::Cell;
  w.cell = c;
  Site<F> s;
  s.lambda = F{};
  s.pole_order = 1;
  s.window_top = 0;
  for (std::size_t k = 0; k < r; ++k) {
    std::vector<F> cond(2 * r);
    for (std::size_t a = 0; a < r; ++a) {
      cond[s.index(-1, a, r)] = c.A(a, k);
      cond[s.index(0, a, r)] = c.B(a, k);
    }
    s.conditions.push_back(std::move(cond));
  }
  w.sites.push_back(std::move(s));
  return w;
}

template <Scalar F>
std::vector<F> apply_conditions(const Site<F>& s, const LaurentJet<F>& jet, std::size_t r) {
  std::vector<F> out;
  for (const auto& c : s.conditions) {
    F acc{};
    for (int k = -s.pole_order; k <= s.window_top; ++k)
      for (std::size_t a = 0; a < r; ++a) acc += c[s.index(k, a, r)] * jet.at(k)[a];
    out.push_back(acc);
  }
  return out;
}

/// Poles of f lie among the given points (any order).
template <Scalar F>
bool poles_within(const RatFun<F>& f, const std::vector<F>& points) {
  Poly<F> d = f.den();
  for (const F& l : points) {
    const Poly<F> lin = Poly<F>::linear_root(l);
    while (d.degree() > 0) {
      auto [q, rem] = divmod(d, lin);
      if (!rem.is_zero()) break;
      d = q;
    }
  }
  return d.degree() <= 0;
}

template <Scalar F>
bool member(const std::vector<RatFun<F>>& f, const GrPoint<F>& w) {
  if (f.size() != w.r) throw Error(ErrorKind::ShapeMismatch, "row width differs from the point");
  std::vector<F> pts;
  for (const auto& s : w.sites) pts.push_back(s.lambda);
  for (const auto& e : f)
    if (!poles_within(e, pts)) return false;
  for (const auto& s : w.sites) {
    const LaurentJet<F> jet = laurent_expand(f, s.lambda, -s.pole_order, s.window_top);
    if (jet.pole_overflow) return false;
    for (const F& v : apply_conditions(s, jet, w.r))
      if (!cmg::is_zero(v)) return false;
  }
  return true;
}

template <Scalar F>
std::vector<RatFun<F>> matrix_row(const Matrix<RatFun<F>>& m, std::size_t i) {
  std::vector<RatFun<F>> row;
  for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
  return row;
}

/// Reduced Baker function I + w(g) X(g)^{-1} (zI - Y)^{-1} v(g) of a beta image.
template <Scalar F>
Matrix<RatFun<F>> baker(const GrPoint<F>& w, const GammaJet<F>& j) {
  if (!w.point) throw Error(ErrorKind::InvalidArgument, "baker needs a beta-image point");
  const CMPoint<F>& p = *w.point;
  check_same_spectrum(p.lambda, j.lambdas);
  const std::size_t n = p.n, r = p.r;
  Matrix<F> vg(n, r), wg(r, n), Xg(n, n);
  std::vector<Matrix<F>> ginv;
  for (std::size_t i = 0; i < n; ++i) {
    ginv.push_back(inverse(j.values[i]));
    vg.set_row(i, p.v(i) * ginv[i]);
    wg.set_col(i, j.values[i] * p.w(i));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      Xg(i, k) = i == k ? p.alpha[i] - (p.v(i) * ginv[i] * j.derivs[i] * p.w(i))(0, 0)
                        : (vg.row(i) * wg.col(k))(0, 0) / (p.lambda[i] - p.lambda[k]);
  const F det = determinant(Xg);
  if (cmg::is_zero(det))
    throw Error(ErrorKind::OutsideBigCell, "X(g) is singular", "{\"det\":\"" + scalar_str(det) + "\"}");
  const Matrix<F> m = wg * inverse(Xg);
  Matrix<RatFun<F>> psi = Matrix<RatFun<F>>::identity(r, RatFun<F>(from_int<F>(1)));
  for (std::size_t i = 0; i < n; ++i) {
    const Poly<F> den = Poly<F>::linear_root(p.lambda[i]);
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) {
        const F c = m(a, i) * vg(i, b);
        if (!cmg::is_zero(c)) psi(a, b) += RatFun<F>(Poly<F>(c), den);
      }
  }
  return psi;
}

/// Rows of psi * g satisfy the local conditions, using only the value and first
/// derivative of g at each site (sites of pole order <= 1 and window top <= 0).
template <Scalar F>
bool rows_satisfy_at_jet(const GrPoint<F>& w, const Matrix<RatFun<F>>& psi, const GammaJet<F>& j) {
  const std::size_t r = w.r;
  for (const auto& s : w.sites) {
    if (s.pole_order > 1 || s.window_top > 0)
      throw Error(ErrorKind::InvalidArgument, "jet-level check needs windows within [-1, 0]");
    std::size_t idx = j.size();
    for (std::size_t i = 0; i < j.size(); ++i)
      if (scalar_equal(j.lambdas[i], s.lambda)) idx = i;
    if (idx == j.size()) throw Error(ErrorKind::SpectrumMismatch, "jet misses a site");
    const Matrix<F>& g = j.values[idx];
    const Matrix<F>& gp = j.derivs[idx];
    for (std::size_t a = 0; a < r; ++a) {
      const LaurentJet<F> lj = laurent_expand(matrix_row(psi, a), s.lambda, -1, 0);
      if (lj.pole_overflow) return false;
      Matrix<F> res(1, r), c0(1, r);
      for (std::size_t b = 0; b < r; ++b) {
        res(0, b) = lj.at(-1)[b];
        c0(0, b) = lj.at(0)[b];
      }
      const Matrix<F> fm1 = res * g;
      const Matrix<F> f0 = res * gp + c0 * g;
      LaurentJet<F> prod;
      prod.base = s.lambda;
      prod.k_min = -1;
      prod.k_max = 0;
      prod.width = r;
      prod.coeffs = {std::vector<F>(fm1.data()), std::vector<F>(f0.data())};
      if (s.pole_order == 0) {
        for (const auto& x : prod.coeffs[0])
          if (!cmg::is_zero(x)) return false;
        prod.coeffs.erase(prod.coeffs.begin());
        prod.k_min = 0;
      }
      for (const F& v : apply_conditions(s, prod, r))
        if (!cmg::is_zero(v)) return false;
    }
  }
  return true;
}

/// psi = I + O(z^{-1}) entrywise.
template <Scalar F>
bool is_normalized(const Matrix<RatFun<F>>& psi) {
  for (std::size_t a = 0; a < psi.rows(); ++a)
    for (std::size_t b = 0; b < psi.cols(); ++b) {
      const RatFun<F> e = a == b ? psi(a, b) - RatFun<F>(from_int<F>(1)) : psi(a, b);
      if (!e.is_zero() && e.valuation_at_infinity() < 1) return false;
    }
  return true;
}

template <Scalar F>
F big_cell_indicator(const Quadruple<F>& q, const F& x) {
  if (q.n == 0) return from_int<F>(1);
  return determinant(identity<F>(q.n) * x + q.X);
}

template <Scalar F>
F big_cell_indicator(const CMPoint<F>& p, const F& x) {
  return big_cell_indicator(from_cd_coords(p), x);
}

template <Scalar F>
Matrix<F> inverse_or_outside(const Matrix<F>& m) {
  const F det = determinant(m);
  if (cmg::is_zero(det))
    throw Error(ErrorKind::OutsideBigCell, "xI + X is singular", "{\"det\":\"" + scalar_str(det) + "\"}");
  return inverse(m);
}

/// I + w (xI + X)^{-1} (zI - Y)^{-1} v as a matrix of rational functions of z.
template <Scalar F>
Matrix<RatFun<F>> stationary_baker(const Quadruple<F>& q, const F& x) {
  const auto one = Matrix<RatFun<F>>::identity(q.r, RatFun<F>(from_int<F>(1)));
  if (q.n == 0) return one;
  const Matrix<F> s = q.w * inverse_or_outside(identity<F>(q.n) * x + q.X);
  return one + sandwich_resolvent(s, resolvent(q.Y), q.v);
}

template <Scalar F>
Matrix<RatFun<F>> stationary_baker(const CMPoint<F>& p, const F& x) {
  return stationary_baker(from_cd_coords(p), x);
}

/// w (xI + X)^{-1} T as rational functions of x.
template <Scalar F>
Matrix<RatFun<F>> baker_x_kernel(const Quadruple<F>& q, const Matrix<F>& t) {
  if (q.n == 0) return Matrix<RatFun<F>>(q.r, t.cols());
  return sandwich_resolvent(q.w, resolvent(Matrix<F>(-q.X)), t);
}

/// The stationary Baker function at fixed z = z0, as rational functions of x.
template <Scalar F>
Matrix<RatFun<F>> stationary_baker_x(const Quadruple<F>& q, const F& z0) {
  const auto one = Matrix<RatFun<F>>::identity(q.r, RatFun<F>(from_int<F>(1)));
  if (q.n == 0) return one;
  Matrix<F> t;
  try {
    t = inverse(identity<F>(q.n) * z0 - q.Y) * q.v;
  } catch (const Error&) {
    throw Error(ErrorKind::InvalidArgument, "z0 lies in the spectrum of Y");
  }
  return one + baker_x_kernel(q, t);
}

/// r = 1: det{I - (zI - Y)^{-1} (xI + X)^{-1}} = det(zI - Y - S) / det(zI - Y), S = (xI + X)^{-1}.
/// Two characteristic polynomials; eliminating over rational functions overflows in numeric mode.
template <Scalar F>
RatFun<F> psi2_det(const Quadruple<F>& q, const F& x) {
  if (q.r != 1) throw Error(ErrorKind::UnsupportedRank, "determinant formula needs r = 1");
  if (q.n == 0) return RatFun<F>(from_int<F>(1));
  const Matrix<F> s = inverse_or_outside(identity<F>(q.n) * x + q.X);
  return RatFun<F>(resolvent(Matrix<F>(q.Y + s)).charpoly, resolvent(q.Y).charpoly);
}

template <Scalar F>
RatFun<F> psi2_det(const CMPoint<F>& p, const F& x) {
  return psi2_det(from_cd_coords(p), x);
}

namespace detail {

template <Scalar F>
Matrix<RatFun<F>> one_minus_over_z(const Matrix<F>& coef) {
  const std::size_t r = coef.rows();
  Matrix<RatFun<F>> psi = Matrix<RatFun<F>>::identity(r, RatFun<F>(from_int<F>(1)));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = 0; b < r; ++b)
      if (!cmg::is_zero(coef(a, b))) psi(a, b) -= RatFun<F>(Poly<F>(coef(a, b)), Poly<F>::monomial(1));
  return psi;
}

}  // namespace detail

/// Branch for invertible B: I - g0 (g0^{-1} g0' + A B^{-1})^{-1} z^{-1} g0^{-1}.
template <Scalar F>
Matrix<RatFun<F>> cell_baker_a(const CellPoint<F>& c, const Matrix<F>& g0, const Matrix<F>& g0p) {
  if (cmg::is_zero(determinant(c.B))) throw Error(ErrorKind::DegenerateCell, "B is singular");
  const Matrix<F> gi = inverse(g0);
  const Matrix<F> braced = gi * g0p + c.A * inverse(c.B);
  if (cmg::is_zero(determinant(braced))) throw Error(ErrorKind::OutsideBigCell, "braced matrix is singular");
  return detail::one_minus_over_z(Matrix<F>(g0 * inverse(braced) * gi));
}

/// Branch for invertible A: I - g0 B_n (I + g0^{-1} g0' B_n)^{-1} z^{-1} g0^{-1}, B_n = B A^{-1}.
template <Scalar F>
Matrix<RatFun<F>> cell_baker_b(const CellPoint<F>& c, const Matrix<F>& g0, const Matrix<F>& g0p) {
  if (cmg::is_zero(determinant(c.A))) throw Error(ErrorKind::DegenerateCell, "A is singular");
  const std::size_t r = c.A.rows();
  const Matrix<F> gi = inverse(g0);
  const Matrix<F> b = c.B * inverse(c.A);
  const Matrix<F> braced = identity<F>(r) + gi * g0p * b;
  if (cmg::is_zero(determinant(braced))) throw Error(ErrorKind::OutsideBigCell, "braced matrix is singular");
  return detail::one_minus_over_z(Matrix<F>(g0 * b * inverse(braced) * gi));
}

/// Baker function of a cell point for a loop with jet (g0, g0p) at 0.
template <Scalar F>
Matrix<RatFun<F>> cell_baker(const CellPoint<F>& c, const Matrix<F>& g0, const Matrix<F>& g0p) {
  if (!cmg::is_zero(determinant(c.B))) return cell_baker_a(c, g0, g0p);
  if (!cmg::is_zero(determinant(c.A))) return cell_baker_b(c, g0, g0p);
  throw Error(ErrorKind::DegenerateCell, "neither A nor B is invertible");
}

/// Stationary form: the jet of e^{xz} I at 0 is (I, x I).
template <Scalar F>
Matrix<RatFun<F>> cell_baker_stationary(const CellPoint<F>& c, const F& x) {
  const std::size_t r = c.A.rows();
  return cell_baker(c, identity<F>(r), identity<F>(r) * x);
}

/// Writes a rank-one matrix as a column times a row.
template <Scalar F>
std::pair<Matrix<F>, Matrix<F>> rank_one_factor(const Matrix<F>& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!cmg::is_zero(m(i, j))) {
        Matrix<F> col = m.col(j) * (from_int<F>(1) / m(i, j));
        return {col, m.row(i)};
      }
  throw Error(ErrorKind::InvalidArgument, "zero matrix");
}

/// The Calogero-Moser quadruple whose beta image is the cell point.
template <Scalar F>
Quadruple<F> cell_to_point(const CellPoint<F>& c) {
  const std::size_t r = c.A.rows();
  if (!cmg::is_zero(determinant(c.B)))
    return Quadruple<F>(c.A * inverse(c.B), Matrix<F>(r, r), identity<F>(r), -identity<F>(r));
  if (cmg::is_zero(determinant(c.A)) || rank(c.B) != 1)
    throw Error(ErrorKind::UnsupportedCell, "only invertible or rank-one B is supported");
  const Matrix<F> b_norm = c.B * inverse(c.A);
  auto [a, b] = rank_one_factor(b_norm);
  const F ba = (b * a)(0, 0);
  if (cmg::is_zero(ba)) throw Error(ErrorKind::NotInBetaImage, "ba = 0: the point is not a beta image");
  const F alpha = from_int<F>(1) / ba;
  Matrix<F> X(1, 1), Y(1, 1);
  X(0, 0) = alpha;
  return Quadruple<F>(X, Y, b, -(a * alpha));
}

/// Jet transfer of multiplication by z: c'_k = lambda c_k + c_{k-1}.
template <Scalar F>
Matrix<F> z_transfer(const Site<F>& s, std::size_t r) {
  const std::size_t len = static_cast<std::size_t>(s.window_len()) * r;
  Matrix<F> t(len, len);
  for (int k = -s.pole_order; k <= s.window_top; ++k)
    for (std::size_t a = 0; a < r; ++a) {
      t(s.index(k, a, r), s.index(k, a, r)) = s.lambda;
      if (k - 1 >= -s.pole_order) t(s.index(k, a, r), s.index(k - 1, a, r)) = from_int<F>(1);
    }
  return t;
}

template <Scalar F>
Matrix<F> condition_matrix(const Site<F>& s, std::size_t r) {
  const std::size_t len = static_cast<std::size_t>(s.window_len()) * r;
  Matrix<F> c(s.conditions.size(), len);
  for (std::size_t i = 0; i < s.conditions.size(); ++i)
    for (std::size_t j = 0; j < len; ++j) c(i, j) = s.conditions[i][j];
  return c;
}

/// zW is contained in W: at each site the transfer maps ker(C) into ker(C).
template <Scalar F>
bool z_stable(const GrPoint<F>& w) {
  for (const auto& s : w.sites) {
    if (s.conditions.empty()) continue;
    const Matrix<F> c = condition_matrix(s, w.r);
    const Matrix<F> ker = nullspace(c);
    if (ker.cols() == 0) continue;
    if (!(c * z_transfer(s, w.r) * ker).is_zero()) return false;
  }
  return true;
}

/// f_0(zeta^2) + zeta f_1(zeta^2).
template <Scalar F>
RatFun<F> interleave(const std::vector<RatFun<F>>& f) {
  if (f.size() != 2) throw Error(ErrorKind::ShapeMismatch, "interleaving is implemented for width 2");
  const Poly<F> sq = Poly<F>::monomial(2);
  return f[0].compose(sq) + RatFun<F>(Poly<F>::variable()) * f[1].compose(sq);
}

template <Scalar F>
std::vector<RatFun<F>> deinterleave(const RatFun<F>& g) {
  const Poly<F> neg = Poly<F>({F{}, from_int<F>(-1)});
  const Poly<F> dm = g.den().compose(neg);
  const Poly<F> num = g.num() * dm;
  const Poly<F> den = g.den() * dm;  // even polynomial
  auto split = [](const Poly<F>& p, int parity) {
    std::vector<F> c;
    for (std::size_t k = static_cast<std::size_t>(parity); k < p.coeffs().size(); k += 2) c.push_back(p.coeffs()[k]);
    return Poly<F>(c);
  };
  const Poly<F> e = split(den, 0);
  return {RatFun<F>(split(num, 0), e), RatFun<F>(split(num, 1), e)};
}

enum class AnsatzStatus { Solvable, NoSolution, NotUnique };

inline const char* ansatz_status_name(AnsatzStatus s) {
  switch (s) {
    case AnsatzStatus::Solvable: return "Solvable";
    case AnsatzStatus::NoSolution: return "NoSolution";
    case AnsatzStatus::NotUnique: return "NotUnique";
  }
  return "?";
}

template <Scalar F>
struct AnsatzReport {
  F x{};
  AnsatzStatus status = AnsatzStatus::NoSolution;
  Matrix<F> A, B;  // set when solvable
};

/// Coefficient of z^k in (I + A z^{-1} + B z^{-2}) e^{xz}: the parts multiplying
/// I, A and B respectively.
template <Scalar F>
std::array<F, 3> ansatz_weights(int k, const F& x) {
  auto term = [&x](int e) {
    if (e < 0) return F{};
    F v = from_int<F>(1);
    for (int i = 1; i <= e; ++i) v = v * x / from_int<F>(i);
    return v;
  };
  return {term(k), term(k + 1), term(k + 2)};
}

/// Tries psi = (I + A z^{-1} + B z^{-2}) e^{xz} against a single site at 0.
template <Scalar F>
std::vector<AnsatzReport<F>> stationary_ansatz_order2(const GrPoint<F>& w, const std::vector<F>& xs) {
  Site<F> s;  // virtual regular site for the base point
  if (w.sites.size() > 1) throw Error(ErrorKind::InvalidArgument, "ansatz expects a single site");
  if (!w.sites.empty()) s = w.sites[0];
  if (!cmg::is_zero(s.lambda) || s.pole_order > 2) throw Error(ErrorKind::InvalidArgument, "site must be at 0, pole <= 2");
  const std::size_t r = w.r;
  std::vector<AnsatzReport<F>> out;
  for (const F& x : xs) {
    AnsatzReport<F> rep;
    rep.x = x;
    rep.A = Matrix<F>(r, r);
    rep.B = Matrix<F>(r, r);
    bool ok = true, unique = true;
    for (std::size_t i = 0; i < r && ok; ++i) {
      // unknowns (A_i, B_i): 2r entries; equations from the pole bound and the conditions
      std::vector<std::vector<F>> rows;
      std::vector<F> rhs;
      auto coeff_row = [&](int k, std::size_t a, std::vector<F>& lhs, F& constant, const F& weight) {
        const auto wts = ansatz_weights(k, x);
        if (a == i) constant += weight * wts[0];
        lhs[a] += weight * wts[1];
        lhs[r + a] += weight * wts[2];
      };
      for (int k = -2; k < -s.pole_order; ++k)
        for (std::size_t a = 0; a < r; ++a) {
          std::vector<F> lhs(2 * r);
          F constant{};
          coeff_row(k, a, lhs, constant, from_int<F>(1));
          rows.push_back(lhs);
          rhs.push_back(-constant);
        }
      for (const auto& c : s.conditions) {
        std::vector<F> lhs(2 * r);
        F constant{};
        for (int k = -s.pole_order; k <= s.window_top; ++k)
          for (std::size_t a = 0; a < r; ++a) coeff_row(k, a, lhs, constant, c[s.index(k, a, r)]);
        rows.push_back(lhs);
        rhs.push_back(-constant);
      }
      Matrix<F> m(rows.size(), 2 * r), b(rows.size(), 1);
      for (std::size_t e = 0; e < rows.size(); ++e) {
        for (std::size_t u = 0; u < 2 * r; ++u) m(e, u) = rows[e][u];
        b(e, 0) = rhs[e];
      }
      Matrix<F> sol;
      try {
        sol = solve(m, b);
      } catch (const Error&) {
        ok = false;
        break;
      }
      if (rank(m) < 2 * r) unique = false;
      for (std::size_t a = 0; a < r; ++a) {
        rep.A(i, a) = sol(a, 0);
        rep.B(i, a) = sol(r + a, 0);
      }
    }
    rep.status = !ok ? AnsatzStatus::NoSolution : (unique ? AnsatzStatus::Solvable : AnsatzStatus::NotUnique);
    out.push_back(rep);
  }
  return out;
}

/// -24 times the Schur function of (3, 2) in the KP times, over any ring T.
template <class T>
T tau32(const T& t1, const T& t2, const T& t3, const T& t4) {
  const T t1_2 = t1 * t1;
  const T t1_3 = t1_2 * t1;
  const T t1_5 = t1_3 * t1_2;
  return t1_5 - T(4) * t2 * t1_3 - T(12) * t3 * t1_2 + (T(12) * t2 * t2 + T(24) * t4) * t1 - T(24) * t2 * t3;
}

/// Hermite normal form of a polynomial module given by generator rows: echelon
/// rows with monic pivots and entries above each pivot reduced modulo it.
template <Scalar F>
std::vector<std::vector<Poly<F>>> poly_hnf(std::vector<std::vector<Poly<F>>> rows, std::size_t width) {
  std::vector<std::vector<Poly<F>>> out;
  std::vector<std::size_t> pivots;
  auto axpy = [](std::vector<Poly<F>>& a, const Poly<F>& q, const std::vector<Poly<F>>& b) {
    for (std::size_t j = 0; j < a.size(); ++j) a[j] = a[j] - q * b[j];
  };
  for (std::size_t col = 0; col < width; ++col) {
    while (true) {
      std::vector<std::size_t> live;
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i][col].is_zero()) live.push_back(i);
      if (live.empty()) break;
      std::size_t best = live[0];
      for (auto i : live)
        if (rows[i][col].degree() < rows[best][col].degree()) best = i;
      if (live.size() == 1) {
        std::vector<Poly<F>> piv = rows[best];
        const F inv = from_int<F>(1) / piv[col].lead();
        for (auto& e : piv) e = e * inv;
        rows.erase(rows.begin() + static_cast<long>(best));
        for (std::size_t k = 0; k < out.size(); ++k) axpy(out[k], divmod(out[k][col], piv[col]).first, piv);
        out.push_back(std::move(piv));
        pivots.push_back(col);
        break;
      }
      for (auto i : live)
        if (i != best) axpy(rows[i], divmod(rows[i][col], rows[best][col]).first, rows[best]);
    }
  }
  return out;
}

/// Membership of a polynomial row in the module spanned by an HNF basis.
template <Scalar F>
bool module_contains(const std::vector<std::vector<Poly<F>>>& hnf, std::vector<Poly<F>> v) {
  for (const auto& row : hnf) {
    std::size_t col = 0;
    while (col < row.size() && row[col].is_zero()) ++col;
    for (std::size_t j = 0; j < col; ++j)
      if (!v[j].is_zero()) return false;
    auto [q, rem] = divmod(v[col], row[col]);
    if (!rem.is_zero()) return false;
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = v[j] - q * row[j];
  }
  for (const auto& e : v)
    if (!e.is_zero()) return false;
  return true;
}

/// Bound-limited leading-coefficient lattice of D(C[z], W).
template <Scalar F>
struct LatticeResult {
  int order_bound = 0;
  int degree_bound = 0;
  Poly<F> denominator;                            // q: generators are hnf rows / q
  std::vector<std::vector<Poly<F>>> hnf;          // scaled by q
  std::vector<std::vector<RatFun<F>>> generators; // hnf / q
  std::size_t operator_space_dim = 0;
};

/// Linear equations expressing D.C[z] in W for D = (sum_k P_{a,k}(z)/q(z) d^k)_a with
/// deg P_{a,k} <= deg q + d, unknown index (a, k, i) -> (a*(K+1) + k)*(D+1) + i.
template <Scalar F>
Matrix<F> operator_membership_equations(const GrPoint<F>& w, int order_bound, int degree_bound) {
  const std::size_t r = w.r;
  const Poly<F> q = w.pole_polynomial();
  const int nd = q.degree() + degree_bound + 1;
  const std::size_t unknowns = r * static_cast<std::size_t>((order_bound + 1) * nd);
  auto uidx = [&](std::size_t a, int k, int i) {
    return (a * static_cast<std::size_t>(order_bound + 1) + static_cast<std::size_t>(k)) * static_cast<std::size_t>(nd) +
           static_cast<std::size_t>(i);
  };
  std::vector<std::vector<F>> eqs;
  for (const auto& s : w.sites) {
    const int pole = s.pole_order;  // multiplicity of lambda in q
    const int jmax = pole + s.pole_order + s.window_top + order_bound;
    const Poly<F> lin = Poly<F>::linear_root(s.lambda);
    for (int e = 0; e <= jmax; ++e) {
      // window of z^i d^k (z - lambda)^e / q at lambda, orders [-pole, top]
      std::vector<std::vector<F>> window(static_cast<std::size_t>(order_bound + 1) * static_cast<std::size_t>(nd));
      for (int k = 0; k <= order_bound && k <= e; ++k) {
        long long fall = 1;
        for (int t = 0; t < k; ++t) fall *= (e - t);
        Poly<F> pk(from_int<F>(static_cast<long>(fall)));
        for (int t = 0; t < e - k; ++t) pk = pk * lin;
        for (int i = 0; i < nd; ++i) {
          const RatFun<F> phi(Poly<F>::monomial(static_cast<std::size_t>(i)) * pk, q);
          window[static_cast<std::size_t>(k * nd + i)] = laurent_coefficients(phi, s.lambda, -pole, s.window_top);
        }
      }
      auto coefficient = [&](std::size_t a, int ord, std::vector<F>& row, const F& weight) {
        for (int k = 0; k <= order_bound; ++k)
          for (int i = 0; i < nd; ++i) {
            const auto& wv = window[static_cast<std::size_t>(k * nd + i)];
            if (wv.empty()) continue;
            row[uidx(a, k, i)] += weight * wv[static_cast<std::size_t>(ord + pole)];
          }
      };
      for (int ord = -pole; ord < -s.pole_order; ++ord)
        for (std::size_t a = 0; a < r; ++a) {
          std::vector<F> row(unknowns);
          coefficient(a, ord, row, from_int<F>(1));
          eqs.push_back(std::move(row));
        }
      for (const auto& c : s.conditions) {
        std::vector<F> row(unknowns);
        for (int ord = -s.pole_order; ord <= s.window_top; ++ord)
          for (std::size_t a = 0; a < r; ++a) {
            const F& wt = c[s.index(ord, a, r)];
            if (!cmg::is_zero(wt)) coefficient(a, ord, row, wt);
          }
        eqs.push_back(std::move(row));
      }
    }
  }
  Matrix<F> m(eqs.size(), unknowns);
  for (std::size_t e = 0; e < eqs.size(); ++e)
    for (std::size_t u = 0; u < unknowns; ++u) m(e, u) = eqs[e][u];
  return m;
}

template <Scalar F>
LatticeResult<F> lattice_basis(const GrPoint<F>& w, int order_bound, int degree_bound) {
  const std::size_t r = w.r;
  const Poly<F> q = w.pole_polynomial();
  const int nd = q.degree() + degree_bound + 1;
  const std::size_t K1 = static_cast<std::size_t>(order_bound + 1);
  const Matrix<F> eqs = operator_membership_equations(w, order_bound, degree_bound);
  const Matrix<F> sol = eqs.rows() ? nullspace(eqs) : identity<F>(eqs.cols());
  LatticeResult<F> res;
  res.order_bound = order_bound;
  res.degree_bound = degree_bound;
  res.denominator = q;
  res.operator_space_dim = sol.cols();
  auto uidx = [&](std::size_t a, std::size_t k, int i) { return (a * K1 + k) * static_cast<std::size_t>(nd) + static_cast<std::size_t>(i); };
  std::vector<std::vector<Poly<F>>> leads;
  for (std::size_t k = 0; k < K1; ++k) {
    // solutions whose coefficients above order k vanish
    Matrix<F> sub = sol;
    if (k + 1 < K1) {
      Matrix<F> hi((K1 - k - 1) * r * static_cast<std::size_t>(nd), sol.rows());
      std::size_t row = 0;
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t kk = k + 1; kk < K1; ++kk)
          for (int i = 0; i < nd; ++i) hi(row++, uidx(a, kk, i)) = from_int<F>(1);
      const Matrix<F> comb = nullspace(hi * sol);
      sub = sol * comb;
    }
    for (std::size_t c = 0; c < sub.cols(); ++c) {
      std::vector<Poly<F>> lead(r);
      bool nonzero = false;
      for (std::size_t a = 0; a < r; ++a) {
        std::vector<F> coeffs(static_cast<std::size_t>(nd));
        for (int i = 0; i < nd; ++i) coeffs[static_cast<std::size_t>(i)] = sub(uidx(a, k, i), c);
        lead[a] = Poly<F>(coeffs);
        nonzero = nonzero || !lead[a].is_zero();
      }
      if (nonzero) leads.push_back(std::move(lead));
    }
  }
  res.hnf = poly_hnf(leads, r);
  for (const auto& row : res.hnf) {
    std::vector<RatFun<F>> g;
    for (const auto& e : row) g.push_back(RatFun<F>(e, q));
    res.generators.push_back(std::move(g));
  }
  return res;
}

/// Basis of the elements P/q of W with deg P <= deg q + degree_bound.
template <Scalar F>
std::vector<std::vector<RatFun<F>>> bounded_basis(const GrPoint<F>& w, int degree_bound) {
  const std::size_t r = w.r;
  const Poly<F> q = w.pole_polynomial();
  const int nd = q.degree() + degree_bound + 1;
  std::vector<std::vector<F>> eqs;
  const std::size_t unknowns = r * static_cast<std::size_t>(nd);
  for (const auto& s : w.sites) {
    std::vector<std::vector<F>> window(static_cast<std::size_t>(nd));
    for (int i = 0; i < nd; ++i)
      window[static_cast<std::size_t>(i)] =
          laurent_coefficients(RatFun<F>(Poly<F>::monomial(static_cast<std::size_t>(i)), q), s.lambda,
                               -s.pole_order, s.window_top);
    for (const auto& c : s.conditions) {
      std::vector<F> row(unknowns);
      for (int ord = -s.pole_order; ord <= s.window_top; ++ord)
        for (std::size_t a = 0; a < r; ++a)
          for (int i = 0; i < nd; ++i)
            row[a * static_cast<std::size_t>(nd) + static_cast<std::size_t>(i)] +=
                c[s.index(ord, a, r)] * window[static_cast<std::size_t>(i)][static_cast<std::size_t>(ord + s.pole_order)];
      eqs.push_back(std::move(row));
    }
  }
  Matrix<F> m(eqs.size(), unknowns);
  for (std::size_t e = 0; e < eqs.size(); ++e)
    for (std::size_t u = 0; u < unknowns; ++u) m(e, u) = eqs[e][u];
  const Matrix<F> sol = eqs.empty() ? identity<F>(unknowns) : nullspace(m);
  std::vector<std::vector<RatFun<F>>> out;
  for (std::size_t c = 0; c < sol.cols(); ++c) {
    std::vector<RatFun<F>> f;
    for (std::size_t a = 0; a < r; ++a) {
      std::vector<F> coeffs(static_cast<std::size_t>(nd));
      for (int i = 0; i < nd; ++i) coeffs[static_cast<std::size_t>(i)] = sol(a * static_cast<std::size_t>(nd) + static_cast<std::size_t>(i), c);
      f.push_back(RatFun<F>(Poly<F>(coeffs), q));
    }
    out.push_back(std::move(f));
  }
  return out;
}

/// W = L_W within bounds: lattice generators lie in W and the bounded basis of W
/// lies in the lattice.
template <Scalar F>
bool equals_lattice(const GrPoint<F>& w, const LatticeResult<F>& lat, int degree_bound) {
  for (const auto& g : lat.generators)
    if (!member(g, w)) return false;
  for (const auto& f : bounded_basis(w, degree_bound)) {
    std::vector<Poly<F>> scaled;
    for (const auto& e : f) {
      const RatFun<F> s = e * RatFun<F>(lat.denominator);
      if (!s.is_polynomial()) return false;
      scaled.push_back(s.num() * (from_int<F>(1) / s.den().lead()));
    }
    if (!module_contains(lat.hnf, scaled)) return false;
  }
  return true;
}

}  // namespace cmg
