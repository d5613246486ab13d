#include "check_util.hpp"

namespace cmg {

using namespace checks;

namespace {

template <Scalar F>
Matrix<RatFun<F>> as_ratfun(const PolyMatrix<F>& g) {
  return g.map([](const Poly<F>& p) { return RatFun<F>(p); });
}

/// Every row of psi * g lies in W (full Laurent check, not only jets).
template <Scalar F>
bool rows_in(const Matrix<RatFun<F>>& psi, const PolyMatrix<F>& g, const GrPoint<F>& w) {
  const Matrix<RatFun<F>> prod = psi * as_ratfun(g);
  for (std::size_t i = 0; i < prod.rows(); ++i)
    if (!member(matrix_row(prod, i), w)) return false;
  return true;
}

template <Scalar F>
std::vector<Check> baker_validity(const RunConfig& cfg) {
  Rng rng(cfg.seed + 6);
  std::vector<Check> out;
  int attempts = 0;
  while (out.size() < 50 && attempts < 500) {
    ++attempts;
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    const auto r = static_cast<std::size_t>(rng.integer(1, 3));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    const PolyMatrix<F> g = random_loop_at<F>(rng, r, p.lambda, 2);
    const GrPoint<F> w = beta(p);
    const GammaJet<F> j = jet_of_polymat(g, p.lambda);
    Matrix<RatFun<F>> psi;
    try {
      psi = baker(w, j);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutsideBigCell) continue;  // resample the loop
      throw;
    }
    const std::string name = "Baker case " + std::to_string(out.size());
    json payload{{"point", point_payload(p)}, {"loop", polymatrix_to_json(g)}};
    out.push_back(guarded(name, payload, [&] {
      const bool jet_ok = rows_satisfy_at_jet(w, psi, j);
      const bool norm = is_normalized(psi);
      const bool full = rows_in(psi, g, w);
      const bool count = w.condition_count() == n * r;
      json pl = payload;
      pl["jet_level"] = jet_ok;
      pl["normalized"] = norm;
      pl["full_rows_in_W"] = full;
      pl["codimension_rn"] = count;
      if (!(jet_ok && norm && full)) pl["psi"] = ratmat_payload(psi);
      return make_check(name, jet_ok && norm && full && count, pl);
    }));
  }
  if (out.size() < 50) out.push_back(make_check("enough big-cell samples", false, json{{"attempts", attempts}}));
  // worked values
  const CMPoint<F> p1 = simple_point<F>(from_int<F>(0), from_int<F>(1));
  const auto psi1 = baker(beta(p1), GammaJet<F>::identity(p1.lambda, 1));
  Matrix<RatFun<F>> want(1, 1);
  want(0, 0) = RatFun<F>(Poly<F>({from_int<F>(-1), from_int<F>(1)}), Poly<F>::monomial(1));
  out.push_back(make_check("alpha = 1, identity jet gives 1 - 1/z", same_ratmat(psi1, want), json{{"psi", ratmat_payload(psi1)}}));
  bool outside = false;
  try {
    const CMPoint<F> p0 = simple_point<F>(from_int<F>(0), from_int<F>(0));
    (void)baker(beta(p0), GammaJet<F>::identity(p0.lambda, 1));
  } catch (const Error& e) {
    outside = e.kind() == ErrorKind::OutsideBigCell;
  }
  out.push_back(make_check("alpha = 0, identity jet is outside the big cell", outside));
  return out;
}

template <Scalar F>
std::vector<Check> equivariance(const RunConfig& cfg) {
  Rng rng(cfg.seed + 7);
  std::vector<Check> out;
  int attempts = 0;
  while (out.size() < 20 && attempts < 300) {
    ++attempts;
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    const auto r = static_cast<std::size_t>(rng.integer(1, 3));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    const PolyMatrix<F> gamma = random_unimodular<F>(rng, r, 3, 1);
    const PolyMatrix<F> g = random_loop_at<F>(rng, r, p.lambda, 2);
    const GammaJet<F> jg = jet_of_polymat(g, p.lambda);
    const GammaJet<F> jgamma = jet_of_polymat(gamma, p.lambda);
    Matrix<RatFun<F>> lhs, rhs;
    try {
      lhs = baker(beta(p), jet_mul(jg, jet_inverse(jgamma)));
      rhs = baker(beta(act(p, jgamma)), jg);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OutsideBigCell) continue;
      throw;
    }
    const std::string name = "equivariance case " + std::to_string(out.size());
    json payload{{"point", point_payload(p)}, {"gamma", polymatrix_to_json(gamma)}, {"loop", polymatrix_to_json(g)}};
    const bool ok = same_ratmat(lhs, rhs);
    if (!ok) {
      payload["lhs"] = ratmat_payload(lhs);
      payload["rhs"] = ratmat_payload(rhs);
    }
    out.push_back(make_check(name, ok, payload));
  }
  if (out.size() < 20) out.push_back(make_check("enough big-cell samples", false, json{{"attempts", attempts}}));
  return out;
}

template <Scalar F>
std::vector<Check> psi2(const RunConfig& cfg) {
  Rng rng(cfg.seed + 8);
  std::vector<Check> out;
  int attempts = 0;
  while (out.size() < 20 && attempts < 200) {
    ++attempts;
    const auto n = static_cast<std::size_t>(rng.integer(1, 6));
    const CMPoint<F> p = random_point<F>(rng, n, 1);
    const F x = rng.scalar<F>(5);
    const Quadruple<F> q = from_cd_coords(p);
    if (cmg::is_zero(big_cell_indicator(q, x))) continue;
    const std::string name = "determinant case " + std::to_string(out.size());
    json payload{{"point", point_payload(p)}, {"x", scalar_to_json(x)}};
    out.push_back(guarded(name, payload, [&] {
      const RatFun<F> d = psi2_det(q, x);
      const RatFun<F> s = stationary_baker(q, x)(0, 0);
      json pl = payload;
      if (!same_ratfun(d, s)) {
        pl["det_form"] = d.str();
        pl["baker"] = s.str();
      }
      return make_check(name, same_ratfun(d, s), pl);
    }));
  }
  bool rank_err = false;
  try {
    (void)psi2_det(from_cd_coords(random_point<F>(rng, 1, 2)), from_int<F>(1));
  } catch (const Error& e) {
    rank_err = e.kind() == ErrorKind::UnsupportedRank;
  }
  out.push_back(make_check("r = 2 is rejected", rank_err));
  return out;
}

template <Scalar F>
std::vector<Check> bispectral(const RunConfig& cfg) {
  Rng rng(cfg.seed + 9);
  std::vector<Check> out;
  for (int c = 0; c < 20; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    const auto r = static_cast<std::size_t>(rng.integer(1, 3));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    const std::string name = "bispectral case " + std::to_string(c);
    json payload{{"point", point_payload(p)}};
    out.push_back(guarded(name, payload, [&] {
      const Quadruple<F> q = from_cd_coords(p);
      const Quadruple<F> bq = bisp_involution(q);
      bool sym = true;
      int used = 0;
      for (long s = 1; used < 3 && s < 40; ++s) {
        const F x0 = ScalarTraits<F>::from_rational(s * 7 - 60, 3);
        if (!usable_sample(x0, q) || cmg::is_zero(big_cell_indicator(bq, x0))) continue;
        ++used;
        // psi_{b(W)}(x0, z) against psi_W(z, x0)^t
        sym = sym && same_ratmat(stationary_baker(bq, x0), stationary_baker_x(q, x0).transpose());
      }
      const bool inv = bisp_involution(bq) == q;
      const bool kops = kbw(q, cfg.depth) == kw(bq, cfg.depth);
      json pl = payload;
      pl["symmetry"] = sym;
      pl["involution"] = inv;
      pl["kbw_equals_kw_of_b"] = kops;
      return make_check(name, sym && inv && kops && used == 3, pl);
    }));
  }
  return out;
}

}  // namespace

std::vector<Check> check_baker_validity(const RunConfig& cfg) {
  return cfg.exact ? baker_validity<GaussQ>(cfg) : baker_validity<Cplx>(cfg);
}
std::vector<Check> check_equivariance(const RunConfig& cfg) {
  return cfg.exact ? equivariance<GaussQ>(cfg) : equivariance<Cplx>(cfg);
}
std::vector<Check> check_psi2(const RunConfig& cfg) { return cfg.exact ? psi2<GaussQ>(cfg) : psi2<Cplx>(cfg); }
std::vector<Check> check_bispectral(const RunConfig& cfg) {
  return cfg.exact ? bispectral<GaussQ>(cfg) : bispectral<Cplx>(cfg);
}

std::vector<Check> check_cells(const RunConfig& cfg) {
  using F = GaussQ;
  Rng rng(cfg.seed + 10);
  std::vector<Check> out;
  const F one = from_int<F>(1);
  auto xs = [] { return std::vector<F>{from_int<F>(0), from_int<F>(2), GaussQ::rational(-7, 3)}; };

  // B = I: (A, 0; I, -I) and psi = I - A^{-1} z^{-1} at the identity jet
  for (int c = 0; c < 5; ++c) {
    const auto r = static_cast<std::size_t>(rng.integer(1, 3));
    Matrix<F> a;
    do a = rng.matrix<F>(r, r); while (cmg::is_zero(determinant(a)));
    const CellPoint<F> cell{a, identity<F>(r)};
    const std::string name = "B = I case " + std::to_string(c);
    json payload{{"A", matrix_to_json(a)}};
    out.push_back(guarded(name, payload, [&] {
      const auto psi = cell_baker(cell, identity<F>(r), Matrix<F>(r, r));
      const auto want = Matrix<RatFun<F>>::identity(r, RatFun<F>(one)) -
                        constant_ratmat(inverse(a)).map([](const RatFun<F>& e) { return e * RatFun<F>(Poly<F>(from_int<F>(1)), Poly<F>::monomial(1)); });
      const Quadruple<F> q = cell_to_point(cell);
      bool quad = q.X == a && q.Y.is_zero() && q.v == identity<F>(r) && q.w == -identity<F>(r) && on_fiber(q);
      bool stat = true;
      for (const F& x : xs()) {
        if (cmg::is_zero(big_cell_indicator(q, x))) continue;
        stat = stat && same_ratmat(stationary_baker(q, x), cell_baker_stationary(cell, x));
      }
      // rows of psi * g lie in W for a random loop
      const PolyMatrix<F> g = random_loop_at<F>(rng, r, {from_int<F>(0)}, 2);
      bool rows = true;
      try {
        const auto psig = cell_baker(cell, evaluate(g, from_int<F>(0)), evaluate(derivative(g), from_int<F>(0))) * as_ratfun(g);
        for (std::size_t i = 0; i < r; ++i) rows = rows && member(matrix_row(psig, i), cell_grpoint(cell));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::OutsideBigCell) throw;
      }
      json pl = payload;
      pl["identity_jet_formula"] = psi == want;
      pl["quadruple"] = quad;
      pl["stationary_agrees"] = stat;
      pl["rows_in_W"] = rows;
      return make_check(name, psi == want && quad && stat && rows, pl);
    }));
  }
  // both branches agree when A and B are invertible
  for (int c = 0; c < 5; ++c) {
    const std::size_t r = 2;
    Matrix<F> a, b;
    do a = rng.matrix<F>(r, r); while (cmg::is_zero(determinant(a)));
    do b = rng.matrix<F>(r, r); while (cmg::is_zero(determinant(b)));
    const CellPoint<F> cell{a, b};
    const PolyMatrix<F> g = random_loop_at<F>(rng, r, {from_int<F>(0)}, 2);
    const std::string name = "branch agreement case " + std::to_string(c);
    json payload{{"A", matrix_to_json(a)}, {"B", matrix_to_json(b)}, {"loop", polymatrix_to_json(g)}};
    out.push_back(guarded(name, payload, [&] {
      const Matrix<F> g0 = evaluate(g, from_int<F>(0)), g1 = evaluate(derivative(g), from_int<F>(0));
      return make_check(name, cell_baker_a(cell, g0, g1) == cell_baker_b(cell, g0, g1), payload);
    }));
  }
  // rank one B = ab with ba != 0
  auto rank_one = [&](const Matrix<F>& a, const Matrix<F>& b, const std::string& name) {
    const CellPoint<F> cell{identity<F>(a.rows()), a * b};
    json payload{{"a", matrix_to_json(a)}, {"b", matrix_to_json(b)}};
    return guarded(name, payload, [&] {
      const Quadruple<F> q = cell_to_point(cell);
      const F alpha = one / (b * a)(0, 0);
      const bool quad = q.n == 1 && q.X(0, 0) == alpha && q.Y.is_zero() && q.w * q.v == -(a * b) * alpha && on_fiber(q);
      bool stat = true;
      for (const F& x : xs()) {
        if (cmg::is_zero(big_cell_indicator(q, x))) continue;
        stat = stat && same_ratmat(stationary_baker(q, x), cell_baker_stationary(cell, x));
      }
      // the simplified rank-one formula with beta(g) = b g0^{-1} g0' a
      const PolyMatrix<F> g = random_loop_at<F>(rng, a.rows(), {from_int<F>(0)}, 2);
      const Matrix<F> g0 = evaluate(g, from_int<F>(0)), g1 = evaluate(derivative(g), from_int<F>(0));
      const F bg = (b * inverse(g0) * g1 * a)(0, 0);
      bool simplified = true;
      if (!cmg::is_zero(one + bg)) {
        const Matrix<F> coef = g0 * (a * b) * inverse(g0) * (one / (one + bg));
        const auto want = Matrix<RatFun<F>>::identity(a.rows(), RatFun<F>(one)) -
                          constant_ratmat(coef).map([](const RatFun<F>& e) { return e * RatFun<F>(Poly<F>(from_int<F>(1)), Poly<F>::monomial(1)); });
        simplified = cell_baker(cell, g0, g1) == want;
      }
      json pl = payload;
      pl["quadruple"] = quad;
      pl["stationary_agrees"] = stat;
      pl["simplified_formula"] = simplified;
      return make_check(name, quad && stat && simplified, pl);
    });
  };
  out.push_back(rank_one(Matrix<F>{{one}, {from_int<F>(0)}}, Matrix<F>{{one, from_int<F>(0)}}, "a = (1,0), b = (1,0)"));
  for (int c = 0; c < 4; ++c) {
    const auto r = static_cast<std::size_t>(rng.integer(2, 3));
    Matrix<F> a, b;
    do {
      a = rng.matrix<F>(r, 1);
      b = rng.matrix<F>(1, r);
    } while (cmg::is_zero((b * a)(0, 0)));
    out.push_back(rank_one(a, b, "rank-one case " + std::to_string(c)));
  }
  // ba = 0: x-independent stationary Baker function, z-stable, not a beta image
  auto degenerate = [&](const Matrix<F>& a, const Matrix<F>& b, const std::string& name) {
    const CellPoint<F> cell{identity<F>(a.rows()), a * b};
    json payload{{"a", matrix_to_json(a)}, {"b", matrix_to_json(b)}};
    return guarded(name, payload, [&] {
      const auto want = Matrix<RatFun<F>>::identity(a.rows(), RatFun<F>(one)) -
                        constant_ratmat(Matrix<F>(a * b)).map([](const RatFun<F>& e) { return e * RatFun<F>(Poly<F>(from_int<F>(1)), Poly<F>::monomial(1)); });
      bool constant = true;
      for (const F& x : xs()) constant = constant && cell_baker_stationary(cell, x) == want;
      const bool stable = z_stable(cell_grpoint(cell));
      bool rejected = false;
      try {
        (void)cell_to_point(cell);
      } catch (const Error& e) {
        rejected = e.kind() == ErrorKind::NotInBetaImage;
      }
      json pl = payload;
      pl["x_independent"] = constant;
      pl["z_stable"] = stable;
      pl["not_in_beta_image"] = rejected;
      return make_check(name, constant && stable && rejected, pl);
    });
  };
  out.push_back(degenerate(Matrix<F>{{one}, {from_int<F>(0)}}, Matrix<F>{{from_int<F>(0), one}}, "a = (1,0), b = (0,1)"));
  for (int c = 0; c < 3; ++c) {
    const auto r = static_cast<std::size_t>(rng.integer(2, 3));
    Matrix<F> a, b;
    do {
      a = rng.matrix<F>(r, 1);
      b = rng.matrix<F>(1, r);
      // force b a = 0 through the last nonzero entry of a
      std::size_t piv = r;
      for (std::size_t k = 0; k < r; ++k)
        if (!cmg::is_zero(a(k, 0))) piv = k;
      if (piv == r) continue;
      F acc{};
      for (std::size_t k = 0; k < r; ++k)
        if (k != piv) acc += b(0, k) * a(k, 0);
      b(0, piv) = -acc / a(piv, 0);
    } while ((a * b).is_zero());
    out.push_back(degenerate(a, b, "ba = 0 case " + std::to_string(c)));
  }
  return out;
}

}  // namespace cmg
