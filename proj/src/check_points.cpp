#include <cmath>

#include "check_util.hpp"
#include "cmg/flows.hpp"

namespace cmg {

using namespace checks;

namespace {

template <Scalar F>
std::vector<Check> moment_fiber(const RunConfig& cfg) {
  Rng rng(cfg.seed);
  std::vector<Check> out;
  for (int c = 0; c < 200; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(0, 5));
    const auto r = static_cast<std::size_t>(rng.integer(1, 3));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    json payload{{"case", c}, {"point", point_payload(p)}};
    out.push_back(guarded("moment case " + std::to_string(c), payload, [&] {
      const Quadruple<F> q = from_cd_coords(p);
      bool ok = on_fiber(q);
      // gauge sanity: v_i w_i = -1 on the chart
      for (std::size_t i = 0; i < n; ++i) ok = ok && scalar_equal((p.v(i) * p.w(i))(0, 0), from_int<F>(-1));
      json pl = payload;
      if (!ok) pl["residual"] = matrix_str<F>(moment_residual(q), [](const F& a) { return scalar_str(a); });
      return make_check("moment case " + std::to_string(c), ok, pl);
    }));
  }
  return out;
}

double max_rel_diff(const CMPoint<Cplx>& a, const CMPoint<Cplx>& b) {
  double worst = 0;
  auto upd = [&worst](Cplx x, Cplx y) { worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(y))); };
  if (a.n != b.n || a.r != b.r) return INFINITY;
  for (std::size_t i = 0; i < a.n; ++i) {
    upd(a.lambda[i], b.lambda[i]);
    upd(a.alpha[i], b.alpha[i]);
  }
  for (std::size_t k = 0; k < a.vrow.data().size(); ++k) upd(a.vrow.data()[k], b.vrow.data()[k]);
  for (std::size_t k = 0; k < a.wcol.data().size(); ++k) upd(a.wcol.data()[k], b.wcol.data()[k]);
  return worst;
}

/// max_i |v_i| |w_i|: since v_i w_i = -1 this measures the cancellation in the gauge-fixed representation.
double gauge_condition(const CMPoint<Cplx>& p) {
  double worst = 1;
  for (std::size_t i = 0; i < p.n; ++i) {
    double nv = 0, nw = 0;
    for (std::size_t a = 0; a < p.r; ++a) {
      nv += std::norm(p.vrow(i, a));
      nw += std::norm(p.wcol(a, i));
    }
    worst = std::max(worst, std::sqrt(nv * nw));
  }
  return worst;
}

Matrix<Cplx> random_numeric_matrix(Rng& rng, std::size_t r, double scale) {
  Matrix<Cplx> m(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) m(i, j) = Cplx(rng.real(-scale, scale), rng.real(-scale, scale));
  return m;
}

/// Random real-valued point in a random frame, as a numeric quadruple.
Quadruple<Cplx> numeric_frame_point(Rng& rng, std::size_t n, std::size_t r) {
  const CMPoint<GaussQ> p = random_point<GaussQ>(rng, n, r, 2);
  Quadruple<Cplx> q = convert<Cplx>(from_cd_coords(p));
  while (true) {
    Matrix<Cplx> g = random_numeric_matrix(rng, n, 1.0) + identity<Cplx>(n) * Cplx(2.0);
    if (std::abs(determinant(g)) > 0.1) return gl_conjugate(g, q);
  }
}

/// Nilpotent alpha = a b with b a = 0.
template <Scalar F>
Matrix<F> random_nilpotent(Rng& rng, std::size_t r) {
  while (true) {
    Matrix<F> a = rng.matrix<F>(r, 1, 2);
    Matrix<F> b = rng.matrix<F>(1, r, 2);
    // project b onto the complement of a's pairing
    std::size_t piv = 0;
    while (piv < r && cmg::is_zero(a(piv, 0))) ++piv;
    if (piv == r) continue;
    F acc{};
    for (std::size_t k = 0; k < r; ++k)
      if (k != piv) acc += b(0, k) * a(k, 0);
    b(0, piv) = -acc / a(piv, 0);
    Matrix<F> al = a * b;
    if (!al.is_zero()) return al;
  }
}

}  // namespace

std::vector<Check> check_moment_fiber(const RunConfig& cfg) {
  return cfg.exact ? moment_fiber<GaussQ>(cfg) : moment_fiber<Cplx>(cfg);
}

std::vector<Check> check_poisson(const RunConfig& cfg) {
  Rng rng(cfg.seed + 2);
  std::vector<Check> out;
  for (int c = 0; c < 20; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    const auto r = static_cast<std::size_t>(rng.integer(1, 2));
    const Quadruple<Cplx> q = numeric_frame_point(rng, n, r);
    const Matrix<Cplx> a = random_numeric_matrix(rng, r, 1.0);
    const Matrix<Cplx> b = random_numeric_matrix(rng, r, 1.0);
    double worst = 0;
    json bad;
    for (unsigned k = 0; k <= 3; ++k)
      for (unsigned l = 0; l <= 3; ++l) {
        const Cplx lhs = poisson_bracket(q, k, a, l, b);
        const Cplx rhs = hamiltonian(q, k + l, commutator(a, b));
        const double err = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        if (err > worst) {
          worst = err;
          bad = json{{"k", k}, {"l", l}, {"bracket", scalar_to_json(lhs)}, {"expected", scalar_to_json(rhs)}};
        }
      }
    json payload{{"case", c}, {"n", n}, {"r", r}, {"max_rel_error", worst}, {"worst", bad}, {"point", quadruple_to_json(q)}};
    out.push_back(make_check("Poisson case " + std::to_string(c), worst <= 1e-6, payload));
  }
  return out;
}

std::vector<Check> check_flows(const RunConfig& cfg) {
  Rng rng(cfg.seed + 3);
  std::vector<Check> out;
  for (int c = 0; c < 20; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    const auto r = static_cast<std::size_t>(rng.integer(1, 2));
    const CMPoint<Cplx> p = convert<Cplx>(random_point<GaussQ>(rng, n, r, 2));
    const auto k = static_cast<unsigned>(rng.integer(0, 3));
    // keep the gauge exponent alpha lambda^k t of order one: for exponents near 25 the
    // trajectory has |v||w| ~ 1e12 against vw = -1 and no double-precision integrator holds 1e-8
    double top = 1;
    for (const auto& l : p.lambda) top = std::max(top, std::pow(std::abs(l), static_cast<double>(k)));
    const Matrix<Cplx> alpha = random_numeric_matrix(rng, r, 0.5 / top);
    const Cplx t(rng.real(-1, 1), 0.0);
    json payload{{"case", c}, {"k", k}, {"t", t.real()}, {"alpha", matrix_to_json(alpha)}, {"point", cmpoint_to_json(p)}};
    out.push_back(guarded("RK4 case " + std::to_string(c), payload, [&] {
      const CMPoint<Cplx> closed = flow_closed(p, k, alpha, t);
      const Quadruple<Cplx> integ = flow_numeric(from_cd_coords(p), k, alpha, t, 10000);
      const CMPoint<Cplx> num = canonicalize(integ);
      const double err = max_rel_diff(closed, num);
      json pl = payload;
      pl["max_rel_error"] = err;
      return make_check("RK4 case " + std::to_string(c), err <= 1e-8, pl);
    }));
  }
  for (int c = 0; c < 10; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    const auto r = static_cast<std::size_t>(rng.integer(2, 3));
    const CMPoint<GaussQ> p = random_point<GaussQ>(rng, n, r);
    const auto k = static_cast<unsigned>(rng.integer(0, 3));
    const Matrix<GaussQ> alpha = random_nilpotent<GaussQ>(rng, r);
    const GaussQ t = GaussQ::rational(rng.integer(-6, 6), 5);
    json payload{{"case", c}, {"k", k}, {"t", scalar_to_json(t)}, {"alpha", matrix_to_json(alpha)}, {"point", cmpoint_to_json(p)}};
    out.push_back(guarded("nilpotent case " + std::to_string(c), payload, [&] {
      const Quadruple<GaussQ> q = from_cd_coords(p);
      const Quadruple<GaussQ> moved = flow_nilpotent(q, k, alpha, t);
      const bool fiber = on_fiber(moved);
      const bool agree = canonicalize(moved) == flow_closed(p, k, alpha, t);
      // the nilpotent formula needs no diagonal frame
      const Quadruple<GaussQ> framed = random_frame(rng, q);
      const bool framed_ok = on_fiber(flow_nilpotent(framed, k, alpha, t));
      json pl = payload;
      pl["on_fiber"] = fiber;
      pl["agrees_with_closed_form"] = agree;
      pl["framed_on_fiber"] = framed_ok;
      return make_check("nilpotent case " + std::to_string(c), fiber && agree && framed_ok, pl);
    }));
  }
  return out;
}

namespace {

template <Scalar F>
std::vector<Check> action_law(const RunConfig& cfg) {
  const int sign = cfg.inject == "gform-sign" ? -1 : 1;
  Rng rng(cfg.seed + 4);
  std::vector<Check> out;
  {
    const CMPoint<F> p = simple_point<F>(from_int<F>(0), from_int<F>(2));
    GammaJet<F> j;
    j.lambdas = {from_int<F>(0)};
    j.values = {Matrix<F>{{from_int<F>(1)}}};
    j.derivs = {Matrix<F>{{from_int<F>(3)}}};
    json payload{{"point", point_payload(p)}, {"jet", jet_to_json(j)}, {"expected_alpha", scalar_to_json(from_int<F>(-1))}};
    out.push_back(guarded("worked example: jet (1,3) at alpha = 2", payload, [&] {
      const CMPoint<F> moved = act_signed(p, j, sign);
      json pl = payload;
      pl["alpha"] = scalar_to_json(moved.alpha[0]);
      return make_check("worked example: jet (1,3) at alpha = 2", scalar_equal(moved.alpha[0], from_int<F>(-1)), pl);
    }));
  }
  for (int c = 0; c < 50; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    const auto r = static_cast<std::size_t>(rng.integer(1, 3));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    const PolyMatrix<F> g1 = random_unimodular<F>(rng, r, 3, 2);
    const PolyMatrix<F> g2 = random_unimodular<F>(rng, r, 3, 2);
    json payload{{"case", c}, {"point", point_payload(p)}, {"gamma1", polymatrix_to_json(g1)}, {"gamma2", polymatrix_to_json(g2)}};
    out.push_back(guarded("action case " + std::to_string(c), payload, [&] {
      const GammaJet<F> j1 = jet_of_polymat(g1, p.lambda);
      const GammaJet<F> j2 = jet_of_polymat(g2, p.lambda);
      const CMPoint<F> two_steps = act_signed(act_signed(p, j1, sign), j2, sign);
      const CMPoint<F> one_step = act_signed(p, jet_mul(j1, j2), sign);
      bool norm = true, same = true;
      json pl = payload;
      if constexpr (ScalarTraits<F>::exact) {
        for (std::size_t i = 0; i < n; ++i) norm = norm && scalar_equal((two_steps.v(i) * two_steps.w(i))(0, 0), from_int<F>(-1));
        same = two_steps == one_step;
      } else {
        // rounding in v_i w_i is of order eps |v_i| |w_i|, which the jets can push to 1e13
        const double kappa = std::max(gauge_condition(two_steps), gauge_condition(one_step));
        const double tol = numeric_tolerance() * kappa;
        for (std::size_t i = 0; i < n; ++i) norm = norm && std::abs((two_steps.v(i) * two_steps.w(i))(0, 0) + 1.0) <= tol;
        same = max_rel_diff(two_steps, one_step) <= tol;
        pl["gauge_condition"] = kappa;
      }
      const bool fiber = on_fiber(from_cd_coords(two_steps));
      pl["composition"] = same;
      pl["vw_normalized"] = norm;
      pl["on_fiber"] = fiber;
      return make_check("action case " + std::to_string(c), same && norm && fiber, pl);
    }));
  }
  // the trajectory of exp(alpha z^k t) for nilpotent alpha
  for (int c = 0; c < 10; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    const auto r = static_cast<std::size_t>(rng.integer(2, 3));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    const auto k = static_cast<unsigned>(rng.integer(0, 3));
    const Matrix<F> alpha = random_nilpotent<F>(rng, r);
    const F t = ScalarTraits<F>::from_rational(rng.integer(-5, 5), 3);
    json payload{{"case", c}, {"k", k}, {"t", scalar_to_json(t)}, {"alpha", matrix_to_json(alpha)}, {"point", point_payload(p)}};
    out.push_back(guarded("trajectory case " + std::to_string(c), payload, [&] {
      GammaJet<F> j;
      j.lambdas = p.lambda;
      for (const F& l : p.lambda) {
        j.values.push_back(identity<F>(r) + alpha * (scalar_power(l, k) * t));
        const F d = k == 0 ? F{} : from_int<F>(static_cast<long>(k)) * scalar_power(l, k - 1) * t;
        j.derivs.push_back(alpha * d);
      }
      const bool ok = act_signed(p, j, sign) == flow_closed(p, k, alpha, t);
      return make_check("trajectory case " + std::to_string(c), ok, payload);
    }));
  }
  return out;
}

template <Scalar F>
std::vector<Check> scalar_subgroup(const RunConfig& cfg) {
  Rng rng(cfg.seed + 5);
  std::vector<Check> out;
  for (int c = 0; c < 20; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 4));
    const auto r = static_cast<std::size_t>(rng.integer(1, 3));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    const F x = rng.scalar<F>(4);
    const Poly<F> pz = random_poly<F>(rng, static_cast<int>(rng.integer(1, 4)));
    json payload{{"case", c}, {"point", point_payload(p)}, {"x", scalar_to_json(x)}, {"p", poly_to_json(pz)}};
    out.push_back(guarded("scalar case " + std::to_string(c), payload, [&] {
      const Quadruple<F> q = from_cd_coords(p);
      // p(z) = x z translates X by -x I
      const Quadruple<F> tx = flow_scalar(q, Poly<F>({F{}, x}));
      const bool xx = tx.X == q.X - identity<F>(n) * x && tx.Y == q.Y && tx.v == q.v && tx.w == q.w;
      // general p: X - p'(Y), compared with the jet action of e^{p(z)} (value rescaled to 1)
      const Quadruple<F> tp = flow_scalar(q, pz);
      GammaJet<F> j;
      j.lambdas = p.lambda;
      const Poly<F> dp = pz.derivative();
      for (const F& l : p.lambda) {
        j.values.push_back(identity<F>(r));
        j.derivs.push_back(identity<F>(r) * dp(l));
      }
      const bool gsc = canonicalize(tp) == act(p, j) && on_fiber(tp);
      // in an arbitrary frame the formula is conjugation-equivariant
      const Quadruple<F> framed = random_frame(rng, q);
      const bool framed_ok = on_fiber(flow_scalar(framed, pz));
      json pl = payload;
      pl["translation"] = xx;
      pl["matches_action"] = gsc;
      pl["framed_on_fiber"] = framed_ok;
      return make_check("scalar case " + std::to_string(c), xx && gsc && framed_ok, pl);
    }));
  }
  // numeric cross-check with the true exponential jet
  for (int c = 0; c < 5; ++c) {
    const CMPoint<Cplx> p = convert<Cplx>(random_point<GaussQ>(rng, 2, 2, 2));
    const Poly<Cplx> pz({Cplx(0.3, 0.1), Cplx(-0.5, 0.0), Cplx(0.25, 0.2)});
    json payload{{"case", c}, {"point", cmpoint_to_json(p)}};
    out.push_back(guarded("exponential jet case " + std::to_string(c), payload, [&] {
      GammaJet<Cplx> j;
      j.lambdas = p.lambda;
      for (const Cplx& l : p.lambda) {
        const Cplx e = std::exp(pz(l));
        j.values.push_back(identity<Cplx>(2) * e);
        j.derivs.push_back(identity<Cplx>(2) * (pz.derivative()(l) * e));
      }
      const CMPoint<Cplx> a = act(p, j);
      const CMPoint<Cplx> b = canonicalize(flow_scalar(from_cd_coords(p), pz));
      const double err = max_rel_diff(a, b);
      json pl = payload;
      pl["max_rel_error"] = err;
      return make_check("exponential jet case " + std::to_string(c), err <= 1e-9, pl);
    }));
  }
  return out;
}

}  // namespace

std::vector<Check> check_action(const RunConfig& cfg) {
  return cfg.exact ? action_law<GaussQ>(cfg) : action_law<Cplx>(cfg);
}

std::vector<Check> check_scalar_subgroup(const RunConfig& cfg) {
  return cfg.exact ? scalar_subgroup<GaussQ>(cfg) : scalar_subgroup<Cplx>(cfg);
}

}  // namespace cmg
