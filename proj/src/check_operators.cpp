#include "check_util.hpp"

namespace cmg {

using namespace checks;

namespace {

using F = GaussQ;
using RF = RatFun<F>;

F q_(long n, long d = 1) { return GaussQ::rational(n, d); }
RF z_pow(int k) { return RF(Poly<F>::monomial(static_cast<std::size_t>(k))); }
RF poly(std::vector<long> c) {
  std::vector<F> cs;
  for (long v : c) cs.push_back(q_(v));
  return RF(Poly<F>(cs));
}

using Hnf = std::vector<std::vector<Poly<F>>>;

json hnf_payload(const Hnf& h) {
  json out = json::array();
  for (const auto& row : h) {
    json r = json::array();
    for (const auto& e : row) r.push_back(e.str());
    out.push_back(r);
  }
  return out;
}

/// The displayed rank-2 example: f = (0, c) z^{-1} + (c, d) + O(z).
GrPoint<F> example_w() {
  const Matrix<F> a{{q_(1)}, {q_(0)}}, b{{q_(0), q_(1)}};
  return cell_grpoint(CellPoint<F>{identity<F>(2), -(a * b)});
}

/// zW: f(0) = (0, c) and f'(0) = (c, *).
GrPoint<F> example_v() {
  GrPoint<F> v;
  v.r = 2;
  Site<F> s;
  s.lambda = q_(0);
  s.pole_order = 0;
  s.window_top = 1;
  std::vector<F> c0(4), c1(4);
  c0[s.index(0, 0, 2)] = q_(1);
  c1[s.index(1, 0, 2)] = q_(1);
  c1[s.index(0, 1, 2)] = q_(-1);
  s.conditions = {c0, c1};
  v.sites.push_back(s);
  return v;
}

}  // namespace

std::vector<Check> check_exlatt(const RunConfig&) {
  std::vector<Check> out;
  const Poly<F> z = Poly<F>::monomial(1), one(q_(1)), zero;
  const Hnf expected{{z, one}, {zero, z}};
  out.push_back(guarded("V lattice", json::object(), [&] {
    const auto lat = lattice_basis(example_v(), 2, 3);
    json pl{{"hnf", hnf_payload(lat.hnf)}, {"denominator", lat.denominator.str()}};
    return make_check("V lattice", lat.hnf == expected && lat.denominator == one, pl);
  }));
  out.push_back(guarded("W lattice", json::object(), [&] {
    const auto lat = lattice_basis(example_w(), 2, 3);
    const std::vector<std::vector<RF>> gens{{RF(q_(1)), RF(Poly<F>(q_(1)), z)}, {RF(), RF(q_(1))}};
    json pl{{"hnf", hnf_payload(lat.hnf)}, {"denominator", lat.denominator.str()}};
    return make_check("W lattice", lat.generators == gens, pl);
  }));
  out.push_back(guarded("(z, 1) preserves V", json::object(), [&] {
    const MatPDO<F> d = row_op<F>({scalar_op<F>({{0, z_pow(1)}}, 1), scalar_op<F>({{0, RF(q_(1))}}, 1)}, 1);
    const MatPDO<F> e = row_op<F>({scalar_op<F>({{0, RF(q_(1))}}, 1), scalar_op<F>({{0, RF()}}, 1)}, 1);
    const bool in = d_membership_direct(d, example_v());
    const bool out_ = !d_membership_direct(e, example_v());
    return make_check("(z, 1) preserves V", in && out_, json{{"z_1", in}, {"1_0_rejected", out_}});
  }));
  return out;
}

std::vector<Check> check_latt_witness(const RunConfig& cfg) {
  Rng rng(cfg.seed + 12);
  std::vector<Check> out;
  for (int c = 0; c < 20; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 3));
    const auto r = static_cast<std::size_t>(rng.integer(1, 2));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    std::vector<Poly<F>> pv;
    for (std::size_t a = 0; a < r; ++a) pv.push_back(random_poly<F>(rng, static_cast<int>(rng.integer(0, 3))));
    if (std::all_of(pv.begin(), pv.end(), [](const Poly<F>& e) { return e.is_zero(); })) pv[0] = Poly<F>(q_(1));
    const std::string name = "witness case " + std::to_string(c);
    json payload{{"point", point_payload(p)}};
    for (const auto& e : pv) payload["p"].push_back(e.str());
    out.push_back(guarded(name, payload, [&] {
      const MatPDO<F> t = latt_witness(p, pv);
      const bool diff = t.min_order() >= 0 && t.max_order() == static_cast<int>(n);
      Matrix<RF> lead(r, 1);
      for (std::size_t a = 0; a < r; ++a) lead(a, 0) = RF(pv[a]);
      const bool leading = t.coeff(static_cast<int>(n)) == lead;
      const bool member = d_membership_direct(t.transpose(), beta(p));
      json pl = payload;
      pl["differential_of_order_n"] = diff;
      pl["leading_is_p"] = leading;
      pl["membership"] = member;
      if (!(diff && leading && member)) pl["T"] = t.str();
      return make_check(name, diff && leading && member, pl);
    }));
  }
  // the leading lattice of a beta image is C[z]^r
  for (int c = 0; c < 3; ++c) {
    const auto n = static_cast<std::size_t>(rng.integer(1, 2));
    const auto r = static_cast<std::size_t>(rng.integer(1, 2));
    const CMPoint<F> p = random_point<F>(rng, n, r);
    const std::string name = "beta lattice case " + std::to_string(c);
    json payload{{"point", point_payload(p)}};
    out.push_back(guarded(name, payload, [&] {
      const auto lat = lattice_basis(beta(p), static_cast<int>(n), 1);
      std::vector<std::vector<RF>> unit(r, std::vector<RF>(r));
      for (std::size_t a = 0; a < r; ++a) unit[a][a] = RF(q_(1));
      json pl = payload;
      pl["hnf"] = hnf_payload(lat.hnf);
      return make_check(name, lat.generators == unit, pl);
    }));
  }
  return out;
}

namespace {

struct Case {
  std::string label;
  GrPoint<F> v;
  MatPDO<F> d;
};

MatPDO<F> op(std::vector<std::pair<int, RF>> terms) { return scalar_op<F>(terms, 1); }

std::vector<Case> curated_library() {
  const RF z = z_pow(1), one(q_(1));
  const RF zm1 = poly({-1, 1});
  const GrPoint<F> v1 = beta(simple_point<F>(q_(0), q_(0)));
  const GrPoint<F> v2 = beta(simple_point<F>(q_(1), q_(2)));
  const GrPoint<F> v3 = beta(make_point<F>({q_(0), q_(1)}, {q_(1), q_(-1)}, Matrix<F>{{q_(1)}, {q_(1)}},
                                           Matrix<F>{{q_(-1), q_(-1)}}));
  const GrPoint<F> v4 = beta(make_point<F>({q_(0)}, {q_(1)}, Matrix<F>{{q_(1), q_(0)}}, Matrix<F>{{q_(-1)}, {q_(3)}}));
  auto row = [](MatPDO<F> a, MatPDO<F> b) { return row_op<F>({a, b}, 1); };
  return {
      {"z on V1", v1, op({{0, z}})},
      {"1 on V1", v1, op({{0, one}})},
      {"d on V1", v1, op({{1, one}})},
      {"z^2 on V1", v1, op({{0, z * z}})},
      {"z d on V1", v1, op({{1, z}})},
      {"z d - 1 on V1", v1, op({{1, z}, {0, RF(q_(-1))}})},
      {"z^2 d^2 + 3z on V1", v1, op({{2, z * z}, {0, RF(q_(3)) * z}})},
      {"(z-1) on V2", v2, op({{0, zm1}})},
      {"(z-1) d on V2", v2, op({{1, zm1}})},
      {"z on V2", v2, op({{0, z}})},
      {"(z-1)^2 d + (z-1) on V2", v2, op({{1, zm1 * zm1}, {0, zm1}})},
      {"z(z-1) on V3", v3, op({{0, z * zm1}})},
      {"z on V3", v3, op({{0, z}})},
      {"z(z-1) d + z^2(z-1) on V3", v3, op({{1, z * zm1}, {0, z * z * zm1}})},
      {"(3, 1) on V4", v4, row(op({{0, RF(q_(3))}}), op({{0, one}}))},
      {"(1, 0) on V4", v4, row(op({{0, one}}), op({}))},
      {"(z, z d) on V4", v4, row(op({{0, z}}), op({{1, z}}))},
      {"(3d, d) on V4", v4, row(op({{1, RF(q_(3))}}), op({{1, one}}))},
      {"(d, 0) on V4", v4, row(op({{1, one}}), op({}))},
      {"d on the base point", GrPoint<F>::base(1), op({{1, one}})},
  };
}

/// B(D) for polynomial or rational coefficients, with U = V.
MatPDO<F> b_image(const MatPDO<F>& d, const Quadruple<F>& u, int depth) {
  if (d.has_polynomial_coefficients()) {
    const auto res = b_map(d, u, u, depth);
    if (!res.reverified) throw Error(ErrorKind::NotDifferential, "b image failed re-verification");
    return res.image;
  }
  const int m = std::max(d.max_order(), 0);
  const ThetaReport<F> rep = theta_from_b(pdo_b_expanded(d, depth + m), u, u, depth);
  if (!rep.differential || !verify_intertwining(d, rep.theta, u, u))
    throw Error(ErrorKind::NotDifferential, "D is not in D(U, U)", not_differential_payload(rep));
  return rep.theta.transpose();
}

}  // namespace

std::vector<Check> check_three_equivalent(const RunConfig& cfg) {
  std::vector<Check> out;
  for (const auto& c : curated_library()) {
    json payload{{"case", c.label}, {"D", c.d.str('z')}};
    out.push_back(guarded(c.label, payload, [&] {
      const Quadruple<F> u = Quadruple<F>::base(1);
      const ThetaReport<F> rep = theta_report(c.d, u, quadruple_of(c.v), cfg.depth);
      const bool via_k = rep.differential && rep.intertwining;
      const bool via_jet = d_membership_direct(c.d, c.v);
      json pl = payload;
      pl["jet_membership"] = via_jet;
      pl["k_operator_differential"] = rep.differential;
      pl["intertwining"] = rep.intertwining;
      if (rep.differential) pl["theta"] = rep.theta.str();
      bool ok = via_k == via_jet && (!rep.differential || rep.intertwining);
      if (c.label == "z on V1") {
        const MatPDO<F> want = op({{1, RF(q_(1))}, {0, RF(Poly<F>(q_(1)), Poly<F>::monomial(1))}});
        ok = ok && rep.differential && rep.theta == want;
      }
      return make_check(c.label, ok, pl);
    }));
  }
  // the B map on D(U, U), U = beta(0, 0; 1, -1)
  const Quadruple<F> u = from_cd_coords(simple_point<F>(q_(0), q_(0)));
  const int depth = cfg.depth;
  const MatPDO<F> d1 = op({{0, z_pow(2)}});
  const MatPDO<F> d2 = op({{2, RF(q_(1))}, {0, RF(Poly<F>(q_(-2)), Poly<F>::monomial(2))}});
  out.push_back(guarded("B exchanges z^2 and d^2 - 2 z^{-2}", json::object(), [&] {
    const MatPDO<F> b1 = b_image(d1, u, depth), b2 = b_image(d2, u, depth);
    json pl{{"B(z^2)", b1.str('z')}, {"B(d^2 - 2/z^2)", b2.str('z')}};
    return make_check("B exchanges z^2 and d^2 - 2 z^{-2}", b1 == d2.truncated(depth) && b2 == d1.truncated(depth), pl);
  }));
  out.push_back(guarded("B is anti-multiplicative", json::object(), [&] {
    const MatPDO<F> b1 = b_image(d1, u, depth), b2 = b_image(d2, u, depth);
    bool ok = true;
    json pl = json::object();
    for (const auto& [lab, x, y, bx, by] : {std::tuple{"D1 D2", d1, d2, b1, b2}, std::tuple{"D2 D1", d2, d1, b2, b1}}) {
      const MatPDO<F> prod = pdo_mul(x, y, depth);
      const MatPDO<F> lhs = b_image(prod, u, depth);
      const MatPDO<F> rhs = pdo_mul(by, bx, depth);
      pl[lab] = json{{"B(product)", lhs.str('z')}, {"reversed product", rhs.str('z')}};
      ok = ok && lhs == rhs;
      // b o b = id where the image is polynomial
      ok = ok && b_image(lhs, u, depth) == prod.truncated(depth);
    }
    return make_check("B is anti-multiplicative", ok, pl);
  }));
  return out;
}

std::vector<Check> check_z_stable(const RunConfig& cfg) {
  std::vector<Check> out;
  const Matrix<F> e1{{q_(1)}, {q_(0)}}, e2row{{q_(0), q_(1)}};
  const Matrix<F> a3{{q_(1)}, {q_(1)}, {q_(0)}}, b3{{q_(1), q_(-1), q_(2)}};
  std::vector<std::pair<std::string, GrPoint<F>>> stable{
      {"base r = 1", GrPoint<F>::base(1)},
      {"base r = 2", GrPoint<F>::base(2)},
      {"cell ab, a = (1,0), b = (0,1)", cell_grpoint(CellPoint<F>{identity<F>(2), e1 * e2row})},
      {"cell ab, r = 3", cell_grpoint(CellPoint<F>{identity<F>(3), a3 * b3})},
      {"rank-two example W", example_w()},
      {"rank-two example zW", example_v()},
  };
  for (const auto& [label, w] : stable) {
    json payload{{"point", label}};
    out.push_back(guarded(label, payload, [&] {
      const bool zs = z_stable(w);
      const auto lat = lattice_basis(w, 2, 3);
      const bool eq = equals_lattice(w, lat, 3);
      json pl = payload;
      pl["z_stable"] = zs;
      pl["equals_lattice"] = eq;
      pl["hnf"] = hnf_payload(lat.hnf);
      return make_check(label, zs && eq, pl);
    }));
  }
  // beta images with n >= 1 are never z-stable
  Rng rng(cfg.seed + 16);
  bool none = true;
  json seen = json::array();
  for (int c = 0; c < 30; ++c) {
    const CMPoint<F> p =
        random_point<F>(rng, static_cast<std::size_t>(rng.integer(1, 4)), static_cast<std::size_t>(rng.integer(1, 3)));
    if (z_stable(beta(p))) {
      none = false;
      seen.push_back(point_payload(p));
    }
  }
  out.push_back(make_check("no z-stable beta image with n >= 1", none, json{{"z_stable_points", seen}}));
  return out;
}

}  // namespace cmg
