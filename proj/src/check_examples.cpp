#include "cmg/algebra/mpoly.hpp"
#include "check_util.hpp"

namespace cmg {

using namespace checks;

namespace {

using F = GaussQ;
using MP = MPoly<F>;

/// Complete symmetric functions h_0 ... h_n from power sums via n h_n = sum p_k h_{n-k}.
std::vector<MP> complete_from_power_sums(const std::vector<MP>& p, std::size_t n) {
  std::vector<MP> h{MP(1L)};
  for (std::size_t m = 1; m <= n; ++m) {
    MP acc;
    for (std::size_t k = 1; k <= m; ++k) acc = acc + p[k] * h[m - k];
    h.push_back(acc * MP(GaussQ::rational(1, static_cast<long>(m))));
  }
  return h;
}

/// s_(3,2) = det [[h3, h4], [h1, h2]].
MP schur_32(const std::vector<MP>& p) {
  const auto h = complete_from_power_sums(p, 4);
  return h[3] * h[2] - h[4] * h[1];
}

}  // namespace

std::vector<Check> check_tau(const RunConfig&) {
  std::vector<Check> out;
  const MP t1 = MP::variable(0), t2 = MP::variable(1), t3 = MP::variable(2), t4 = MP::variable(3);
  const MP zero;
  {
    const MP v = tau32(zero, t2, zero, zero);
    out.push_back(make_check("tau(0, t2, 0, 0) = 0", v.is_zero(), json{{"value", v.str()}}));
  }
  {
    const MP v = tau32(t1, zero, t3, zero);
    const MP want = t1 * t1 * t1 * t1 * t1 - MP(12L) * t3 * t1 * t1;
    out.push_back(make_check("tau(t1, 0, t3, 0) = t1^5 - 12 t3 t1^2", v == want, json{{"value", v.str()}}));
  }
  {
    // KP times against power sums: p_k = -k t_k
    std::vector<MP> p{MP()};
    const MP ts[] = {t1, t2, t3, t4};
    for (long k = 1; k <= 4; ++k) p.push_back(MP(-k) * ts[k - 1]);
    const MP oracle = MP(-24L) * schur_32(p);
    const MP v = tau32(t1, t2, t3, t4);
    out.push_back(make_check("tau = -24 s_(3,2) (Jacobi-Trudi)", v == oracle,
                             json{{"tau", v.str()}, {"oracle", oracle.str()}}));
  }
  return out;
}

namespace {

/// The r = 2 point interleaving to span{zeta^k : k in {-3, -1, 2, 3, ...}}.
GrPoint<F> s_point() {
  GrPoint<F> w;
  w.r = 2;
  Site<F> s;
  s.lambda = F{};
  s.pole_order = 2;
  s.window_top = 0;
  auto unit = [&](int k, std::size_t a) {
    std::vector<F> c(6);
    c[s.index(k, a, 2)] = from_int<F>(1);
    return c;
  };
  s.conditions = {unit(-2, 0), unit(-1, 0), unit(0, 0), unit(0, 1)};
  w.sites.push_back(s);
  return w;
}

}  // namespace

std::vector<Check> check_outside_big_cell(const RunConfig& cfg) {
  std::vector<Check> out;
  const GrPoint<F> s = s_point();
  out.push_back(guarded("S point has no stationary Baker function", json::object(), [&] {
    std::vector<F> xs;
    for (long k = -4; k <= 5; ++k) xs.push_back(GaussQ::rational(2 * k + 1, 3));
    const auto reps = stationary_ansatz_order2(s, xs);
    json statuses = json::array();
    bool all = reps.size() == 10;
    for (const auto& r : reps) {
      statuses.push_back(json{{"x", scalar_to_json(r.x)}, {"status", ansatz_status_name(r.status)}});
      all = all && r.status == AnsatzStatus::NoSolution;
    }
    return make_check("S point has no stationary Baker function", all, json{{"reports", statuses}});
  }));
  out.push_back(guarded("S point interleaves to span{zeta^k : k in S}", json::object(), [&] {
    bool ok = true;
    json detail = json::object();
    for (int k = -4; k <= 6; ++k) {
      const RatFun<F> zeta_k = k >= 0 ? RatFun<F>(Poly<F>::monomial(static_cast<std::size_t>(k)))
                                      : RatFun<F>(Poly<F>(from_int<F>(1)), Poly<F>::monomial(static_cast<std::size_t>(-k)));
      const bool in_s = k == -3 || k == -1 || k >= 2;
      const bool mem = member(deinterleave(zeta_k), s);
      detail[std::to_string(k)] = mem;
      ok = ok && mem == in_s && interleave(deinterleave(zeta_k)) == zeta_k;
    }
    return make_check("S point interleaves to span{zeta^k : k in S}", ok, detail);
  }));
  Rng rng(cfg.seed + 15);
  for (int c = 0; c < 20; ++c) {
    const CMPoint<F> p =
        random_point<F>(rng, static_cast<std::size_t>(rng.integer(1, 4)), static_cast<std::size_t>(rng.integer(1, 3)));
    const std::string name = "beta image depends on x, case " + std::to_string(c);
    json payload{{"point", point_payload(p)}};
    out.push_back(guarded(name, payload, [&] {
      std::vector<F> xs;
      for (long k = 1; xs.size() < 2 && k < 50; ++k) {
        const F x = GaussQ::rational(5 * k - 17, 4);
        if (!cmg::is_zero(big_cell_indicator(p, x))) xs.push_back(x);
      }
      const bool differs = xs.size() == 2 && !(stationary_baker(p, xs[0]) == stationary_baker(p, xs[1]));
      return make_check(name, differs, payload);
    }));
  }
  return out;
}

}  // namespace cmg
