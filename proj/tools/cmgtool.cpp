#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cmg/flows.hpp"
#include "cmg/opcalc.hpp"
#include "cmg/serialize.hpp"
#include "cmg/verify.hpp"

using namespace cmg;

namespace {

constexpr int kFail = 1;
constexpr int kUsage = 2;

/// Inline JSON text, @path, or - for stdin.
json read_json_arg(const std::string& arg, const std::string& what) {
  std::string text;
  if (arg == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else if (!arg.empty() && arg[0] == '@') {
    std::ifstream in(arg.substr(1));
    if (!in) throw Error(ErrorKind::ParseError, "cannot open " + arg.substr(1));
    text.assign(std::istreambuf_iterator<char>(in), {});
  } else {
    text = arg;
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, what + ": " + e.what());
  }
}

/// A scalar from JSON (1, [1, 3], [re_n, re_d, im_n, im_d]) or a plain "p/q" / decimal string.
template <Scalar F>
F scalar_arg(const std::string& s, const std::string& what) {
  try {
    return scalar_from_json<F>(json::parse(s), what);
  } catch (const json::parse_error&) {
  }
  if constexpr (ScalarTraits<F>::exact) {
    try {
      mpq_class q(s);
      q.canonicalize();
      return GaussQ(q);
    } catch (const std::invalid_argument&) {
      throw Error(ErrorKind::ParseError, what + ": not a rational number");
    }
  } else {
    try {
      return Cplx(std::stod(s), 0.0);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ParseError, what + ": not a number");
    }
  }
}

template <Scalar F>
std::vector<F> scalar_list(const std::vector<std::string>& xs, const std::string& what) {
  std::vector<F> out;
  for (const auto& x : xs) out.push_back(scalar_arg<F>(x, what));
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

bool is_cmpoint(const json& j) { return j.is_object() && j.contains("lambda"); }

bool exact_mode(const json& payload, const std::string& mode_flag) {
  if (!mode_flag.empty()) return mode_flag == "exact";
  return payload.value("mode", std::string("exact")) == "exact";
}

struct Opts {
  std::string mode;  // empty: take from the payload, default exact
  std::string point, jet, grpoint, op, source, alpha;
  std::string sub;
  std::string x, t;
  std::vector<std::string> zs, xs, times;
  unsigned k = 1;
  int steps = 0;
  int depth = 8;
  int order_bound = 2, degree_bound = 3;
  bool psi2 = false;
};

template <Scalar F>
json point_cmd(const Opts& o, const json& in) {
  if (o.sub == "new") {
    const CMPoint<F> p = cmpoint_from_json<F>(in);
    return quadruple_to_json(from_cd_coords(p));
  }
  const Quadruple<F> q = any_point_from_json<F>(in);
  if (o.sub == "canon") return cmpoint_to_json(canonicalize(q));
  if (o.sub == "moment") return json{{"residual", matrix_to_json(moment_residual(q))}, {"on_fiber", on_fiber(q)}};
  if (o.sub == "b") return quadruple_to_json(bisp_involution(q));
  if (o.sub == "embed") {
    if (is_cmpoint(in)) return cmpoint_to_json(embed_rank(cmpoint_from_json<F>(in)));
    return quadruple_to_json(embed_rank(q));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown point subcommand '" + o.sub + "'");
}

template <Scalar F>
json flow_cmd(const Opts& o, const json& in) {
  const CMPoint<F> p = is_cmpoint(in) ? cmpoint_from_json<F>(in) : canonicalize(quadruple_from_json<F>(in));
  const Matrix<F> alpha = square_from_json<F>(read_json_arg(o.alpha, "alpha"), "alpha");
  const F t = scalar_arg<F>(o.t, "t");
  if (o.steps > 0) {
    if constexpr (ScalarTraits<F>::exact) {
      throw Error(ErrorKind::InvalidArgument, "--steps integrates numerically; use --mode numeric");
    } else {
      const Quadruple<Cplx> q = flow_numeric(from_cd_coords(p), o.k, alpha, t, o.steps);
      return json{{"method", "rk4"}, {"point", cmpoint_to_json(canonicalize(q))}};
    }
  }
  return json{{"method", "closed"}, {"point", cmpoint_to_json(flow_closed(p, o.k, alpha, t))}};
}

template <Scalar F>
json baker_cmd(const Opts& o, const json& in) {
  Matrix<RatFun<F>> psi;
  std::string route;
  if (!o.jet.empty()) {
    const CMPoint<F> p = is_cmpoint(in) ? cmpoint_from_json<F>(in) : canonicalize(quadruple_from_json<F>(in));
    psi = baker(beta(p), jet_from_json<F>(read_json_arg(o.jet, "jet")));
    route = "jet";
  } else {
    if (o.x.empty()) throw Error(ErrorKind::InvalidArgument, "baker needs --x or --jet");
    const Quadruple<F> q = any_point_from_json<F>(in);
    const F x = scalar_arg<F>(o.x, "x");
    if (o.psi2) {
      psi = Matrix<RatFun<F>>(1, 1);
      psi(0, 0) = psi2_det(q, x);
      route = "determinant";
    } else {
      psi = stationary_baker(q, x);
      route = "stationary";
    }
  }
  json out{{"route", route}, {"psi", ratmatrix_to_json(psi)}};
  if (!o.zs.empty()) {
    json samples = json::array();
    for (const F& z : scalar_list<F>(o.zs, "z")) {
      Matrix<F> val(psi.rows(), psi.cols());
      for (std::size_t i = 0; i < psi.rows(); ++i)
        for (std::size_t j = 0; j < psi.cols(); ++j) val(i, j) = psi(i, j)(z);
      samples.push_back(json{{"z", scalar_to_json(z)}, {"value", matrix_to_json(val)}});
    }
    out["samples"] = samples;
  }
  return out;
}

json tau_cmd(const Opts& o) {
  if (o.times.size() != 4) throw Error(ErrorKind::InvalidArgument, "tau needs exactly four times t1 t2 t3 t4");
  const auto t = scalar_list<GaussQ>(o.times, "t");
  return json{{"tau", scalar_to_json(tau32(t[0], t[1], t[2], t[3]))}};
}

json lattice_cmd(const Opts& o, const json& in) {
  const GrPoint<GaussQ> w = grpoint_from_json<GaussQ>(in);
  const auto lat = lattice_basis(w, o.order_bound, o.degree_bound);
  json hnf = json::array(), gens = json::array();
  for (const auto& row : lat.hnf) {
    json r = json::array();
    for (const auto& e : row) r.push_back(poly_to_json(e));
    hnf.push_back(r);
  }
  for (const auto& row : lat.generators) {
    json r = json::array();
    for (const auto& e : row) r.push_back(ratfun_to_json(e));
    gens.push_back(r);
  }
  const bool stable = z_stable(w);
  json out{{"order_bound", lat.order_bound}, {"degree_bound", lat.degree_bound},
           {"denominator", poly_to_json(lat.denominator)}, {"hnf", hnf},
           {"generators", gens}, {"operator_space_dim", lat.operator_space_dim},
           {"z_stable", stable}};
  if (stable) out["equals_lattice"] = equals_lattice(w, lat, o.degree_bound);
  return out;
}

json ansatz_cmd(const Opts& o, const json& in) {
  const GrPoint<GaussQ> w = grpoint_from_json<GaussQ>(in);
  json reps = json::array();
  for (const auto& r : stationary_ansatz_order2(w, scalar_list<GaussQ>(o.xs, "x"))) {
    json e{{"x", scalar_to_json(r.x)}, {"status", ansatz_status_name(r.status)}};
    if (r.status != AnsatzStatus::NoSolution) {
      e["A"] = matrix_to_json(r.A);
      e["B"] = matrix_to_json(r.B);
    }
    reps.push_back(e);
  }
  return json{{"reports", reps}};
}

json bispect_cmd(const Opts& o, const json& in) {
  const Quadruple<GaussQ> v = any_point_from_json<GaussQ>(in);
  const MatPDO<GaussQ> d = pdo_from_json<GaussQ>(read_json_arg(o.op, "op"), "op", o.depth);
  const Quadruple<GaussQ> u =
      o.source.empty() ? Quadruple<GaussQ>::base(d.rows()) : any_point_from_json<GaussQ>(read_json_arg(o.source, "source"), "source");
  const ThetaReport<GaussQ> rep = theta_report(d, u, v, o.depth);
  json out{{"differential", rep.differential}, {"intertwining", rep.intertwining}, {"depth", o.depth}};
  if (rep.differential) {
    out["theta"] = pdo_to_json(rep.theta);
    out["theta_text"] = rep.theta.str('x');
    if (rep.intertwining) {
      const auto bm = b_map(d, u, v, o.depth);
      out["b_image"] = pdo_to_json(bm.image);
      out["b_reverified"] = bm.reverified;
    }
  } else {
    out["bad_order"] = rep.bad_order;
    out["bad_coefficient"] = ratmatrix_to_json(rep.bad_coeff);
  }
  return out;
}

int report_error(const Error& e) {
  json j{{"error", error_kind_name(e.kind())}, {"message", e.what()}};
  if (!e.payload().empty()) {
    try {
      j["payload"] = json::parse(e.payload());
    } catch (const json::parse_error&) {
      j["payload"] = e.payload();
    }
  }
  std::cerr << j.dump(2) << "\n";
  return e.kind() == ErrorKind::ParseError || e.kind() == ErrorKind::InvalidArgument ? kUsage : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calogero-Moser spaces, the adelic Grassmannian and bispectral operators"};
  app.require_subcommand(1);
  Opts o;
  RunConfig cfg;
  std::string cfg_mode = "exact", json_out;
  std::vector<std::string> suites;

  auto* verify = app.add_subcommand("verify", "run the acceptance suites");
  verify->add_option("--mode", cfg_mode, "exact or numeric")->check(CLI::IsMember({"exact", "numeric"}));
  verify->add_option("--tol", cfg.tol, "numeric tolerance");
  verify->add_option("--depth", cfg.depth, "pseudo-differential truncation depth");
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--suite", suites, "suite names (repeatable)");
  verify->add_option("--json-out", json_out, "write the JSON report here");
  verify->add_option("--inject", cfg.inject, "mutation switch (gform-sign)");

  auto add_mode = [&o](CLI::App* c) {
    c->add_option("--mode", o.mode, "exact or numeric (default: payload mode)")->check(CLI::IsMember({"exact", "numeric"}));
  };
  auto* point = app.add_subcommand("point", "point construction and maps");
  point->add_option("action", o.sub, "new | canon | moment | b | embed")->required()->check(
      CLI::IsMember({"new", "canon", "moment", "b", "embed"}));
  point->add_option("--point", o.point, "point JSON, @file or -")->required();
  add_mode(point);

  auto* flow = app.add_subcommand("flow", "Hamiltonian flow J_{k, alpha}");
  flow->add_option("--point", o.point, "point JSON, @file or -")->required();
  flow->add_option("--k", o.k, "degree k");
  flow->add_option("--alpha-json", o.alpha, "r x r matrix JSON")->required();
  flow->add_option("--t", o.t, "time")->required();
  flow->add_option("--steps", o.steps, "RK4 steps (numeric mode); omit for the closed form");
  add_mode(flow);

  auto* bak = app.add_subcommand("baker", "Baker functions");
  bak->add_option("--point", o.point, "point JSON, @file or -")->required();
  bak->add_option("--x", o.x, "stationary Baker function at this x");
  bak->add_option("--jet", o.jet, "loop jet JSON for the general Baker function");
  bak->add_option("--z", o.zs, "sample values of z");
  bak->add_flag("--psi2", o.psi2, "r = 1 determinant route");
  add_mode(bak);

  auto* tau = app.add_subcommand("tau", "tau function of the (3,2) example");
  tau->add_option("times", o.times, "t1 t2 t3 t4")->expected(4);

  auto* lat = app.add_subcommand("lattice", "bounded lattice search (exact)");
  lat->add_option("--grpoint", o.grpoint, "GrPoint JSON, @file or -")->required();
  lat->add_option("--order-bound", o.order_bound);
  lat->add_option("--degree-bound", o.degree_bound);

  auto* ans = app.add_subcommand("ansatz", "order-two stationary ansatz (exact)");
  ans->add_option("--grpoint", o.grpoint, "GrPoint JSON, @file or -")->required();
  ans->add_option("--x", o.xs, "sample values of x")->required();

  auto* bis = app.add_subcommand("bispect", "Theta = K_U b(D) K_V^{-1} (exact)");
  bis->add_option("--point", o.point, "target point V")->required();
  bis->add_option("--op", o.op, "operator JSON")->required();
  bis->add_option("--source", o.source, "source point U (default: base point)");
  bis->add_option("--depth", o.depth, "truncation depth");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  try {
    if (verify->parsed()) {
      cfg.exact = cfg_mode == "exact";
      if (!suites.empty()) cfg.suites = suites;
      const auto results = run_selected(cfg);
      const json report = report_json(results, cfg);
      for (const auto& r : results)
        std::printf("criterion %2d: %s  %s (%zu/%zu checks)\n", r.id, r.pass() ? "PASS" : "FAIL", r.title.c_str(),
                    r.passed(), r.checks.size());
      std::printf("seed %llu, mode %s\n", static_cast<unsigned long long>(cfg.seed), cfg.exact ? "exact" : "numeric");
      if (!json_out.empty()) {
        std::ofstream f(json_out);
        if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + json_out);
        f << report.dump(2) << "\n";
      }
      return report["pass"].get<bool>() ? 0 : kFail;
    }
    if (tau->parsed()) {
      emit(tau_cmd(o));
      return 0;
    }
    if (lat->parsed()) {
      emit(lattice_cmd(o, read_json_arg(o.grpoint, "grpoint")));
      return 0;
    }
    if (ans->parsed()) {
      emit(ansatz_cmd(o, read_json_arg(o.grpoint, "grpoint")));
      return 0;
    }
    if (bis->parsed()) {
      emit(bispect_cmd(o, read_json_arg(o.point, "point")));
      return 0;
    }
    const json in = read_json_arg(o.point, "point");
    const bool exact = exact_mode(in, o.mode);
    if (point->parsed()) emit(exact ? point_cmd<GaussQ>(o, in) : point_cmd<Cplx>(o, in));
    if (flow->parsed()) emit(exact ? flow_cmd<GaussQ>(o, in) : flow_cmd<Cplx>(o, in));
    if (bak->parsed()) emit(exact ? baker_cmd<GaussQ>(o, in) : baker_cmd<Cplx>(o, in));
    return 0;
  } catch (const Error& e) {
    return report_error(e);
  } catch (const json::exception& e) {
    return report_error(Error(ErrorKind::ParseError, e.what()));
  }
}
