#pragma once

#include <json.hpp>
#include <string>

#include "cmg/grass.hpp"
#include "cmg/algebra/pdo.hpp"

namespace cmg {

using json = nlohmann::json;

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what, json{{"at", where}}.dump());
}

inline json scalar_to_json(const GaussQ& a) {
  return json::array({a.re().get_num().get_str(), a.re().get_den().get_str(), a.im().get_num().get_str(),
                      a.im().get_den().get_str()});
}
inline json scalar_to_json(const Cplx& a) { return json::array({a.real(), a.imag()}); }

namespace detail {

inline mpq_class parse_rational(const json& num, const json& den, const std::string& where) {
  auto text = [&where](const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    parse_fail(where, "expected an integer or a decimal string");
  };
  try {
    mpq_class q(mpz_class(text(num)), mpz_class(text(den)));
    if (q.get_den() == 0) parse_fail(where, "zero denominator");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    parse_fail(where, "malformed integer");
  }
}

}  // namespace detail

template <Scalar F>
F scalar_from_json(const json& j, const std::string& where) {
  if constexpr (ScalarTraits<F>::exact) {
    if (j.is_number_integer()) return GaussQ(mpq_class(mpz_class(std::to_string(j.get<long long>()))));
    if (!j.is_array() || (j.size() != 4 && j.size() != 2))
      parse_fail(where, "exact scalar must be [re_num, re_den, im_num, im_den]");
    if (j.size() == 2) return GaussQ(detail::parse_rational(j[0], j[1], where));
    return GaussQ(detail::parse_rational(j[0], j[1], where), detail::parse_rational(j[2], j[3], where));
  } else {
    if (j.is_number()) return Cplx(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      parse_fail(where, "numeric scalar must be [re, im]");
    return Cplx(j[0].get<double>(), j[1].get<double>());
  }
}

template <Scalar F>
json vector_to_json(const std::vector<F>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(x));
  return a;
}

template <Scalar F>
std::vector<F> vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  std::vector<F> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(scalar_from_json<F>(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

template <Scalar F>
json matrix_to_json(const Matrix<F>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

/// Rows of scalars; `rows`/`cols` fix the shape when the array is empty.
template <Scalar F>
Matrix<F> matrix_from_json(const json& j, const std::string& where, std::size_t rows, std::size_t cols) {
  if (!j.is_array()) parse_fail(where, "expected an array of rows");
  if (j.size() != rows) parse_fail(where, "expected " + std::to_string(rows) + " rows");
  Matrix<F> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) parse_fail(where, "row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c)
      m(i, c) = scalar_from_json<F>(j[i][c], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
  }
  return m;
}

template <Scalar F>
Matrix<F> square_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array of rows");
  return matrix_from_json<F>(j, where, j.size(), j.size());
}

template <Scalar F>
json poly_to_json(const Poly<F>& p) {
  return vector_to_json(p.coeffs());
}

template <Scalar F>
Poly<F> poly_from_json(const json& j, const std::string& where) {
  return Poly<F>(vector_from_json<F>(j, where));
}

template <Scalar F>
json ratfun_to_json(const RatFun<F>& f) {
  return json{{"num_coeffs", poly_to_json(f.num())}, {"den_coeffs", poly_to_json(f.den())}};
}

template <Scalar F>
RatFun<F> ratfun_from_json(const json& j, const std::string& where) {
  if (j.is_array()) return RatFun<F>(poly_from_json<F>(j, where));
  if (!j.is_object() || !j.contains("num_coeffs")) parse_fail(where, "rational function needs num_coeffs");
  const Poly<F> num = poly_from_json<F>(j["num_coeffs"], where + ".num_coeffs");
  const Poly<F> den = j.contains("den_coeffs") ? poly_from_json<F>(j["den_coeffs"], where + ".den_coeffs") : Poly<F>(from_int<F>(1));
  if (den.is_zero()) parse_fail(where, "zero denominator");
  return RatFun<F>(num, den);
}

template <Scalar F>
json ratmatrix_to_json(const Matrix<RatFun<F>>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(ratfun_to_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <Scalar F>
Matrix<RatFun<F>> ratmatrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) parse_fail(where, "expected a non-empty array of rows");
  const std::size_t rows = j.size(), cols = j[0].size();
  Matrix<RatFun<F>> m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) parse_fail(where, "ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(i, c) = ratfun_from_json<F>(j[i][c], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
  }
  return m;
}

template <Scalar F>
json pdo_to_json(const MatPDO<F>& p) {
  json terms = json::array();
  for (const auto& [k, m] : p.terms()) terms.push_back(json{{"order", k}, {"matrix", ratmatrix_to_json(m)}});
  return json{{"shape", {p.rows(), p.cols()}}, {"depth", p.depth()}, {"terms", terms}};
}

template <Scalar F>
MatPDO<F> pdo_from_json(const json& j, const std::string& where, int default_depth) {
  if (!j.is_object() || !j.contains("shape") || !j.contains("terms")) parse_fail(where, "operator needs shape and terms");
  const auto& shape = j["shape"];
  if (!shape.is_array() || shape.size() != 2) parse_fail(where + ".shape", "expected [rows, cols]");
  const int depth = j.contains("depth") ? j["depth"].get<int>() : default_depth;
  MatPDO<F> p(shape[0].get<std::size_t>(), shape[1].get<std::size_t>(), depth);
  for (std::size_t t = 0; t < j["terms"].size(); ++t) {
    const auto& term = j["terms"][t];
    const std::string w = where + ".terms[" + std::to_string(t) + "]";
    if (!term.contains("order") || !term.contains("matrix")) parse_fail(w, "term needs order and matrix");
    const auto m = ratmatrix_from_json<F>(term["matrix"], w + ".matrix");
    if (m.rows() != p.rows() || m.cols() != p.cols()) parse_fail(w, "coefficient shape differs from the operator shape");
    p.add(term["order"].get<int>(), m);
  }
  return p;
}

template <Scalar F>
json quadruple_to_json(const Quadruple<F>& q) {
  return json{{"mode", ScalarTraits<F>::mode}, {"n", q.n}, {"r", q.r}, {"X", matrix_to_json(q.X)},
              {"Y", matrix_to_json(q.Y)}, {"v", matrix_to_json(q.v)}, {"w", matrix_to_json(q.w)}};
}

inline void require_fields(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  for (const char* k : keys)
    if (!j.contains(k)) parse_fail(where, std::string("missing field '") + k + "'");
}

template <Scalar F>
Quadruple<F> quadruple_from_json(const json& j, const std::string& where = "point") {
  require_fields(j, where, {"n", "r", "X", "Y", "v", "w"});
  const auto n = j["n"].get<std::size_t>();
  const auto r = j["r"].get<std::size_t>();
  if (n == 0) return Quadruple<F>::base(r);
  return Quadruple<F>(matrix_from_json<F>(j["X"], where + ".X", n, n), matrix_from_json<F>(j["Y"], where + ".Y", n, n),
                      matrix_from_json<F>(j["v"], where + ".v", n, r), matrix_from_json<F>(j["w"], where + ".w", r, n));
}

template <Scalar F>
json cmpoint_to_json(const CMPoint<F>& p) {
  return json{{"mode", ScalarTraits<F>::mode}, {"n", p.n},
              {"r", p.r}, {"lambda", vector_to_json(p.lambda)},
              {"alpha", vector_to_json(p.alpha)}, {"vrow", matrix_to_json(p.vrow)},
              {"wcol", matrix_to_json(p.wcol)}};
}

template <Scalar F>
CMPoint<F> cmpoint_from_json(const json& j, const std::string& where = "point") {
  require_fields(j, where, {"n", "r", "lambda", "alpha", "vrow", "wcol"});
  CMPoint<F> p;
  p.n = j["n"].get<std::size_t>();
  p.r = j["r"].get<std::size_t>();
  p.lambda = vector_from_json<F>(j["lambda"], where + ".lambda");
  p.alpha = vector_from_json<F>(j["alpha"], where + ".alpha");
  if (p.lambda.size() != p.n || p.alpha.size() != p.n) parse_fail(where, "lambda and alpha need n entries");
  p.vrow = matrix_from_json<F>(j["vrow"], where + ".vrow", p.n, p.r);
  if (p.n == 0) {
    p.wcol = Matrix<F>(p.r, 0);
  } else {
    p.wcol = matrix_from_json<F>(j["wcol"], where + ".wcol", p.r, p.n);
  }
  check_distinct(p.lambda, ErrorKind::RepeatedEigenvalues, "positions must be distinct");
  return p;
}

/// Either a CMPoint (has "lambda") or a Quadruple (has "X").
template <Scalar F>
Quadruple<F> any_point_from_json(const json& j, const std::string& where = "point") {
  if (j.is_object() && j.contains("lambda")) return from_cd_coords(cmpoint_from_json<F>(j, where));
  return quadruple_from_json<F>(j, where);
}

template <Scalar F>
json grpoint_to_json(const GrPoint<F>& w) {
  json sites = json::array();
  for (const auto& s : w.sites) {
    json conds = json::array();
    for (const auto& c : s.conditions) conds.push_back(vector_to_json(c));
    sites.push_back(json{{"lambda", scalar_to_json(s.lambda)},
                         {"pole_order", s.pole_order},
                         {"window_top", s.window_top},
                         {"conditions", conds}});
  }
  json out{{"r", w.r}, {"sites", sites}, {"provenance", provenance_name(w.provenance)}};
  if (w.point) out["point"] = cmpoint_to_json(*w.point);
  if (w.cell) out["cell"] = json{{"A", matrix_to_json(w.cell->A)}, {"B", matrix_to_json(w.cell->B)}};
  return out;
}

template <Scalar F>
GrPoint<F> grpoint_from_json(const json& j, const std::string& where = "grpoint") {
  require_fields(j, where, {"r", "sites"});
  GrPoint<F> w;
  w.r = j["r"].get<std::size_t>();
  const std::string prov = j.value("provenance", std::string("custom"));
  w.provenance = prov == "base" ? Provenance::Base : prov == "beta" ? Provenance::Beta : prov == "cell" ? Provenance::Cell : Provenance::Custom;
  for (std::size_t i = 0; i < j["sites"].size(); ++i) {
    const auto& sj = j["sites"][i];
    const std::string sw = where + ".sites[" + std::to_string(i) + "]";
    require_fields(sj, sw, {"lambda", "pole_order", "window_top", "conditions"});
    Site<F> s;
    s.lambda = scalar_from_json<F>(sj["lambda"], sw + ".lambda");
    s.pole_order = sj["pole_order"].get<int>();
    s.window_top = sj["window_top"].get<int>();
    if (s.pole_order < 0 || s.window_top < -s.pole_order) parse_fail(sw, "empty Laurent window");
    for (std::size_t c = 0; c < sj["conditions"].size(); ++c) {
      auto cond = vector_from_json<F>(sj["conditions"][c], sw + ".conditions[" + std::to_string(c) + "]");
      if (cond.size() != static_cast<std::size_t>(s.window_len()) * w.r) parse_fail(sw, "condition length must be r * window length");
      bool nonzero = false;
      for (const auto& x : cond) nonzero = nonzero || !cmg::is_zero(x);
      if (!nonzero) parse_fail(sw, "zero condition");
      s.conditions.push_back(std::move(cond));
    }
    w.sites.push_back(std::move(s));
  }
  if (j.contains("point")) w.point = cmpoint_from_json<F>(j["point"], where + ".point");
  if (j.contains("cell"))
    w.cell = CellPoint<F>{square_from_json<F>(j["cell"]["A"], where + ".cell.A"), square_from_json<F>(j["cell"]["B"], where + ".cell.B")};
  return w;
}

template <Scalar F>
json jet_to_json(const GammaJet<F>& j) {
  json vals = json::array(), ders = json::array();
  for (const auto& m : j.values) vals.push_back(matrix_to_json(m));
  for (const auto& m : j.derivs) ders.push_back(matrix_to_json(m));
  return json{{"lambdas", vector_to_json(j.lambdas)}, {"values", vals}, {"derivs", ders}};
}

template <Scalar F>
GammaJet<F> jet_from_json(const json& j, const std::string& where = "jet") {
  require_fields(j, where, {"lambdas", "values", "derivs"});
  GammaJet<F> g;
  g.lambdas = vector_from_json<F>(j["lambdas"], where + ".lambdas");
  if (j["values"].size() != g.lambdas.size() || j["derivs"].size() != g.lambdas.size())
    parse_fail(where, "values and derivs need one entry per lambda");
  for (std::size_t i = 0; i < g.lambdas.size(); ++i) {
    g.values.push_back(square_from_json<F>(j["values"][i], where + ".values[" + std::to_string(i) + "]"));
    g.derivs.push_back(square_from_json<F>(j["derivs"][i], where + ".derivs[" + std::to_string(i) + "]"));
  }
  return g;
}

template <Scalar F>
json polymatrix_to_json(const PolyMatrix<F>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(poly_to_json(m(i, c)));
    rows.push_back(row);
  }
  return rows;
}

template <Scalar F>
PolyMatrix<F> polymatrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) parse_fail(where, "expected rows of coefficient arrays");
  PolyMatrix<F> m(j.size(), j[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (j[i].size() != m.cols()) parse_fail(where, "ragged rows");
    for (std::size_t c = 0; c < m.cols(); ++c)
      m(i, c) = poly_from_json<F>(j[i][c], where + "[" + std::to_string(i) + "][" + std::to_string(c) + "]");
  }
  return m;
}

}  // namespace cmg
