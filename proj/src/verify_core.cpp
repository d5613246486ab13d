#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "check_util.hpp"

namespace cmg {

void RunConfig::validate() const {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (depth < 1) throw Error(ErrorKind::InvalidArgument, "depth must be at least 1");
  if (!inject.empty() && inject != "gform-sign") throw Error(ErrorKind::InvalidArgument, "unknown mutation '" + inject + "'");
  for (const auto& s : suites) suite_criteria(s);
}

bool CriterionResult::pass() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::size_t CriterionResult::passed() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.pass; }));
}

namespace {

struct Entry {
  const char* title;
  std::vector<Check> (*fn)(const RunConfig&);
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"moment fiber of random chart points", check_moment_fiber},
      {"Poisson relations of the Hamiltonians", check_poisson},
      {"closed-form flows against RK4 and the nilpotent formula", check_flows},
      {"right action law and v_i w_i = -1", check_action},
      {"scalar subgroup action", check_scalar_subgroup},
      {"Baker function rows lie in W", check_baker_validity},
      {"equivariance of the Baker function", check_equivariance},
      {"rank-one determinant formula", check_psi2},
      {"bispectral symmetry and K-operators", check_bispectral},
      {"Gr(r, 2r) cell examples", check_cells},
      {"lattice of the rank-one cell example", check_exlatt},
      {"lattice witnesses are differential members", check_latt_witness},
      {"jet membership versus K-operator differentiality", check_three_equivalent},
      {"tau function identities", check_tau},
      {"outside the big cell", check_outside_big_cell},
      {"z-stable points equal their lattice", check_z_stable},
  };
  return entries;
}

const std::map<std::string, std::vector<int>>& suite_table() {
  static const std::map<std::string, std::vector<int>> table{
      {"moment", {1}},     {"flows", {2, 3, 5}},         {"action", {4}}, {"baker", {6, 7, 8}},
      {"bispectral", {9, 13}}, {"lattice", {11, 12, 16}}, {"tau", {14}},   {"examples", {10, 15}},
  };
  return table;
}

}  // namespace

int criterion_count() { return static_cast<int>(registry().size()); }

std::string criterion_title(int id) {
  if (id < 1 || id > criterion_count()) throw Error(ErrorKind::InvalidArgument, "no criterion " + std::to_string(id));
  return registry()[static_cast<std::size_t>(id - 1)].title;
}

CriterionResult run_criterion(int id, const RunConfig& cfg) {
  CriterionResult res;
  res.id = id;
  res.title = criterion_title(id);
  numeric_tolerance() = cfg.tol;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    res.checks = registry()[static_cast<std::size_t>(id - 1)].fn(cfg);
  } catch (const Error& e) {
    res.checks.push_back(checks::make_check("criterion aborted", false, json{{"error", e.what()}}));
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"moment", "flows", "action", "baker", "bispectral",
                                              "lattice", "tau",   "examples", "all"};
  return names;
}

std::vector<int> suite_criteria(const std::string& suite) {
  if (suite == "all") {
    std::vector<int> all;
    for (int i = 1; i <= criterion_count(); ++i) all.push_back(i);
    return all;
  }
  auto it = suite_table().find(suite);
  if (it == suite_table().end()) throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
  return it->second;
}

std::vector<int> selected_criteria(const RunConfig& cfg) {
  std::set<int> ids;
  for (const auto& s : cfg.suites)
    for (int id : suite_criteria(s)) ids.insert(id);
  return {ids.begin(), ids.end()};
}

std::vector<CriterionResult> run_selected(const RunConfig& cfg) {
  cfg.validate();
  std::vector<CriterionResult> out;
  for (int id : selected_criteria(cfg)) out.push_back(run_criterion(id, cfg));
  return out;
}

json report_json(const std::vector<CriterionResult>& results, const RunConfig& cfg) {
  json crit = json::array();
  bool all = true;
  for (const auto& r : results) {
    json failures = json::array();
    for (const auto& c : r.checks)
      if (!c.pass) failures.push_back(json{{"name", c.name}, {"payload", c.payload}});
    crit.push_back(json{{"id", r.id},
                        {"title", r.title},
                        {"pass", r.pass()},
                        {"checks", r.checks.size()},
                        {"passed", r.passed()},
                        {"seconds", r.seconds},
                        {"failures", failures}});
    all = all && r.pass();
  }
  return json{{"mode", cfg.exact ? "exact" : "numeric"},
              {"seed", cfg.seed},
              {"depth", cfg.depth},
              {"tol", cfg.tol},
              {"suites", cfg.suites},
              {"inject", cfg.inject},
              {"pass", all},
              {"criteria", crit}};
}

}  // namespace cmg
