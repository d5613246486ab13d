#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cmg {

/// One evaluated identity; failures carry a replayable payload.
struct Check {
  std::string name;
  bool pass = false;
  nlohmann::json payload;
};

struct RunConfig {
  bool exact = true;
  double tol = 1e-9;
  int depth = 8;
  std::uint64_t seed = 7;
  std::vector<std::string> suites{"all"};
  /// Mutation switch for testing the checks themselves ("gform-sign").
  std::string inject;

  void validate() const;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0;

  bool pass() const;
  std::size_t passed() const;
};

/// The acceptance criteria, 1 ... 16.
int criterion_count();
std::string criterion_title(int id);
CriterionResult run_criterion(int id, const RunConfig& cfg);

/// Suite names: moment, flows, action, baker, bispectral, lattice, tau, examples, all.
const std::vector<std::string>& suite_names();
std::vector<int> suite_criteria(const std::string& suite);  // throws InvalidArgument on unknown names
std::vector<int> selected_criteria(const RunConfig& cfg);

std::vector<CriterionResult> run_selected(const RunConfig& cfg);
nlohmann::json report_json(const std::vector<CriterionResult>& results, const RunConfig& cfg);

// per-criterion entry points
std::vector<Check> check_moment_fiber(const RunConfig& cfg);        // 1
std::vector<Check> check_poisson(const RunConfig& cfg);             // 2
std::vector<Check> check_flows(const RunConfig& cfg);               // 3
std::vector<Check> check_action(const RunConfig& cfg);              // 4
std::vector<Check> check_scalar_subgroup(const RunConfig& cfg);     // 5
std::vector<Check> check_baker_validity(const RunConfig& cfg);      // 6
std::vector<Check> check_equivariance(const RunConfig& cfg);        // 7
std::vector<Check> check_psi2(const RunConfig& cfg);                // 8
std::vector<Check> check_bispectral(const RunConfig& cfg);          // 9
std::vector<Check> check_cells(const RunConfig& cfg);               // 10
std::vector<Check> check_exlatt(const RunConfig& cfg);              // 11
std::vector<Check> check_latt_witness(const RunConfig& cfg);        // 12
std::vector<Check> check_three_equivalent(const RunConfig& cfg);    // 13
std::vector<Check> check_tau(const RunConfig& cfg);                 // 14
std::vector<Check> check_outside_big_cell(const RunConfig& cfg);    // 15
std::vector<Check> check_z_stable(const RunConfig& cfg);            // 16

}  // namespace cmg
