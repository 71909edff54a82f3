#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccr/report.hpp"
#include "ccr/suites.hpp"

namespace ccr {

// Malformed scenario: bad JSON, unknown key, wrong type, unknown suite.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AbstractSpec {
  int darbouxPairs = 1;
  std::vector<std::vector<double>> constraints;  // columns of s in Darboux coordinates
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  std::optional<suites::Level> grid;
  std::optional<AbstractSpec> abstract;
  std::vector<std::string> suites;
  suites::CausalityConfig causality = suites::default_causality();
  std::map<std::string, int> instances;
  suites::FockConfig fock;
  json echo;
};

const std::vector<std::string>& known_suites();

Scenario parse_scenario(const json& j);
Scenario load_scenario(const std::string& path);

// Suites run in parallel up to CCR_REDUCE_THREADS; checks are reported in suite order.
Report run_scenario(const Scenario& s);
int thread_cap();

}  // namespace ccr
