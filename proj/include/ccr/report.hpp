#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ccr {

using json = nlohmann::ordered_json;

struct CheckInfo {
  std::string id;
  std::string anchor;  // the mathematical statement the check verifies
};

// Every check the suites can emit. Lookup of an unregistered id throws.
const std::vector<CheckInfo>& check_registry();
const CheckInfo& registry_entry(const std::string& id);

struct CheckResult {
  std::string id;
  std::string anchor;
  bool pass = false;
  double residual = 0;
  double tolerance = 0;
  double runtime = 0;  // seconds, reported only on request
  json detail = json::object();
};

// Fills the anchor from the registry.
CheckResult make_check(const std::string& id, bool pass, double residual, double tolerance,
                       json detail = json::object());

struct Report {
  std::string scenario;
  json echo = json::object();
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

json to_json(const Report& r, bool timings);
// Keys keep insertion order and doubles use the shortest round-trip form.
std::string dump_report(const Report& r, bool timings);

}  // namespace ccr
