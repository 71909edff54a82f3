#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ccr/errors.hpp"
#include "ccr/scenario.hpp"
#include "ccr/suites.hpp"

namespace {

using namespace ccr;

int write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "ccr-reduce: cannot write '" << path << "'\n";
    return 2;
  }
  out << text;
  return 0;
}

void print_summary(const Report& r, std::ostream& os) {
  int passed = 0;
  for (const auto& c : r.checks) {
    os << (c.pass ? "PASS " : "FAIL ") << c.id << "  residual=" << c.residual << " tol=" << c.tolerance << "\n";
    passed += c.pass;
  }
  os << passed << "/" << r.checks.size() << " checks passed\n";
}

int cmd_run(const std::string& file, const std::string& jsonOut, bool timings) {
  Scenario s = load_scenario(file);
  Report r = run_scenario(s);
  if (jsonOut.empty()) {
    std::cout << dump_report(r, timings);
  } else {
    if (int rc = write_text(jsonOut, dump_report(r, timings))) return rc;
    print_summary(r, std::cout);
  }
  return r.all_pass() ? 0 : 1;
}

int cmd_converge(const std::string& file, int levels, const std::string& csvOut) {
  Scenario s = load_scenario(file);
  if (!s.grid) throw UnsupportedScenario("converge needs a grid scenario");
  auto c = s.causality;
  if (levels < 2) throw std::invalid_argument("converge: needs at least 2 levels");
  if (levels > int(c.levels.size()))
    throw std::invalid_argument("converge: scenario declares only " + std::to_string(c.levels.size()) + " levels");
  c.levels.resize(std::size_t(levels));
  auto res = suites::converge(c, suites::default_cauchy_box());
  std::ostringstream os;
  os.precision(17);
  os << "spacing,cauchy_residual,spacelike_residual,kernel_gap\n";
  for (const auto& row : res.rows)
    os << row.spacing << "," << row.cauchy << "," << row.spacelike << "," << row.kernelGap << "\n";
  if (int rc = write_text(csvOut, os.str())) return rc;
  if (!csvOut.empty()) std::cout << os.str();
  std::cerr << "cauchy column " << (res.cauchyMonotone ? "decreases" : "does not decrease")
            << "; spacelike column " << (res.spacelikeMonotone ? "decreases" : "does not decrease") << "\n";
  return res.cauchyMonotone && res.spacelikeMonotone ? 0 : 1;
}

int cmd_demo(bool breakCausality, bool skipStage2, const std::string& jsonOut) {
  auto g = gb::make_grid(5, 0.5);
  Report r;
  r.scenario = "demo gb";
  r.echo = {{"grid", {{"n", 5}, {"spacing", 0.5}}}, {"break_causality", breakCausality}, {"skip_stage2", skipStage2}};
  auto add = [&](std::vector<CheckResult> v) { r.checks.insert(r.checks.end(), v.begin(), v.end()); };
  add(suites::net(g, suites::default_net_regions(*g), suites::default_actions(*g)));
  auto caus = suites::causality(suites::default_causality());
  r.checks.push_back(caus[0]);
  if (breakCausality) r.checks.push_back(caus[1]);
  add(skipStage2 ? suites::stage1_radical(g) : suites::stages_gb(g));
  add(suites::krein(g));
  add(suites::spectral(suites::FockConfig{}));

  std::cout << "GB pipeline on a 5^3 grid, spacing 0.5 (" << g->size() << " momenta)\n\n";
  for (const auto& c : r.checks) std::cout << (c.pass ? "PASS  " : "FAIL  ") << c.id << "\n      " << c.anchor << "\n";
  if (breakCausality)
    std::cout << "\nfield-level pair: |c(f,h)| = " << caus[1].residual << " > " << caus[1].tolerance
              << " while observables commute to " << caus[0].residual << "\n";
  if (skipStage2) {
    for (const auto& c : r.checks)
      if (c.id == "stages.gb_stage1_radical")
        std::cout << "\nstage 2 skipped: B on p has radical dimension "
                  << c.detail.value("radical_dim", 0) << "\n";
  }
  if (!jsonOut.empty())
    if (int rc = write_text(jsonOut, dump_report(r, false))) return rc;
  return r.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constraint reduction for CCR systems and the Gupta-Bleuler model"};
  app.require_subcommand(1);

  std::string file, jsonOut, csvOut;
  bool timings = false, breakCausality = false, skipStage2 = false;
  int levels = 3;

  auto* run = app.add_subcommand("run", "run the suites of a scenario and emit a JSON report");
  run->add_option("file", file, "scenario JSON")->required();
  run->add_option("--json", jsonOut, "write the report here instead of stdout");
  run->add_flag("--timings", timings, "include per-check runtimes");

  auto* conv = app.add_subcommand("converge", "refinement table for the grid levels of a scenario");
  conv->add_option("file", file, "scenario JSON")->required();
  conv->add_option("--levels", levels, "number of levels to use")->required();
  conv->add_option("--csv", csvOut, "write the table here instead of stdout");

  auto* demo = app.add_subcommand("demo", "end-to-end demonstrations");
  std::string which;
  demo->add_option("model", which, "model name")->required()->check(CLI::IsMember({"gb"}));
  demo->add_flag("--break-causality", breakCausality, "also search a field-level spacelike pair");
  demo->add_flag("--skip-stage2", skipStage2, "report B on p before the radical p0 is factored out");
  demo->add_option("--json", jsonOut, "also write the report JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*run) return cmd_run(file, jsonOut, timings);
    if (*conv) return cmd_converge(file, levels, csvOut);
    if (*demo) return cmd_demo(breakCausality, skipStage2, jsonOut);
  } catch (const ScenarioError& e) {
    std::cerr << "ccr-reduce: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedScenario& e) {
    std::cerr << "ccr-reduce: UnsupportedScenario: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ccr-reduce: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
