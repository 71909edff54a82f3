#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "ccr/report.hpp"
#include "ccr/scenario.hpp"

using namespace ccr;
namespace fs = std::filesystem;

namespace {

std::string bin() {
  const char* b = std::getenv("CCR_REDUCE_BIN");
  REQUIRE(b != nullptr);
  return b;
}

std::string scen(const std::string& name) {
  const char* d = std::getenv("CCR_SCENARIO_DIR");
  REQUIRE(d != nullptr);
  return std::string(d) + "/" + name;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  std::string cmd = bin() + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

fs::path temp_file(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / ("ccr_cli_" + std::to_string(::getpid()) + "_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("registry ids are unique and every anchor is filled") {
  std::set<std::string> ids;
  for (const auto& e : check_registry()) {
    CHECK_MESSAGE(!e.anchor.empty(), e.id);
    CHECK_MESSAGE(ids.insert(e.id).second, e.id);
  }
  CHECK_THROWS(registry_entry("no.such.check"));
}

TEST_CASE("abstract scenario passes and every emitted id is registered") {
  Run r = run("run " + scen("abstract.json"));
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  REQUIRE(j.contains("checks"));
  CHECK(!j["checks"].empty());
  for (const auto& c : j["checks"]) {
    std::string id = c["id"].get<std::string>();
    CHECK_NOTHROW(registry_entry(id));
    CHECK(c["anchor"].get<std::string>() == registry_entry(id).anchor);
  }
}

TEST_CASE("report is deterministic") {
  Run a = run("run " + scen("abstract.json"));
  Run b = run("run " + scen("abstract.json"));
  CHECK(a.out == b.out);
}

TEST_CASE("empty scenario exits 0") {
  CHECK(run("run " + scen("empty.json")).code == 0);
}

TEST_CASE("mislabeled spacelike pair exits 1") {
  Run r = run("run " + scen("mislabeled.json"));
  CHECK(r.code == 1);
  auto j = json::parse(r.out);
  bool sawFail = false;
  for (const auto& c : j["checks"])
    if (c["id"] == "causality.weak") sawFail = c["status"] == "FAIL";
  CHECK(sawFail);
}

TEST_CASE("gb_small scenario exits 0") {
  CHECK(run("run " + scen("gb_small.json")).code == 0);
}

TEST_CASE("unknown keys and bad schema are rejected with exit 2") {
  auto p = temp_file("unknown.json", R"({"schema": 1, "name": "x", "suites": [], "bogus": 3})");
  CHECK(run("run " + p.string()).code == 2);
  auto q = temp_file("schema.json", R"({"schema": 2, "name": "x", "suites": []})");
  CHECK(run("run " + q.string()).code == 2);
  auto s = temp_file("suite.json", R"({"schema": 1, "name": "x", "suites": ["nope"]})");
  CHECK(run("run " + s.string()).code == 2);
  CHECK(run("run /nonexistent/file.json").code == 2);
  fs::remove(p);
  fs::remove(q);
  fs::remove(s);
}

TEST_CASE("parse_scenario rejects an unknown key directly") {
  CHECK_THROWS_AS(parse_scenario(json::parse(R"({"schema": 1, "name": "x", "extra": 0})")), ScenarioError);
}

TEST_CASE("converge argument errors exit 2") {
  CHECK(run("converge " + scen("refine.json") + " --levels 1").code == 2);
  CHECK(run("converge " + scen("abstract.json") + " --levels 2").code == 2);
  CHECK(run("converge " + scen("refine.json") + " --levels 9").code == 2);
}

TEST_CASE("missing subcommand exits 2") {
  CHECK(run("").code == 2);
}
