#include "ccr/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <set>
#include <thread>

#include "ccr/errors.hpp"
#include "ccr/reduce.hpp"

namespace ccr {

namespace {

using Keys = std::set<std::string>;

void only_keys(const json& j, const Keys& allowed, const std::string& where) {
  if (!j.is_object()) throw ScenarioError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ScenarioError(where + ": unknown key '" + k + "'");
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ScenarioError(where + "." + key + ": " + e.what());
  }
}

suites::Level parse_level(const json& j, const std::string& where) {
  only_keys(j, {"n", "spacing"}, where);
  suites::Level l{get<int>(j, "n", where), get<double>(j, "spacing", where)};
  if (l.n < 3 || l.n % 2 == 0) throw ScenarioError(where + ".n: must be odd and at least 3");
  if (!(l.spacing > 0)) throw ScenarioError(where + ".spacing: must be positive");
  return l;
}

std::array<double, 4> parse_vec4(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 4) throw ScenarioError(where + ": expected 4 numbers (t, x, y, z)");
  std::array<double, 4> a{};
  for (int i = 0; i < 4; ++i) {
    if (!j[i].is_number()) throw ScenarioError(where + ": expected numbers");
    a[i] = j[i].get<double>();
  }
  return a;
}

std::vector<gb::RegionSpec> parse_regions(const json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioError(where + ": expected an array");
  std::vector<gb::RegionSpec> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    std::string w = where + "[" + std::to_string(i) + "]";
    only_keys(j[i], {"name", "lo", "hi"}, w);
    gb::RegionSpec r;
    r.name = get<std::string>(j[i], "name", w);
    r.box.lo = parse_vec4(j[i].at("lo"), w + ".lo");
    r.box.hi = parse_vec4(j[i].at("hi"), w + ".hi");
    for (int k = 0; k < 4; ++k)
      if (!(r.box.hi[k] > r.box.lo[k])) throw ScenarioError(w + ": empty box");
    for (const auto& o : out)
      if (o.name == r.name) throw ScenarioError(w + ": duplicate region name '" + r.name + "'");
    out.push_back(r);
  }
  return out;
}

int region_index(const std::vector<gb::RegionSpec>& regions, const std::string& name, const std::string& where) {
  for (std::size_t i = 0; i < regions.size(); ++i)
    if (regions[i].name == name) return int(i);
  throw ScenarioError(where + ": unknown region '" + name + "'");
}

std::vector<Eigen::Vector3i> parse_lattice(const json& j, const std::string& where) {
  if (!j.is_array()) throw ScenarioError(where + ": expected an array of integer triples");
  std::vector<Eigen::Vector3i> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) throw ScenarioError(where + ": expected integer triples");
    Eigen::Vector3i v;
    for (int k = 0; k < 3; ++k) {
      if (!e[k].is_number_integer()) throw ScenarioError(where + ": expected integers");
      v(k) = e[k].get<int>();
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

const std::vector<std::string>& known_suites() {
  static const std::vector<std::string> s = {"tprocedure", "stages",   "weyl",    "gauge",          "krein",
                                             "decompose",  "cauchy",   "causality", "net",          "counterexamples",
                                             "fock",       "spectral", "global_local", "reduce"};
  return s;
}

Scenario parse_scenario(const json& j) {
  only_keys(j, {"schema", "name", "seed", "grid", "abstract", "suites", "levels", "regions", "spacelike",
                "witness_regions", "tolerances", "instances", "fock"},
            "scenario");
  if (!j.contains("schema") || j.at("schema") != 1) throw ScenarioError("scenario.schema: expected 1");
  Scenario s;
  s.echo = j;
  s.name = j.contains("name") ? get<std::string>(j, "name", "scenario") : "";
  if (j.contains("seed")) s.seed = get<std::uint64_t>(j, "seed", "scenario");
  if (j.contains("grid") && j.contains("abstract")) throw ScenarioError("scenario: give either grid or abstract");
  if (j.contains("grid")) s.grid = parse_level(j.at("grid"), "grid");
  if (j.contains("abstract")) {
    const auto& a = j.at("abstract");
    only_keys(a, {"darboux_pairs", "constraints"}, "abstract");
    AbstractSpec spec;
    spec.darbouxPairs = get<int>(a, "darboux_pairs", "abstract");
    if (spec.darbouxPairs < 1) throw ScenarioError("abstract.darboux_pairs: must be positive");
    if (a.contains("constraints")) {
      spec.constraints = get<std::vector<std::vector<double>>>(a, "constraints", "abstract");
      for (const auto& c : spec.constraints)
        if (int(c.size()) != 2 * spec.darbouxPairs)
          throw ScenarioError("abstract.constraints: vector length must be 2 * darboux_pairs");
    }
    s.abstract = spec;
  }

  if (!j.contains("suites")) throw ScenarioError("scenario.suites: missing");
  s.suites = get<std::vector<std::string>>(j, "suites", "scenario");
  for (const auto& id : s.suites)
    if (std::find(known_suites().begin(), known_suites().end(), id) == known_suites().end())
      throw ScenarioError("scenario.suites: unknown suite '" + id + "'");

  if (j.contains("levels")) {
    const auto& l = j.at("levels");
    if (!l.is_array()) throw ScenarioError("scenario.levels: expected an array");
    s.causality.levels.clear();
    for (std::size_t i = 0; i < l.size(); ++i) s.causality.levels.push_back(parse_level(l[i], "levels[" + std::to_string(i) + "]"));
  }
  if (j.contains("regions")) {
    s.causality.regions = parse_regions(j.at("regions"), "regions");
    s.causality.witnessRegions.clear();
  }
  if (j.contains("witness_regions")) s.causality.witnessRegions = parse_regions(j.at("witness_regions"), "witness_regions");
  if (j.contains("spacelike")) {
    const auto& sl = j.at("spacelike");
    if (!sl.is_array()) throw ScenarioError("scenario.spacelike: expected an array of name pairs");
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : sl) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
        throw ScenarioError("scenario.spacelike: expected pairs of region names");
      pairs.push_back({region_index(s.causality.regions, p[0].get<std::string>(), "spacelike"),
                       region_index(s.causality.regions, p[1].get<std::string>(), "spacelike")});
    }
    s.causality.spacelike = pairs;
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    only_keys(t, {"causality_factor"}, "tolerances");
    if (t.contains("causality_factor")) s.causality.factor = get<double>(t, "causality_factor", "tolerances");
  }
  if (j.contains("instances")) {
    const auto& in = j.at("instances");
    only_keys(in, {"tprocedure", "stages", "weyl", "gauge", "decompose"}, "instances");
    for (const auto& [k, v] : in.items()) {
      if (!v.is_number_integer() || v.get<int>() < 1) throw ScenarioError("instances." + k + ": expected a positive integer");
      s.instances[k] = v.get<int>();
    }
  }
  if (j.contains("fock")) {
    const auto& f = j.at("fock");
    only_keys(f, {"lattice", "spacing", "N", "spectral_lattice", "spectral_N"}, "fock");
    if (f.contains("lattice")) s.fock.lattice = parse_lattice(f.at("lattice"), "fock.lattice");
    if (f.contains("spacing")) s.fock.spacing = get<double>(f, "spacing", "fock");
    if (f.contains("N")) s.fock.N = get<int>(f, "N", "fock");
    if (f.contains("spectral_lattice")) s.fock.spectralLattice = parse_lattice(f.at("spectral_lattice"), "fock.spectral_lattice");
    if (f.contains("spectral_N")) s.fock.spectralN = get<int>(f, "spectral_N", "fock");
    if (s.fock.N < 1 || s.fock.spectralN < 1) throw ScenarioError("fock: truncations must be positive");
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
  return parse_scenario(j);
}

int thread_cap() {
  int hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* e = std::getenv("CCR_REDUCE_THREADS")) {
    int v = std::atoi(e);
    if (v >= 1) return std::min(v, hw);
  }
  return hw;
}

namespace {

std::vector<CheckResult> reduce_abstract(const AbstractSpec& a) {
  auto space = SymplecticSpace::darboux(a.darbouxPairs);
  Mat S = Mat::Zero(space->dim(), Eigen::Index(a.constraints.size()));
  for (std::size_t c = 0; c < a.constraints.size(); ++c)
    for (int i = 0; i < space->dim(); ++i) S(i, Eigen::Index(c)) = a.constraints[c][i];
  Subspace s = a.constraints.empty() ? Subspace::zero(space) : Subspace(space, S);
  try {
    ReductionResult r = t_reduce(s);
    json d = {{"dim_s", r.constraints.rank()}, {"dim_commutant", r.commutant.rank()},
              {"physical_dim", r.physicalDim}, {"double_commutant", r.doubleCommutant}};
    bool law = r.physicalDim == r.commutant.rank() - r.constraints.rank();
    return {make_check("tprocedure.dimension_law", law, law ? 0 : 1, 0, d),
            make_check("tprocedure.nondegenerate_quotient", !r.doubleCommutant || r.nondegenerate, 0, 0, d)};
  } catch (const FirstClassViolation& e) {
    return {make_check("tprocedure.dimension_law", false, 1, 0, {{"error", e.what()}})};
  }
}

}  // namespace

Report run_scenario(const Scenario& s) {
  Report rep;
  rep.scenario = s.name;
  rep.echo = s.echo;
  auto inst = [&](const std::string& k, int def) {
    auto it = s.instances.find(k);
    return it == s.instances.end() ? def : it->second;
  };
  auto needGrid = [&](const std::string& suite) {
    if (!s.grid) throw UnsupportedScenario("suite '" + suite + "' needs a grid scenario");
    return gb::make_grid(s.grid->n, s.grid->spacing);
  };
  using Job = std::function<std::vector<CheckResult>()>;
  std::vector<Job> jobs;
  for (const auto& id : s.suites) {
    if (id == "tprocedure")
      jobs.push_back([&] { return suites::tprocedure(s.seed, inst("tprocedure", 200)); });
    else if (id == "stages")
      jobs.push_back([&, g = s.grid ? needGrid(id) : nullptr] {
        auto out = suites::stages(s.seed, inst("stages", 100));
        if (g) {
          auto gb2 = suites::stages_gb(g);
          out.insert(out.end(), gb2.begin(), gb2.end());
        }
        return out;
      });
    else if (id == "weyl")
      jobs.push_back([&] { return suites::weyl(s.seed, inst("weyl", 300)); });
    else if (id == "gauge")
      jobs.push_back([&, g = needGrid(id)] { return suites::gauge(g, s.seed, inst("gauge", 500)); });
    else if (id == "krein")
      jobs.push_back([g = needGrid(id)] { return suites::krein(g); });
    else if (id == "decompose")
      jobs.push_back([&, g = needGrid(id)] { return suites::decompose(g, s.seed, inst("decompose", 200)); });
    else if (id == "cauchy") {
      needGrid(id);
      jobs.push_back([&] { return suites::cauchy(s.causality.levels, suites::default_cauchy_box()); });
    } else if (id == "causality") {
      needGrid(id);
      jobs.push_back([&] { return suites::causality(s.causality); });
    } else if (id == "net")
      jobs.push_back([g = needGrid(id)] {
        return suites::net(g, suites::default_net_regions(*g), suites::default_actions(*g));
      });
    else if (id == "counterexamples")
      jobs.push_back([] { return suites::net_counterexamples(); });
    else if (id == "fock") {
      needGrid(id);
      jobs.push_back([&] { return suites::fock(s.fock, s.seed); });
    } else if (id == "spectral") {
      needGrid(id);
      jobs.push_back([&] { return suites::spectral(s.fock); });
    } else if (id == "global_local") {
      needGrid(id);
      jobs.push_back([] { return suites::global_local(suites::global_local_grid(), suites::default_global_regions()); });
    } else if (id == "reduce") {
      if (!s.abstract) throw UnsupportedScenario("suite 'reduce' needs an abstract scenario");
      jobs.push_back([&] { return reduce_abstract(*s.abstract); });
    }
  }

  std::vector<std::vector<CheckResult>> results(jobs.size());
  auto timed = [&](std::size_t i) {
    auto t0 = std::chrono::steady_clock::now();
    results[i] = jobs[i]();
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& c : results[i]) c.runtime = dt;
  };
  const std::size_t cap = std::size_t(thread_cap());
  for (std::size_t start = 0; start < jobs.size(); start += cap) {
    std::vector<std::future<void>> fs;
    for (std::size_t i = start; i < std::min(jobs.size(), start + cap); ++i)
      fs.push_back(std::async(cap > 1 ? std::launch::async : std::launch::deferred, timed, i));
    for (auto& f : fs) f.get();
  }
  for (auto& r : results) rep.checks.insert(rep.checks.end(), r.begin(), r.end());
  return rep;
}

}  // namespace ccr
