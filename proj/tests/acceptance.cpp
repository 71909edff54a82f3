#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ccr/suites.hpp"

using namespace ccr;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;
};

void absorb(Outcome& o, const std::vector<CheckResult>& v) {
  for (const auto& c : v) {
    if (c.pass) continue;
    o.pass = false;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s%s residual %.3g tol %.3g", o.note.empty() ? "" : "; ", c.id.c_str(),
                  c.residual, c.tolerance);
    o.note += buf;
  }
}

const CheckResult* find(const std::vector<CheckResult>& v, const std::string& id) {
  for (const auto& c : v)
    if (c.id == id) return &c;
  return nullptr;
}

int failures = 0;

void criterion(int k, const std::string& what, double limit, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o = body();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit > 0 && secs >= limit) {
    o.pass = false;
    o.note += (o.note.empty() ? "" : "; ") + std::string("runtime over ") + std::to_string(int(limit)) + " s";
  }
  failures += !o.pass;
  std::printf("criterion %2d %s  %s (%.2f s)%s%s\n", k, o.pass ? "PASS" : "FAIL", what.c_str(), secs,
              o.note.empty() ? "" : ": ", o.note.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  const std::uint64_t seed = 20240611;
  auto g5 = gb::make_grid(5, 0.5);

  criterion(1, "T-procedure dimension law, 200 instances with exact oracle", 5, [&] {
    Outcome o;
    absorb(o, suites::tprocedure(seed, 200, 12));
    return o;
  });

  criterion(2, "staged reduction equals single reduction, 100 chains", 10, [&] {
    Outcome o;
    absorb(o, suites::stages(seed, 100, 12));
    return o;
  });

  criterion(3, "gauge identities on 500 tuples, 5^3 grid", 10, [&] {
    Outcome o;
    absorb(o, suites::gauge(g5, seed, 500));
    return o;
  });

  criterion(4, "Krein positivity with exact kernel on 5^3 and 7^3 grids", 30, [&] {
    Outcome o;
    absorb(o, suites::krein(g5));
    absorb(o, suites::krein(gb::make_grid(7, 0.5)));
    return o;
  });

  criterion(5, "decomposition of p, 200 round trips and uniqueness", 0, [&] {
    Outcome o;
    absorb(o, suites::decompose(g5, seed, 200));
    return o;
  });

  criterion(6, "Cauchy-data identity over 3 refinement levels", 0, [&] {
    Outcome o;
    auto c = suites::default_causality();
    auto v = suites::cauchy(c.levels, suites::default_cauchy_box());
    absorb(o, v);
    if (const auto* id = find(v, "cauchy.identity"); id && !id->detail["levels"].empty())
      o.note += "; pairing matches -B to " + id->detail["levels"].back()["residual_against_minus_B"].dump();
    return o;
  });

  criterion(7, "weak causality with a field-level witness", 0, [&] {
    Outcome o;
    absorb(o, suites::causality(suites::default_causality()));
    return o;
  });

  criterion(8, "net axioms on the GB net and counterexample nets", 0, [&] {
    Outcome o;
    absorb(o, suites::net(g5, suites::default_net_regions(*g5), suites::default_actions(*g5)));
    absorb(o, suites::net_counterexamples());
    return o;
  });

  criterion(9, "Fock layer: CCR, [chi* chi, A(f)] = i A(G_h f), physical subspace, Maxwell quotient", 0, [&] {
    Outcome o;
    auto v = suites::fock(suites::FockConfig{}, seed);
    absorb(o, v);
    if (const auto* gc = find(v, "fock.gauge_commutator")) {
      double plus = gc->detail.value("residual_with_plus_i", 1.0);
      if (plus > 1e-10) {
        o.pass = false;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%swith +i residual %.3g tol 1e-10; with -i residual %.3g",
                      o.note.empty() ? "" : "; ", plus, gc->residual);
        o.note += buf;
      }
    }
    return o;
  });

  criterion(10, "spectral condition and vacuum invariance", 0, [&] {
    Outcome o;
    absorb(o, suites::spectral(suites::FockConfig{}));
    return o;
  });

  criterion(11, "global and local reductions agree", 0, [&] {
    Outcome o;
    absorb(o, suites::global_local(suites::global_local_grid(), suites::default_global_regions()));
    return o;
  });

  criterion(12, "Weyl algebra identities on 300 triples, states and nonregularity", 0, [&] {
    Outcome o;
    absorb(o, suites::weyl(seed, 300));
    return o;
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
