#include "ccr/report.hpp"

#include <cmath>
#include <stdexcept>

namespace ccr {

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> reg = {
      {"tprocedure.dimension_law", "physical dimension equals dim s' - dim s for first-class s"},
      {"tprocedure.exact_oracle", "float and exact rational ranks agree on integer instances"},
      {"tprocedure.nondegenerate_quotient", "factored form on s'/s is nondegenerate when s = s''"},
      {"stages.dimension", "staged reduction reaches the single-step physical dimension"},
      {"stages.isomorphism", "staged and single-step reductions are symplectically isomorphic"},
      {"stages.gb_two_chain", "gradient then p0 reduction equals single reduction by p0"},
      {"stages.gb_stage1_radical", "without the second stage B on p is degenerate with radical p0"},
      {"weyl.associativity", "Weyl product is associative"},
      {"weyl.involution", "star is an involutive antihomomorphism"},
      {"weyl.norms", "norm2^2 = sum |c|^2 = central state of a*a, and norm2 <= norm1"},
      {"weyl.central_invariance", "central state is invariant under inner shifts"},
      {"weyl.char_state_positivity", "characteristic state of a first-class subspace is positive"},
      {"weyl.nonregularity", "a state equal to 1 on delta_c vanishes on delta_f when B(c,f) is not in 2 pi Z"},
      {"gauge.antisymmetry", "B(G_h f, k) = -B(f, G_h k)"},
      {"gauge.nilpotent", "G_g G_h = 0"},
      {"gauge.composition", "T_h^t T_k^s f = f + t G_h f + s G_k f"},
      {"gauge.quadratic_scaling", "T_{th} f = f + t^2 (T_h f - f)"},
      {"gauge.k_unitary", "T_h^t preserves K and B"},
      {"gauge.fixed_points", "T_h f = f for all h iff B(f, G_h f) = 0 for all h iff p.f = 0"},
      {"krein.p_space", "K >= 0 on the gauge-invariant space p with kernel exactly p0"},
      {"krein.coulomb", "K is strictly positive on the Coulomb space"},
      {"krein.coulomb_nondegenerate", "B is nondegenerate on the Coulomb space"},
      {"krein.inclusions", "Maxwell space is strictly inside p0, p0 and Coulomb space inside p"},
      {"decompose.round_trip", "f in p splits as Coulomb part plus p h"},
      {"decompose.uniqueness", "the Coulomb part has no p0 component"},
      {"cauchy.identity", "Cauchy-data pairing reproduces B"},
      {"cauchy.antisymmetry", "Cauchy-data pairing vanishes for f = h"},
      {"causality.weak", "observables of spacelike regions commute"},
      {"causality.field_witness", "gauge constraints of spacelike regions fail to commute with fields"},
      {"net.isotony", "X and s are isotonous with s(B1) = s(B2) n X(B1)"},
      {"net.reduction_isotony", "o(B1) in o(B2) and o(B1) commutes with s(B2)"},
      {"net.covariance", "Poincare maps are symplectic and carry X, s, o of B onto those of gB"},
      {"net.functoriality", "reduced inclusions compose and preserve the reduced forms"},
      {"net.counterexamples", "hand-built nets fail exactly the axiom they violate"},
      {"fock.ccr", "[A(f), A(h)] = i B(f,h)"},
      {"fock.gauge_commutator", "[chi* chi, A(f)] = -i A(G_h f)"},
      {"fock.gauge_derivative", "d/dt Gamma(T_h^t) at 0 equals i chi* chi"},
      {"fock.physical_subspace", "joint kernel of the chi(h) is the Fock space over C p"},
      {"fock.null_space", "null vectors of the physical subspace have a p0 factor"},
      {"fock.quotient_isometry", "physical quotient is isometric to the Fock space over p/p0"},
      {"fock.maxwell_quotient", "fields of the Maxwell space vanish on the physical quotient"},
      {"fock.vacuum_weyl", "vacuum Weyl series approaches exp(-K(f,f)/4)"},
      {"spectral.positive_energy", "P0 >= 0 and dGamma(P0) >= 0"},
      {"spectral.cone", "one-particle momenta lie on the light cone, multi-particle in V+"},
      {"spectral.vacuum_invariance", "translations leave the vacuum invariant"},
      {"global_local.dimensions", "reduction of the local net equals the global reduction"},
      {"global_local.form_preserving", "the injection of local into global reduction preserves forms"},
  };
  return reg;
}

const CheckInfo& registry_entry(const std::string& id) {
  for (const auto& c : check_registry())
    if (c.id == id) return c;
  throw std::out_of_range("unregistered check id '" + id + "'");
}

CheckResult make_check(const std::string& id, bool pass, double residual, double tolerance, json detail) {
  CheckResult r;
  r.id = id;
  r.anchor = registry_entry(id).anchor;
  r.pass = pass;
  r.residual = residual;
  r.tolerance = tolerance;
  r.detail = std::move(detail);
  return r;
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

json to_json(const Report& r, bool timings) {
  json out;
  out["schema"] = 1;
  out["scenario"] = r.echo;
  json checks = json::array();
  int passed = 0;
  for (const auto& c : r.checks) {
    json e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["status"] = c.pass ? "PASS" : "FAIL";
    e["residual"] = c.residual;
    e["tolerance"] = c.tolerance;
    if (timings) e["runtime"] = c.runtime;
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
    passed += c.pass;
  }
  out["checks"] = std::move(checks);
  out["summary"] = {{"total", r.checks.size()}, {"passed", passed}, {"failed", int(r.checks.size()) - passed}};
  return out;
}

std::string dump_report(const Report& r, bool timings) { return to_json(r, timings).dump(2) + "\n"; }

}  // namespace ccr
