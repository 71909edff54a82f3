#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccr/errors.hpp"
#include "ccr/reduce.hpp"
#include "ccr/suites.hpp"

using namespace ccr;

namespace {

Mat cols(int n, std::initializer_list<int> idx) {
  Mat v = Mat::Zero(n, Eigen::Index(idx.size()));
  int c = 0;
  for (int i : idx) v(i, c++) = 1;
  return v;
}

bool all_pass(const std::vector<CheckResult>& v) {
  for (const auto& c : v)
    if (!c.pass) return false;
  return !v.empty();
}

}  // namespace

TEST_CASE("reduction by one coordinate constraint") {
  auto sp = SymplecticSpace::darboux(3);
  auto r = t_reduce(Subspace(sp, cols(6, {0})));
  CHECK(r.firstClass);
  CHECK(r.commutant.rank() == 5);
  CHECK(r.physicalDim == 4);
  CHECK(r.doubleCommutant);
  CHECK(r.nondegenerate);
}

TEST_CASE("Lagrangian constraints leave nothing") {
  auto sp = SymplecticSpace::darboux(2);
  auto r = t_reduce(Subspace(sp, cols(4, {0, 2})));
  CHECK(r.physicalDim == 0);
}

TEST_CASE("zero constraints keep the whole space") {
  auto sp = SymplecticSpace::darboux(2);
  auto r = t_reduce(Subspace::zero(sp));
  CHECK(r.physicalDim == 4);
  CHECK(r.nondegenerate);
}

TEST_CASE("second-class constraints are rejected with the offending pair") {
  auto sp = SymplecticSpace::darboux(2);
  try {
    t_reduce(Subspace(sp, cols(4, {0, 1})));
    FAIL("expected FirstClassViolation");
  } catch (const FirstClassViolation& e) {
    CHECK(std::abs(e.value) == doctest::Approx(1));
  }
}

TEST_CASE("degenerate ambient form: s'' larger than s gives a degenerate quotient") {
  // F = q1 ^ p1 on R^3, third axis in the radical; s = 0 has s'' = radical
  Mat F = Mat::Zero(3, 3);
  F(0, 1) = 1;
  F(1, 0) = -1;
  auto sp = SymplecticSpace::from_dense(F);
  auto r = t_reduce(Subspace::zero(sp));
  CHECK_FALSE(r.doubleCommutant);
  CHECK_FALSE(r.nondegenerate);
  auto r2 = t_reduce(Subspace(sp, cols(3, {2})));
  CHECK(r2.doubleCommutant);
  CHECK(r2.nondegenerate);
  CHECK(r2.physicalDim == 2);
}

TEST_CASE("staged reduction matches single reduction") {
  auto sp = SymplecticSpace::darboux(3);
  std::vector<Subspace> chain{Subspace(sp, cols(6, {0})), Subspace(sp, cols(6, {0, 2}))};
  auto st = reduce_by_stages(chain);
  CHECK(st.finalQuotient.repDim == 2);
  CHECK(st.single.physicalDim == 2);
  CHECK(st.isoInvertible);
  CHECK(st.isoResidual < 1e-12);
}

TEST_CASE("staged reduction rejects non-nested chains") {
  auto sp = SymplecticSpace::darboux(2);
  std::vector<Subspace> chain{Subspace(sp, cols(4, {0})), Subspace(sp, cols(4, {2}))};
  CHECK_THROWS_AS(reduce_by_stages(chain), std::invalid_argument);
}

TEST_CASE("staged reduction survives a numerically zero stage form") {
  // degenerate ambient form where the first stage kills the whole form
  Mat F = Mat::Zero(4, 4);
  F(0, 1) = 1;
  F(1, 0) = -1;
  auto sp = SymplecticSpace::from_dense(F);
  Mat s1(4, 1), s2(4, 2);
  s1 << 1, 0, 0, 0;
  s2 << 1, 0, 0, 0, 0, 1, 0, 1;
  auto st = reduce_by_stages({Subspace(sp, s1), Subspace(sp, s2)});
  CHECK(st.finalQuotient.repDim == st.single.physicalDim);
}

TEST_CASE("equivalent constraints and maximal constraints") {
  auto sp = SymplecticSpace::darboux(2);
  Mat a(4, 2), b(4, 2);
  a << 1, 0, 0, 0, 0, 1, 0, 0;
  b << 1, 1, 0, 0, 1, -1, 0, 0;
  CHECK(equivalent_constraints(Subspace(sp, a), Subspace(sp, b)));
  auto m = maximal_linear_constraints(Subspace(sp, cols(4, {0})));
  CHECK(subspace_contains(m.maximal, Subspace(sp, cols(4, {0}))));
}

TEST_CASE("global and local reductions agree on a product system") {
  auto sp = SymplecticSpace::darboux(2);
  std::vector<Subspace> obs{Subspace(sp, cols(4, {0, 1, 2})), Subspace(sp, cols(4, {0, 2}))};
  std::vector<Subspace> cons{Subspace(sp, cols(4, {2})), Subspace(sp, cols(4, {2}))};
  auto r = global_vs_local(obs, cons);
  CHECK(r.dimR0 == 2);
  CHECK(r.dimRe == 2);
  CHECK(r.onto);
  CHECK(r.formResidual < 1e-14);
}

TEST_CASE("seeded random suites are reproducible and pass") {
  auto a = suites::tprocedure(11, 30);
  auto b = suites::tprocedure(11, 30);
  CHECK(all_pass(a));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].residual == b[i].residual);
  CHECK(all_pass(suites::stages(11, 30)));
}
