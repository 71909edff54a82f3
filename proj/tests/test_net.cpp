#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccr/errors.hpp"
#include "ccr/net.hpp"
#include "ccr/suites.hpp"

using namespace ccr;

namespace {

SpacePtr space2() { return SymplecticSpace::darboux(2); }

Subspace span(const SpacePtr& sp, std::initializer_list<int> idx) {
  Mat v = Mat::Zero(sp->dim(), Eigen::Index(idx.size()));
  int c = 0;
  for (int i : idx) v(i, c++) = 1;
  return Subspace(sp, v);
}

// A <= C, B <= C, A spacelike to B; first pair carries the constraint q1.
LocalNet good_net() {
  auto sp = space2();
  RegionPoset poset({"A", "B", "C"}, {{0, 2}, {1, 2}}, {{0, 1}});
  LocalNet n(poset, sp);
  n.set_region(0, span(sp, {0, 1}), span(sp, {0}));
  n.set_region(1, span(sp, {2}), Subspace::zero(sp));
  n.set_region(2, Subspace::full(sp), span(sp, {0}));
  return n;
}

}  // namespace

TEST_CASE("poset is reflexive and symmetrizes spacelike pairs") {
  RegionPoset p({"A", "B", "C"}, {{0, 2}}, {{1, 0}});
  CHECK(p.leq(1, 1));
  CHECK(p.leq(0, 2));
  CHECK_FALSE(p.leq(2, 0));
  CHECK(p.spacelike(0, 1));
  CHECK(p.spacelike(1, 0));
  CHECK(p.strict_pairs().size() == 1);
  CHECK(p.spacelike_pairs().size() == 1);
  CHECK(p.index("C") == 2);
}

TEST_CASE("observable space is X(B) inside the commutant of s(B)") {
  auto n = good_net();
  // X(A) = span(q1, p1), s(A) = q1: o(A) = span(q1)
  CHECK(n.o(0).rank() == 1);
  CHECK(n.o(0).contains_vector(Vec::Unit(4, 0)));
  CHECK(n.o(2).rank() == 3);
}

TEST_CASE("region data must satisfy s(B) in X(B)") {
  auto sp = space2();
  LocalNet n(RegionPoset({"A"}, {}), sp);
  CHECK_THROWS(n.set_region(0, span(sp, {0}), span(sp, {1})));
}

TEST_CASE("a consistent net passes every weak axiom") {
  auto n = good_net();
  CHECK(check_isotony(n).pass);
  CHECK(check_reduction_isotony(n).pass);
  CHECK(check_weak_causality(n, 1e-10).pass);
  CHECK(check_quotient_functoriality(n).pass);
  GroupAction id{"identity", {{0, 0}, {1, 1}, {2, 2}}, Mat::Identity(4, 4)};
  CHECK(check_covariance(n, {id}).pass);
}

TEST_CASE("causality fails for a conjugate pair declared spacelike") {
  auto sp = space2();
  RegionPoset poset({"A", "B"}, {}, {{0, 1}});
  LocalNet n(poset, sp);
  n.set_region(0, span(sp, {0}), Subspace::zero(sp));
  n.set_region(1, span(sp, {1}), Subspace::zero(sp));
  auto r = check_weak_causality(n, 1e-10);
  CHECK_FALSE(r.pass);
  CHECK(r.maxResidual == doctest::Approx(1));
}

TEST_CASE("a symplectic swap of the two pairs is not covariance for a fixed region map") {
  auto n = good_net();
  Mat swap = Mat::Zero(4, 4);
  swap(2, 0) = swap(3, 1) = swap(0, 2) = swap(1, 3) = 1;
  GroupAction act{"swap", {{0, 0}}, swap};
  CHECK_FALSE(check_covariance(n, {act}).pass);
}

TEST_CASE("each counterexample net violates exactly its target axiom") {
  auto r = suites::net_counterexamples();
  REQUIRE(r.size() == 1);
  CHECK(r[0].pass);
  CHECK(r[0].detail["cases"].size() == 4);
}
