#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ccr/errors.hpp"
#include "ccr/weyl.hpp"

using namespace ccr;

namespace {

struct Fixture {
  SpacePtr space = SymplecticSpace::darboux(2);
  LabelBasisPtr lb = LabelBasis::coordinates(space);
  GroupLabel q1{{1, 0, 0, 0}}, p1{{0, 1, 0, 0}}, q2{{0, 0, 1, 0}};
  WeylElement d(const GroupLabel& f, cplx c = 1.0) const { return WeylElement::generator(lb, f, c); }
};

cplx coeff(const WeylElement& a, const GroupLabel& f) {
  auto it = a.terms().find(f);
  return it == a.terms().end() ? cplx(0) : it->second;
}

}  // namespace

TEST_CASE_FIXTURE(Fixture, "product carries the half-form phase") {
  WeylElement ab = weyl_mul(d(q1), d(p1));
  REQUIRE(ab.terms().size() == 1);
  cplx c = coeff(ab, q1 + p1);
  CHECK(std::abs(c - std::exp(cplx(0, 0.5))) < 1e-15);
  WeylElement ba = weyl_mul(d(p1), d(q1));
  CHECK(std::abs(coeff(ba, q1 + p1) - std::exp(cplx(0, -0.5))) < 1e-15);
}

TEST_CASE_FIXTURE(Fixture, "commuting generators multiply without phase") {
  WeylElement ab = weyl_mul(d(q1), d(q2));
  CHECK(std::abs(coeff(ab, q1 + q2) - 1.0) < 1e-15);
  CHECK(commutator(d(q1), d(q2)).terms().empty() == (norm1(commutator(d(q1), d(q2))) < 1e-15));
  CHECK(norm1(commutator(d(q1), d(q2))) < 1e-15);
}

TEST_CASE_FIXTURE(Fixture, "identity and star") {
  WeylElement one = WeylElement::identity(lb);
  WeylElement a = d(q1, cplx(2, 1)) + d(p1, cplx(0, 3));
  CHECK(weyl_distance(weyl_mul(one, a), a) < 1e-15);
  WeylElement s = weyl_star(a);
  CHECK(std::abs(coeff(s, -q1) - cplx(2, -1)) < 1e-15);
  CHECK(std::abs(coeff(s, -p1) - cplx(0, -3)) < 1e-15);
  CHECK(weyl_distance(weyl_star(s), a) < 1e-15);
}

TEST_CASE_FIXTURE(Fixture, "generators are unitary") {
  WeylElement u = weyl_mul(weyl_star(d(q1 + p1)), d(q1 + p1));
  CHECK(weyl_distance(u, WeylElement::identity(lb)) < 1e-15);
}

TEST_CASE_FIXTURE(Fixture, "norms of a two-term element") {
  WeylElement a = d(q1, 3.0) + d(p1, cplx(0, 4));
  CHECK(norm1(a) == doctest::Approx(7));
  CHECK(norm2(a) == doctest::Approx(5));
  CHECK(central_state(weyl_mul(weyl_star(a), a)).real() == doctest::Approx(25));
}

TEST_CASE_FIXTURE(Fixture, "central state picks the identity coefficient") {
  WeylElement a = WeylElement::identity(lb) * cplx(0.5, 0) + d(q1, 9.0);
  CHECK(central_state(a) == cplx(0.5, 0));
}

TEST_CASE_FIXTURE(Fixture, "characteristic state is one on s and zero off s") {
  Mat sv = Mat::Zero(4, 1);
  sv(0, 0) = 1;
  auto w = StateFunctional::char_subspace(Subspace(space, sv));
  CHECK(w(d(q1)) == cplx(1));
  CHECK(w(d(p1)) == cplx(0));
  CHECK(w(d(q1 + q2)) == cplx(0));
  CHECK(is_dirac_state(w, lb, {q1}));
  CHECK_FALSE(is_dirac_state(StateFunctional::central(), lb, {q1}));
}

TEST_CASE_FIXTURE(Fixture, "characteristic state needs a first-class subspace") {
  Mat sv = Mat::Zero(4, 2);
  sv(0, 0) = sv(1, 1) = 1;
  CHECK_THROWS_AS(StateFunctional::char_subspace(Subspace(space, sv)), PreconditionViolation);
}

TEST_CASE_FIXTURE(Fixture, "quasifree state is a Gaussian in K") {
  auto w = StateFunctional::quasifree(Mat::Identity(4, 4));
  CHECK(std::abs(w(d(q1 + p1)) - std::exp(-0.5)) < 1e-15);
}

TEST_CASE_FIXTURE(Fixture, "Gram matrix of the central state is positive") {
  std::vector<WeylElement> els{d(q1) + d(p1), d(q1, cplx(0, 1)) - d(q2), d(p1 + q2, 2.0)};
  auto g = gram_psd_check(StateFunctional::central(), els);
  CHECK(g.pass);
  CHECK(g.minEig >= -1e-12);
}

TEST_CASE_FIXTURE(Fixture, "nonregularity probe forces zero off the constraint") {
  Mat sv = Mat::Zero(4, 1);
  sv(0, 0) = 1;
  auto w = StateFunctional::char_subspace(Subspace(space, sv));
  auto pr = nonregularity_probe(w, lb, q1, p1);
  CHECK(pr.pairing == doctest::Approx(1));
  CHECK(pr.forcedZero);
  CHECK(pr.value == cplx(0));
  // B(c, f) = 0: no constraint on w(delta_f)
  auto pr2 = nonregularity_probe(w, lb, q1, q2);
  CHECK_FALSE(pr2.forcedZero);
}

TEST_CASE_FIXTURE(Fixture, "label arithmetic") {
  GroupLabel z = q1 + (-q1);
  CHECK(z.is_zero());
  Vec r = d(q1).realize(q1 + p1);
  CHECK(r(0) == 1);
  CHECK(r(1) == 1);
}
