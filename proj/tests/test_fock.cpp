#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccr/fock.hpp"
#include "ccr/suites.hpp"

using namespace ccr;
using namespace ccr::fock;

TEST_CASE("truncated Fock space dimension") {
  // two modes, up to 3 particles: 1 + 2 + 3 + 4
  FockSpace F({1, 1}, 3);
  CHECK(F.dim() == 10);
  CHECK(F.index({0, 0}) == 0);
  CHECK(F.index({4, 0}) == -1);
  CHECK(F.sector(2).size() == 6);
}

TEST_CASE("canonical commutator holds below the truncation") {
  FockSpace F({1}, 4);
  CMat a = F.annihilate(0), ad = F.create(0);
  CMat c = a * ad - ad * a;
  for (int n = 0; n < 4; ++n) CHECK(std::abs(c(n, n) - 1.0) < 1e-14);
}

TEST_CASE("negative signature gives an indefinite metric") {
  FockSpace F({1, -1}, 2);
  CVec v = CVec::Zero(F.dim());
  v(F.index({0, 1})) = 1;
  CHECK(F.krein(v, v).real() == doctest::Approx(-1));
  v.setZero();
  v(F.index({0, 2})) = 1;
  CHECK(F.krein(v, v).real() == doctest::Approx(1));
  CHECK(F.krein(F.vacuum(), F.vacuum()).real() == doctest::Approx(1));
}

TEST_CASE("Krein adjoint is an involution") {
  FockSpace F({1, -1}, 2);
  CMat x = F.annihilate(1) + 2.0 * F.create(0);
  CMat d = F.krein_adjoint(F.krein_adjoint(x)) - x;
  CHECK(fock::max_abs(d) < 1e-14);
}

TEST_CASE("complex rank helpers") {
  CMat a = CMat::Zero(3, 3);
  a(0, 0) = cplx(0, 1);
  a(1, 1) = 2;
  CHECK(crank(a) == 2);
  CHECK(cnull_space(a).cols() == 1);
  CHECK(crange_basis(a).cols() == 2);
}

TEST_CASE("Fock and spectral suites pass on the small lattices") {
  suites::FockConfig c;
  c.N = 2;
  for (const auto& r : suites::fock(c, 17)) CHECK_MESSAGE(r.pass, r.id);
  for (const auto& r : suites::spectral(c)) CHECK_MESSAGE(r.pass, r.id);
}
