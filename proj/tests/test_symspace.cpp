#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccr/errors.hpp"
#include "ccr/symspace.hpp"

using namespace ccr;

namespace {

Mat cols(int n, std::initializer_list<int> idx) {
  Mat v = Mat::Zero(n, Eigen::Index(idx.size()));
  int c = 0;
  for (int i : idx) v(i, c++) = 1;
  return v;
}

}  // namespace

TEST_CASE("darboux form pairs q_i with p_i") {
  auto sp = SymplecticSpace::darboux(2);
  Mat F = sp->dense_form();
  CHECK(F(0, 1) == 1);
  CHECK(F(1, 0) == -1);
  CHECK(F(2, 3) == 1);
  CHECK(F(0, 2) == 0);
  CHECK(F(0, 3) == 0);
  CHECK(sp->scale() == 1);
}

TEST_CASE("from_upper mirrors the upper triangle") {
  Mat u = Mat::Zero(3, 3);
  u(0, 1) = 2;
  u(1, 2) = -1;
  u(2, 0) = 7;  // ignored
  auto sp = SymplecticSpace::from_upper(u);
  Mat F = sp->dense_form();
  CHECK(F(1, 0) == -2);
  CHECK(F(2, 1) == 1);
  CHECK(F(0, 2) == 0);
}

TEST_CASE("subspace keeps the span of dependent columns") {
  auto sp = SymplecticSpace::darboux(2);
  Mat v(4, 3);
  v << 1, 2, 3, 0, 0, 0, 1, 2, 3, 0, 0, 1;
  Subspace s(sp, v);
  CHECK(s.rank() == 2);
  CHECK(s.contains_vector(v.col(1)));
  CHECK_FALSE(s.contains_vector(Vec::Unit(4, 1)));
  CHECK((s.basis().transpose() * s.basis() - Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("commutant of a Lagrangian is itself") {
  auto sp = SymplecticSpace::darboux(3);
  Subspace L(sp, cols(6, {0, 2, 4}));
  Subspace c = commutant(L);
  CHECK(subspace_equal(c, L));
  CHECK(is_first_class(L));
  CHECK(double_commutant_holds(L));
}

TEST_CASE("commutant of a single constraint has codimension one") {
  auto sp = SymplecticSpace::darboux(3);
  Subspace s(sp, cols(6, {0}));
  Subspace c = commutant(s);
  CHECK(c.rank() == 5);
  CHECK(subspace_contains(c, s));
  CHECK_FALSE(c.contains_vector(Vec::Unit(6, 1)));
}

TEST_CASE("second-class pair is not first class") {
  auto sp = SymplecticSpace::darboux(2);
  CHECK_FALSE(is_first_class(Subspace(sp, cols(4, {0, 1}))));
}

TEST_CASE("radical of a degenerate subspace") {
  auto sp = SymplecticSpace::darboux(2);
  Subspace w(sp, cols(4, {0, 1, 2}));
  Subspace r = radical(w);
  CHECK(r.rank() == 1);
  CHECK(r.contains_vector(Vec::Unit(4, 2)));
  CHECK_FALSE(is_nondegenerate(w));
  CHECK(is_nondegenerate(Subspace(sp, cols(4, {0, 1}))));
}

TEST_CASE("quotient by the constraint has the factored form") {
  auto sp = SymplecticSpace::darboux(2);
  Subspace s(sp, cols(4, {0}));
  QuotientSpace q = quotient(commutant(s), s);
  CHECK(q.repDim == 2);
  CHECK(is_nondegenerate_form(q.factoredForm));
  CHECK((q.lift.transpose() * s.basis()).norm() < 1e-14);
}

TEST_CASE("quotient rejects a kernel outside the numerator") {
  auto sp = SymplecticSpace::darboux(2);
  CHECK_THROWS_AS(quotient(Subspace(sp, cols(4, {0})), Subspace(sp, cols(4, {1}))), PreconditionViolation);
}

TEST_CASE("quotient rejects a kernel outside the radical") {
  auto sp = SymplecticSpace::darboux(2);
  Subspace n(sp, cols(4, {0, 1}));
  CHECK_THROWS_AS(quotient(n, Subspace(sp, cols(4, {0}))), PreconditionViolation);
}

TEST_CASE("sum, intersection and image") {
  auto sp = SymplecticSpace::darboux(2);
  Subspace a(sp, cols(4, {0, 1})), b(sp, cols(4, {1, 2}));
  CHECK(subspace_sum(a, b).rank() == 3);
  Subspace i = subspace_intersect(a, b);
  CHECK(i.rank() == 1);
  CHECK(i.contains_vector(Vec::Unit(4, 1)));
  CHECK(subspace_intersect(a, Subspace::zero(sp)).rank() == 0);
  Mat swap = Mat::Zero(4, 4);
  swap(2, 0) = swap(3, 1) = swap(0, 2) = swap(1, 3) = 1;
  CHECK(subspace_equal(subspace_image(swap, a), Subspace(sp, cols(4, {2, 3}))));
}

TEST_CASE("canonical basis does not depend on the spanning set") {
  auto sp = SymplecticSpace::darboux(2);
  Mat v1(4, 2), v2(4, 2);
  v1 << 1, 0, 1, 1, 0, 1, 0, 0;
  v2 << 1, 2, 2, 2, 1, 0, 0, 0;
  Mat c1 = canonical_basis(Subspace(sp, v1)), c2 = canonical_basis(Subspace(sp, v2));
  CHECK((c1 - c2).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("rank helpers use a relative cutoff") {
  Mat a = Mat::Identity(3, 3);
  a(2, 2) = 1e-12;
  CHECK(numerical_rank(a) == 2);
  CHECK(numerical_rank(1e6 * a) == 2);
  CHECK(null_space(a).cols() == 1);
  CHECK(range_basis(a).cols() == 2);
}

TEST_CASE("svd wrapper matches the singular values of a known matrix") {
  Mat a(3, 2);
  a << 3, 0, 0, 2, 0, 0;
  auto d = svd(a, SvdVectors::Thin);
  CHECK(d.s(0) == doctest::Approx(3));
  CHECK(d.s(1) == doctest::Approx(2));
  CHECK((d.U * d.s.asDiagonal() * d.V.transpose() - a).norm() < 1e-14);
  CMat c = CMat::Zero(2, 3);
  c(0, 1) = cplx(0, 2);
  auto dc = svd(c, SvdVectors::FullV);
  CHECK(dc.V.rows() == 3);
  CHECK(dc.V.cols() == 3);
  CHECK(dc.s(0) == doctest::Approx(2));
}

TEST_CASE("blocked symmetric eigenvalues match a dense solve") {
  Mat g = Mat::Zero(5, 5);
  g(0, 0) = 2;
  g(0, 3) = g(3, 0) = 1;
  g(3, 3) = -1;
  g(1, 1) = 4;
  g(2, 4) = g(4, 2) = 3;
  Vec ev = symmetric_eigenvalues(g);
  Eigen::SelfAdjointEigenSolver<Mat> es(g);
  CHECK((ev - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("orthonormal rank certificate and fallback") {
  Mat q = Mat::Zero(4, 2);
  q(0, 0) = q(2, 1) = 1;
  CHECK(orthonormal_rank(q) == 2);
  q.col(1) = q.col(0);
  CHECK(orthonormal_rank(q) == 1);
}
