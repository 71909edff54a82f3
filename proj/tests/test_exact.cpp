#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ccr/exact.hpp"

using namespace ccr;
using namespace ccr::exact;

TEST_CASE("rank of a rank-deficient integer matrix") {
  Eigen::MatrixXi m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  CHECK(rank(QMatrix::from_integers(m)) == 2);
}

TEST_CASE("rref finds pivots") {
  Eigen::MatrixXi m(2, 3);
  m << 0, 2, 4, 0, 1, 2;
  QMatrix q = QMatrix::from_integers(m);
  auto piv = rref(q);
  REQUIRE(piv.size() == 1);
  CHECK(piv[0] == 1);
  CHECK(q(0, 2) == 2);
}

TEST_CASE("null space columns are annihilated exactly") {
  Eigen::MatrixXi m(2, 4);
  m << 1, 1, 0, 3, 0, 2, 1, 1;
  QMatrix q = QMatrix::from_integers(m);
  QMatrix z = null_space(q);
  CHECK(z.cols() == 2);
  QMatrix p = q * z;
  for (int i = 0; i < p.rows(); ++i)
    for (int j = 0; j < p.cols(); ++j) CHECK(p(i, j) == 0);
}

TEST_CASE("commutant dimension and restricted form rank") {
  Eigen::MatrixXi F = Eigen::MatrixXi::Zero(4, 4);
  F(0, 1) = 1;
  F(1, 0) = -1;
  F(2, 3) = 1;
  F(3, 2) = -1;
  Eigen::MatrixXi s(4, 1);
  s << 1, 0, 0, 0;
  auto Fq = QMatrix::from_integers(F);
  auto Sq = QMatrix::from_integers(s);
  CHECK(commutant_dim(Fq, Sq) == 3);
  CHECK(restricted_form_rank(Fq, Sq) == 0);
  Eigen::MatrixXi w(4, 2);
  w << 1, 0, 0, 1, 0, 0, 0, 0;
  CHECK(restricted_form_rank(Fq, QMatrix::from_integers(w)) == 2);
}

TEST_CASE("integral doubles convert exactly and others are rejected") {
  Mat a(1, 2);
  a << 3, -4;
  QMatrix q = QMatrix::from_integral_doubles(a);
  CHECK(q(0, 1) == -4);
  a(0, 0) = 0.5;
  CHECK_THROWS(QMatrix::from_integral_doubles(a));
}

TEST_CASE("transpose and product round trip to double") {
  Eigen::MatrixXi m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  QMatrix q = QMatrix::from_integers(m);
  Mat p = (q * q.transpose()).to_double();
  CHECK(p(0, 0) == 14);
  CHECK(p(0, 1) == 32);
  CHECK(p(1, 1) == 77);
}

TEST_CASE("rationals stay exact where doubles lose rank") {
  // columns differ by 1e-17 relative, which floating point cannot separate
  Eigen::MatrixXi m(2, 2);
  m << 100000000, 100000001, 100000000, 100000000;
  CHECK(rank(QMatrix::from_integers(m)) == 2);
}
