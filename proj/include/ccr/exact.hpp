#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "ccr/linalg.hpp"

namespace ccr::exact {

using Rational = boost::multiprecision::cpp_rational;

// Dense row-major rational matrix.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols) : r_(rows), c_(cols), a_(std::size_t(rows) * cols) {}

  static QMatrix from_integers(const Eigen::MatrixXi& m);
  // Exact conversion; throws if an entry is not an integer.
  static QMatrix from_integral_doubles(const Mat& m);

  int rows() const { return r_; }
  int cols() const { return c_; }
  Rational& operator()(int i, int j) { return a_[std::size_t(i) * c_ + j]; }
  const Rational& operator()(int i, int j) const { return a_[std::size_t(i) * c_ + j]; }

  QMatrix transpose() const;
  QMatrix operator*(const QMatrix& o) const;
  Mat to_double() const;

 private:
  int r_ = 0, c_ = 0;
  std::vector<Rational> a_;
};

// Reduced row echelon form in place, returns pivot columns.
std::vector<int> rref(QMatrix& m);

int rank(QMatrix m);

// Basis of the null space, one column per free variable.
QMatrix null_space(const QMatrix& m);

// dim of {x : x^T F s = 0 for all columns s}, i.e. n - rank(s^T F^T).
int commutant_dim(const QMatrix& form, const QMatrix& s);

// rank of s^T F s.
int restricted_form_rank(const QMatrix& form, const QMatrix& s);

}  // namespace ccr::exact
