#include "ccr/exact.hpp"

#include <cmath>
#include <stdexcept>

namespace ccr::exact {

QMatrix QMatrix::from_integers(const Eigen::MatrixXi& m) {
  QMatrix q(int(m.rows()), int(m.cols()));
  for (int i = 0; i < q.rows(); ++i)
    for (int j = 0; j < q.cols(); ++j) q(i, j) = m(i, j);
  return q;
}

QMatrix QMatrix::from_integral_doubles(const Mat& m) {
  QMatrix q(int(m.rows()), int(m.cols()));
  for (int i = 0; i < q.rows(); ++i)
    for (int j = 0; j < q.cols(); ++j) {
      double v = m(i, j);
      if (v != std::round(v) || std::abs(v) > 1e15)
        throw std::invalid_argument("exact backend needs integer entries");
      q(i, j) = static_cast<long long>(v);
    }
  return q;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (c_ != o.r_) throw std::invalid_argument("QMatrix product: shape mismatch");
  QMatrix p(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const Rational& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.c_; ++j) p(i, j) += a * o(k, j);
    }
  return p;
}

Mat QMatrix::to_double() const {
  Mat m(r_, c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) m(i, j) = static_cast<double>((*this)(i, j));
  return m;
}

std::vector<int> rref(QMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int p = -1;
    for (int i = row; i < m.rows(); ++i)
      if (m(i, col) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    Rational inv = 1 / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rational f = m(i, col);
      for (int j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(QMatrix m) { return int(rref(m).size()); }

QMatrix null_space(const QMatrix& m) {
  QMatrix r = m;
  auto piv = rref(r);
  std::vector<bool> is_piv(m.cols(), false);
  for (int c : piv) is_piv[c] = true;
  std::vector<int> free;
  for (int c = 0; c < m.cols(); ++c)
    if (!is_piv[c]) free.push_back(c);
  QMatrix z(m.cols(), int(free.size()));
  for (std::size_t k = 0; k < free.size(); ++k) {
    z(free[k], int(k)) = 1;
    for (std::size_t i = 0; i < piv.size(); ++i) z(piv[i], int(k)) = -r(int(i), free[k]);
  }
  return z;
}

int commutant_dim(const QMatrix& form, const QMatrix& s) {
  QMatrix cond = (form * s).transpose();
  return form.cols() - rank(cond);
}

int restricted_form_rank(const QMatrix& form, const QMatrix& s) {
  return rank(s.transpose() * form * s);
}

}  // namespace ccr::exact
