#include "ccr/linalg.hpp"

#include <algorithm>
#include <vector>

#include <lapacke.h>

namespace ccr {

namespace {

template <class M>
Svd<M> jacobi_svd(const M& a, SvdVectors want) {
  unsigned opts = want == SvdVectors::None ? 0u
                  : want == SvdVectors::Thin ? unsigned(Eigen::ComputeThinU | Eigen::ComputeThinV)
                                             : unsigned(Eigen::ComputeThinU | Eigen::ComputeFullV);
  Eigen::JacobiSVD<M> j(a, opts);
  Svd<M> out;
  out.s = j.singularValues();
  if (want != SvdVectors::None) {
    out.U = j.matrixU();
    out.V = j.matrixV();
  }
  return out;
}

// LAPACK divide and conquer; Jacobi if it does not converge.
template <class M, class F>
Svd<M> gesdd(const M& a, SvdVectors want, F call) {
  using S = typename M::Scalar;
  const lapack_int m = lapack_int(a.rows()), n = lapack_int(a.cols()), k = std::min(m, n);
  Svd<M> out;
  out.s.resize(k);
  if (k == 0) {
    out.U = M(m, 0);
    out.V = want == SvdVectors::FullV ? M(M::Identity(n, n)) : M(n, 0);
    return out;
  }
  M work = a;
  char jobz = want == SvdVectors::None ? 'N' : want == SvdVectors::Thin ? 'S' : 'A';
  if (jobz == 'N') {
    out.U.resize(1, 1);
    out.V.resize(1, 1);
  } else {
    out.U.resize(m, jobz == 'A' ? m : k);
    out.V.resize(jobz == 'A' ? n : k, n);  // V^H
  }
  lapack_int info = call(LAPACK_COL_MAJOR, jobz, m, n, reinterpret_cast<S*>(work.data()), m, out.s.data(),
                         out.U.data(), lapack_int(out.U.rows()), out.V.data(), lapack_int(out.V.rows()));
  if (info > 0) return jacobi_svd(a, want);
  if (info < 0) throw std::runtime_error("gesdd: invalid argument " + std::to_string(-info));
  if (jobz == 'N') {
    out.U = M(m, 0);
    out.V = M(n, 0);
    return out;
  }
  out.V = out.V.adjoint().eval();
  if (jobz == 'A') out.U = out.U.leftCols(k).eval();
  return out;
}

int count_above(const Vec& s, double cutoff) {
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++r;
  return r;
}

double cutoff_for(const Vec& s, double tol, double ref) {
  double smax = s.size() ? s(0) : 0.0;
  return tol * std::max(smax, ref);
}

}  // namespace

Svd<Mat> svd(const Mat& a, SvdVectors want) {
  return gesdd(a, want, [](int layout, char jobz, lapack_int m, lapack_int n, double* x, lapack_int lda, double* s,
                           double* u, lapack_int ldu, double* vt, lapack_int ldvt) {
    return LAPACKE_dgesdd(layout, jobz, m, n, x, lda, s, u, ldu, vt, ldvt);
  });
}

Svd<CMat> svd(const CMat& a, SvdVectors want) {
  return gesdd(a, want, [](int layout, char jobz, lapack_int m, lapack_int n, cplx* x, lapack_int lda, double* s,
                           cplx* u, lapack_int ldu, cplx* vt, lapack_int ldvt) {
    return LAPACKE_zgesdd(layout, jobz, m, n, reinterpret_cast<lapack_complex_double*>(x), lda, s,
                          reinterpret_cast<lapack_complex_double*>(u), ldu,
                          reinterpret_cast<lapack_complex_double*>(vt), ldvt);
  });
}

SvdInfo svd_info(const Mat& a, double tol, double ref) {
  SvdInfo out;
  if (a.size() == 0) return out;
  out.sigma = svd(a, SvdVectors::None).s;
  out.cutoff = cutoff_for(out.sigma, tol, ref);
  if (out.sigma.size() && out.sigma(0) == 0.0) out.cutoff = 0;
  out.rank = count_above(out.sigma, out.cutoff);
  return out;
}

int numerical_rank(const Mat& a, double tol, double ref) {
  return svd_info(a, tol, ref).rank;
}

Mat range_basis(const Mat& a, double tol, double ref) {
  if (a.size() == 0) return Mat(a.rows(), 0);
  auto d = svd(a, SvdVectors::Thin);
  int r = count_above(d.s, cutoff_for(d.s, tol, ref));
  Mat q = d.U.leftCols(r);
  fix_signs(q);
  return q;
}

Mat orth_complement(const Mat& q) {
  const Eigen::Index n = q.rows(), r = q.cols();
  if (r == 0) return Mat::Identity(n, n);
  if (r >= n) return Mat(n, 0);
  Eigen::HouseholderQR<Mat> qr(q);
  Mat full = qr.householderQ() * Mat::Identity(n, n);
  Mat c = full.rightCols(n - r);
  // re-orthogonalize once against q for safety
  c -= q * (q.transpose() * c);
  Eigen::HouseholderQR<Mat> qr2(c);
  Mat out = qr2.householderQ() * Mat::Identity(n, n - r);
  fix_signs(out);
  return out;
}

Mat null_space(const Mat& a, double tol, double ref) {
  const Eigen::Index n = a.cols();
  if (n == 0) return Mat(0, 0);
  if (a.rows() == 0) return Mat::Identity(n, n);
  if (a.rows() >= n) {
    auto d = svd(a, SvdVectors::Thin);
    double cut = cutoff_for(d.s, tol, ref);
    if (d.s.size() && d.s(0) == 0.0) cut = 0;
    int r = count_above(d.s, cut);
    Mat z = d.V.rightCols(n - r);
    fix_signs(z);
    return z;
  }
  auto d = svd(a, SvdVectors::Thin);
  double cut = cutoff_for(d.s, tol, ref);
  if (d.s.size() && d.s(0) == 0.0) cut = 0;
  int r = count_above(d.s, cut);
  return orth_complement(d.V.leftCols(r));
}

void fix_signs(Mat& q) {
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      if (std::abs(q(i, j)) > 1e-12) {
        if (q(i, j) < 0) q.col(j) *= -1.0;
        break;
      }
    }
  }
}

namespace {

bool mostly_zero(const Mat& a) {
  if (a.size() < 65536) return false;
  return (a.array() != 0.0).count() * 10 < a.size();
}

}  // namespace

double projection_residual(const Mat& q, const Mat& b) {
  if (b.cols() == 0) return 0.0;
  if (q.cols() == 0) return b.colwise().norm().maxCoeff();
  Mat r;
  if (mostly_zero(q)) {
    SpMat qs = q.sparseView();
    Mat c = qs.transpose() * b;
    r = b - qs * c;
  } else {
    r = b - q * (q.transpose() * b);
  }
  return r.colwise().norm().maxCoeff();
}

Vec symmetric_eigenvalues(const Mat& g) {
  const Eigen::Index n = g.rows();
  if (n == 0) return Vec();
  // connected components of the coupling graph
  std::vector<int> comp(std::size_t(n), -1);
  std::vector<std::vector<Eigen::Index>> blocks;
  for (Eigen::Index s = 0; s < n; ++s) {
    if (comp[std::size_t(s)] >= 0) continue;
    std::vector<Eigen::Index> members{s}, stack{s};
    comp[std::size_t(s)] = int(blocks.size());
    while (!stack.empty()) {
      Eigen::Index i = stack.back();
      stack.pop_back();
      for (Eigen::Index j = 0; j < n; ++j)
        if (comp[std::size_t(j)] < 0 && (g(i, j) != 0.0 || g(j, i) != 0.0)) {
          comp[std::size_t(j)] = int(blocks.size());
          members.push_back(j);
          stack.push_back(j);
        }
    }
    blocks.push_back(std::move(members));
  }
  std::vector<double> ev;
  ev.reserve(std::size_t(n));
  for (const auto& b : blocks) {
    const Eigen::Index k = Eigen::Index(b.size());
    Mat sub(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = 0.5 * (g(b[i], b[j]) + g(b[j], b[i]));
    Eigen::SelfAdjointEigenSolver<Mat> es(sub, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < k; ++i) ev.push_back(es.eigenvalues()(i));
  }
  std::sort(ev.begin(), ev.end());
  return Eigen::Map<Vec>(ev.data(), n);
}

int orthonormal_rank(const Mat& q, double tol) {
  if (q.cols() == 0) return 0;
  Mat gram;
  if (mostly_zero(q)) {
    SpMat qs = q.sparseView();
    gram = Mat(qs.transpose() * qs);
  } else {
    gram = q.transpose() * q;
  }
  gram -= Mat::Identity(q.cols(), q.cols());
  // singular values of q lie in [sqrt(1 - e), sqrt(1 + e)] with e = ||q^T q - I||_2 <= ||.||_F
  if (gram.norm() < 0.5) return int(q.cols());
  return numerical_rank(q, tol);
}

double max_abs(const Mat& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

double min_hermitian_eig(const CMat& g) {
  if (g.size() == 0) return 0.0;
  CMat h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace ccr
