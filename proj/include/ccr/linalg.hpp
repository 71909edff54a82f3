#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>

namespace ccr {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<double>;
using cplx = std::complex<double>;

// Relative cutoff on singular values, shared by every rank decision.
inline constexpr double kRankTol = 1e-10;

struct SvdInfo {
  Vec sigma;
  int rank = 0;
  double cutoff = 0;
};

// Singular values with rank = #{sigma > tol * max(sigma_max, ref)}.
// `ref` is an optional reference scale so that pure round-off matrices get rank 0.
SvdInfo svd_info(const Mat& a, double tol = kRankTol, double ref = 0);

// Singular values in decreasing order; U thin, V thin or full (n x n).
template <class M>
struct Svd {
  Vec s;
  M U, V;
};
enum class SvdVectors { None, Thin, FullV };
Svd<Mat> svd(const Mat& a, SvdVectors want);
Svd<CMat> svd(const CMat& a, SvdVectors want);
int numerical_rank(const Mat& a, double tol = kRankTol, double ref = 0);

// Orthonormal basis of the column span.
Mat range_basis(const Mat& a, double tol = kRankTol, double ref = 0);

// Orthonormal basis of {x : a x = 0}.
Mat null_space(const Mat& a, double tol = kRankTol, double ref = 0);

// Orthonormal complement of the span of orthonormal columns q inside R^n.
Mat orth_complement(const Mat& q);

// Flip column signs so that the first entry above 1e-12 is positive.
void fix_signs(Mat& q);

// Largest column norm of b - q q^T b for orthonormal q.
double projection_residual(const Mat& q, const Mat& b);

// Eigenvalues of a symmetric matrix in increasing order. Exact-zero couplings split the
// matrix into independent blocks that are solved separately.
Vec symmetric_eigenvalues(const Mat& g);
// Column rank of q, certified as full when ||q^T q - I||_F < 1/2; SVD rank otherwise.
int orthonormal_rank(const Mat& q, double tol = kRankTol);
// Max absolute entry, 0 for empty matrices.
double max_abs(const Mat& a);

// Hermitian minimum eigenvalue of a complex matrix (uses (G + G^H)/2).
double min_hermitian_eig(const CMat& g);

}  // namespace ccr
