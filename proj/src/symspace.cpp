#include "ccr/symspace.hpp"

#include <sstream>

#include "ccr/errors.hpp"

namespace ccr {

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient() && (a.dim() != b.dim()))
    throw std::invalid_argument("subspaces live in different ambient spaces");
}

}  // namespace

SymplecticSpace::SymplecticSpace(SpMat form, std::string label)
    : dim_(int(form.rows())), form_(std::move(form)), label_(std::move(label)) {
  if (dim_ < 1) throw std::invalid_argument("symplectic space needs dim >= 1");
  if (form_.rows() != form_.cols()) throw std::invalid_argument("form must be square");
  form_.makeCompressed();
  SpMat sym = form_ + SpMat(form_.transpose());
  sym.prune(0.0);
  if (sym.nonZeros() != 0) throw std::invalid_argument("form is not antisymmetric");
  scale_ = 0;
  Vec rowsum = Vec::Zero(dim_);
  for (int k = 0; k < form_.outerSize(); ++k)
    for (SpMat::InnerIterator it(form_, k); it; ++it) rowsum(it.row()) += std::abs(it.value());
  scale_ = rowsum.size() ? rowsum.maxCoeff() : 0.0;
}

std::shared_ptr<const SymplecticSpace> SymplecticSpace::from_upper(const Mat& upper,
                                                                  std::string label) {
  Mat f = Mat::Zero(upper.rows(), upper.cols());
  for (Eigen::Index i = 0; i < upper.rows(); ++i)
    for (Eigen::Index j = i + 1; j < upper.cols(); ++j) {
      f(i, j) = upper(i, j);
      f(j, i) = -upper(i, j);
    }
  return std::make_shared<const SymplecticSpace>(f.sparseView(), std::move(label));
}

std::shared_ptr<const SymplecticSpace> SymplecticSpace::from_dense(const Mat& form,
                                                                  std::string label) {
  if ((form + form.transpose()).cwiseAbs().maxCoeff() != 0.0)
    throw std::invalid_argument("form is not antisymmetric");
  return from_upper(form, std::move(label));
}

std::shared_ptr<const SymplecticSpace> SymplecticSpace::darboux(int pairs) {
  if (pairs < 1) throw std::invalid_argument("darboux needs at least one pair");
  Mat u = Mat::Zero(2 * pairs, 2 * pairs);
  for (int i = 0; i < pairs; ++i) u(2 * i, 2 * i + 1) = 1.0;
  return from_upper(u, "darboux" + std::to_string(2 * pairs));
}

Subspace::Subspace(SpacePtr ambient, const Mat& vectors) : ambient_(std::move(ambient)) {
  if (!ambient_) throw std::invalid_argument("subspace needs an ambient space");
  if (vectors.cols() > 0 && vectors.rows() != ambient_->dim())
    throw std::invalid_argument("subspace vectors have the wrong length");
  if (vectors.cols() == 0)
    basis_ = Mat(ambient_->dim(), 0);
  else
    basis_ = range_basis(vectors);
}

Subspace Subspace::zero(SpacePtr ambient) { return Subspace(ambient, Mat(ambient->dim(), 0)); }

Subspace Subspace::full(SpacePtr ambient) {
  Subspace s;
  s.ambient_ = ambient;
  s.basis_ = Mat::Identity(ambient->dim(), ambient->dim());
  return s;
}

Subspace Subspace::from_orthonormal(SpacePtr ambient, Mat q) {
  if (q.rows() != ambient->dim()) throw std::invalid_argument("basis has the wrong length");
  Subspace s;
  s.ambient_ = std::move(ambient);
  s.basis_ = std::move(q);
  return s;
}

Mat Subspace::project(const Mat& v) const { return basis_ * (basis_.transpose() * v); }

bool Subspace::contains_vector(const Vec& v, double tol) const {
  double n = v.norm();
  if (n == 0) return true;
  return (v - project(v)).norm() <= tol * n;
}

double form_eval(const SymplecticSpace& space, const Vec& f, const Vec& h) {
  if (f.size() != space.dim() || h.size() != space.dim())
    throw std::invalid_argument("form_eval: dimension mismatch");
  return f.dot(space.form() * h);
}

Mat restricted_form(const Subspace& w) {
  const Mat& q = w.basis();
  return q.transpose() * (w.ambient()->form() * q);
}

Mat cross_form(const SpacePtr& space, const Mat& a, const Mat& b) {
  return a.transpose() * (space->form() * b);
}

Subspace commutant(const Subspace& s) {
  const auto& sp = s.ambient();
  if (s.rank() == 0) return Subspace::full(sp);
  Mat cond = (sp->form() * s.basis()).transpose();
  return Subspace::from_orthonormal(sp, null_space(cond, kRankTol, sp->scale()));
}

Subspace radical(const Subspace& w) {
  if (w.rank() == 0) return w;
  Mat g = restricted_form(w);
  Mat z = null_space(g, kRankTol, w.ambient()->scale());
  return Subspace(w.ambient(), w.basis() * z);
}

bool is_first_class(const Subspace& s, double tol) {
  if (s.rank() == 0) return true;
  return max_abs(restricted_form(s)) <= tol * std::max(1.0, s.ambient()->scale());
}

bool double_commutant_holds(const Subspace& s, double tol) {
  return subspace_equal(commutant(commutant(s)), s, tol);
}

QuotientSpace quotient(const Subspace& numerator, const Subspace& kernel, double tol) {
  require_same_ambient(numerator, kernel);
  QuotientSpace q;
  q.numerator = numerator;
  q.kernel = kernel;
  if (!subspace_contains(numerator, kernel))
    throw PreconditionViolation("quotient: kernel is not contained in the numerator");
  const double scale = std::max(1.0, numerator.ambient()->scale());
  if (kernel.rank() > 0 && numerator.rank() > 0) {
    Mat kn = cross_form(numerator.ambient(), kernel.basis(), numerator.basis());
    Eigen::Index i = 0, j = 0;
    double worst = kn.cwiseAbs().maxCoeff(&i, &j);
    if (worst > tol * scale) {
      std::ostringstream os;
      os << "quotient: kernel not in radical of numerator, B(k" << i << ", n" << j
         << ") = " << worst;
      throw PreconditionViolation(os.str());
    }
  }
  // coordinates of the kernel inside the numerator basis
  Mat c = numerator.basis().transpose() * kernel.basis();
  Mat ck = range_basis(c);
  Mat comp = orth_complement(ck);
  q.lift = numerator.basis() * comp;
  q.repDim = int(q.lift.cols());
  q.project = q.lift.transpose();
  q.factoredForm = cross_form(numerator.ambient(), q.lift, q.lift);
  return q;
}

bool is_nondegenerate_form(const Mat& form) {
  if (form.rows() == 0) return true;
  return numerical_rank(form, kRankTol, 1.0) == form.rows();
}

bool is_nondegenerate(const Subspace& w) { return radical(w).rank() == 0; }

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  Mat m(a.dim(), a.rank() + b.rank());
  m << a.basis(), b.basis();
  return Subspace(a.ambient(), m);
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  if (a.rank() == 0 || b.rank() == 0) return Subspace::zero(a.ambient());
  Mat m(a.dim(), a.rank() + b.rank());
  m << a.basis(), -b.basis();
  Mat z = null_space(m, kRankTol, 1.0);
  if (z.cols() == 0) return Subspace::zero(a.ambient());
  return Subspace(a.ambient(), a.basis() * z.topRows(a.rank()));
}

bool subspace_contains(const Subspace& big, const Subspace& small, double tol) {
  require_same_ambient(big, small);
  if (small.rank() == 0) return true;
  if (big.rank() < small.rank()) return false;
  return projection_residual(big.basis(), small.basis()) <= tol;
}

bool subspace_equal(const Subspace& a, const Subspace& b, double tol) {
  return a.rank() == b.rank() && subspace_contains(a, b, tol) && subspace_contains(b, a, tol);
}

Subspace subspace_image(const Mat& map, const Subspace& s, SpacePtr target) {
  if (!target) target = s.ambient();
  if (map.cols() != s.dim() || map.rows() != target->dim())
    throw std::invalid_argument("subspace_image: map has the wrong shape");
  if (s.rank() == 0) return Subspace::zero(target);
  return Subspace(target, map * s.basis());
}

Mat canonical_basis(const Subspace& s) {
  const Mat& q = s.basis();
  const int n = s.dim(), k = s.rank();
  Mat out(n, k);
  int got = 0;
  for (int i = 0; i < n && got < k; ++i) {
    Vec v = q * q.row(i).transpose();  // projector column i
    for (int j = 0; j < got; ++j) v -= out.col(j) * out.col(j).dot(v);
    double nv = v.norm();
    if (nv > 1e-6) out.col(got++) = v / nv;
  }
  out.conservativeResize(n, got);
  fix_signs(out);
  return out;
}

}  // namespace ccr
