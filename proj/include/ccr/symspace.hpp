#pragma once

#include <memory>
#include <string>

#include "ccr/linalg.hpp"

namespace ccr {

// Finite-dimensional real space with a (possibly degenerate) antisymmetric form.
class SymplecticSpace {
 public:
  SymplecticSpace(SpMat form, std::string label = "");

  // Upper triangle is mirrored; the strict lower triangle of `upper` is ignored.
  static std::shared_ptr<const SymplecticSpace> from_upper(const Mat& upper, std::string label = "");
  static std::shared_ptr<const SymplecticSpace> from_dense(const Mat& form, std::string label = "");
  // Coordinates (q1,p1,q2,p2,...), B(q_i,p_i) = 1.
  static std::shared_ptr<const SymplecticSpace> darboux(int pairs);

  int dim() const { return dim_; }
  const SpMat& form() const { return form_; }
  Mat dense_form() const { return Mat(form_); }
  const std::string& label() const { return label_; }
  // Max absolute row sum, used as the reference scale for rank cutoffs.
  double scale() const { return scale_; }

 private:
  int dim_;
  SpMat form_;
  std::string label_;
  double scale_;
};

using SpacePtr = std::shared_ptr<const SymplecticSpace>;

// Span of columns, stored as an orthonormal basis.
class Subspace {
 public:
  Subspace() = default;
  // Columns may be dependent; the span is extracted with the shared rank cutoff.
  Subspace(SpacePtr ambient, const Mat& vectors);
  static Subspace zero(SpacePtr ambient);
  static Subspace full(SpacePtr ambient);
  // Trusted orthonormal basis, no rank-revealing pass.
  static Subspace from_orthonormal(SpacePtr ambient, Mat q);

  const SpacePtr& ambient() const { return ambient_; }
  const Mat& basis() const { return basis_; }
  int rank() const { return int(basis_.cols()); }
  int dim() const { return ambient_ ? ambient_->dim() : 0; }

  // Orthogonal projector applied to v.
  Mat project(const Mat& v) const;
  bool contains_vector(const Vec& v, double tol = 1e-8) const;

 private:
  SpacePtr ambient_;
  Mat basis_;
};

struct QuotientSpace {
  Subspace numerator;
  Subspace kernel;
  int repDim = 0;
  Mat lift;          // dim x repDim, orthonormal, orthogonal to kernel
  Mat project;       // repDim x dim, lift^T
  Mat factoredForm;  // repDim x repDim
};

double form_eval(const SymplecticSpace& space, const Vec& f, const Vec& h);
// F restricted to a basis: Q^T F Q.
Mat restricted_form(const Subspace& w);
// Q1^T F Q2.
Mat cross_form(const SpacePtr& space, const Mat& a, const Mat& b);

Subspace commutant(const Subspace& s);
Subspace radical(const Subspace& w);
bool is_first_class(const Subspace& s, double tol = 1e-9);
bool double_commutant_holds(const Subspace& s, double tol = 1e-8);
QuotientSpace quotient(const Subspace& numerator, const Subspace& kernel, double tol = 1e-9);
bool is_nondegenerate(const Subspace& w);
// Nondegeneracy of a small dense antisymmetric matrix.
bool is_nondegenerate_form(const Mat& form);

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersect(const Subspace& a, const Subspace& b);
bool subspace_contains(const Subspace& big, const Subspace& small, double tol = 1e-8);
bool subspace_equal(const Subspace& a, const Subspace& b, double tol = 1e-8);
// Image of a subspace under a linear map of the ambient space.
Subspace subspace_image(const Mat& map, const Subspace& s, SpacePtr target = nullptr);

// Canonical orthonormal basis (projector columns, Gram-Schmidt in coordinate order).
Mat canonical_basis(const Subspace& s);

}  // namespace ccr
