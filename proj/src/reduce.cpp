#include "ccr/reduce.hpp"

#include <sstream>

#include "ccr/errors.hpp"

namespace ccr {

ReductionResult t_reduce(const Subspace& s) {
  ReductionResult r;
  r.constraints = s;
  if (s.rank() > 0) {
    Mat g = restricted_form(s);
    Eigen::Index i = 0, j = 0;
    double worst = g.cwiseAbs().maxCoeff(&i, &j);
    if (worst > 1e-9 * std::max(1.0, s.ambient()->scale())) {
      std::ostringstream os;
      os << "t_reduce: constraints are second class, B(s" << i << ", s" << j << ") = " << g(i, j);
      throw FirstClassViolation(os.str(), int(i), int(j), g(i, j));
    }
  }
  r.firstClass = true;
  r.commutant = commutant(s);
  r.quotient = quotient(r.commutant, s);
  r.physicalDim = r.quotient.repDim;
  r.doubleCommutant = double_commutant_holds(s);
  r.nondegenerate = is_nondegenerate_form(r.quotient.factoredForm);
  return r;
}

bool equivalent_constraints(const Subspace& s1, const Subspace& s2) {
  return subspace_equal(s1, s2);
}

MaximalResult maximal_linear_constraints(const Subspace& s, int bound) {
  if (!is_first_class(s)) throw PreconditionViolation("maximal_linear_constraints: not first class");
  const int n = s.dim();
  Mat hits(n, 0);
  auto take = [&](const Vec& v) {
    if (s.contains_vector(v, 1e-9)) {
      hits.conservativeResize(n, hits.cols() + 1);
      hits.col(hits.cols() - 1) = v;
    }
  };
  for (int i = 0; i < n; ++i) take(Vec::Unit(n, i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int a = 1; a <= bound; ++a)
        for (int b = -bound; b <= bound; ++b) {
          if (b == 0) continue;
          take(a * Vec::Unit(n, i) + b * Vec::Unit(n, j));
        }
  // The state assigns 1 exactly to s, so s's own basis is always accepted.
  for (int k = 0; k < s.rank(); ++k) take(s.basis().col(k));
  MaximalResult m;
  m.maximal = Subspace(s.ambient(), hits);
  m.notes =
      "linear level only: the maximal unitary group also contains non-delta unitaries, "
      "which are not modeled";
  return m;
}

StagedResult reduce_by_stages(const std::vector<Subspace>& chain) {
  if (chain.empty()) throw std::invalid_argument("reduce_by_stages: empty chain");
  StagedResult out;
  out.chain = chain;
  const auto& sp = chain.front().ambient();
  for (std::size_t k = 1; k < chain.size(); ++k)
    if (!subspace_contains(chain[k], chain[k - 1]))
      throw std::invalid_argument("reduce_by_stages: chain is not nested at stage " +
                                  std::to_string(k + 1));
  for (std::size_t k = 1; k < chain.size(); ++k) {
    Subspace prev = commutant(chain[k - 1]);
    if (!subspace_contains(prev, chain[k])) {
      Mat res = chain[k].basis() - prev.project(chain[k].basis());
      Eigen::Index col = 0;
      res.colwise().norm().maxCoeff(&col);
      std::ostringstream os;
      os << "reduce_by_stages: stage " << k + 1 << " constraint s" << col
         << " is not in the previous commutant";
      throw StageAdmissibility(os.str(), int(k + 1));
    }
  }

  // stage coordinates: the cumulative projection maps ambient -> current reps
  Mat proj = Mat::Identity(sp->dim(), sp->dim());
  Mat lift = Mat::Identity(sp->dim(), sp->dim());
  SpacePtr cur = sp;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    if (!is_first_class(chain[k]))
      throw FirstClassViolation("reduce_by_stages: stage constraint is second class", 0, 0, 0);
    Mat img = proj * chain[k].basis();
    Subspace t = img.cols() ? Subspace(cur, img) : Subspace::zero(cur);
    if (!is_first_class(t))
      throw StageAdmissibility("reduce_by_stages: image not first class in stage quotient",
                               int(k + 1));
    QuotientSpace q = quotient(commutant(t), t);
    out.stages.push_back(q);
    proj = q.project * proj;
    lift = lift * q.lift;
    Mat f = q.factoredForm;
    if (f.rows() == 0) {
      cur = nullptr;
      // nothing left; remaining stages are trivial
      for (std::size_t r = k + 1; r < chain.size(); ++r) out.stages.push_back(QuotientSpace{});
      break;
    }
    // roundoff entries would otherwise set the rank scale of a zero stage form
    const double fs = std::max(1.0, sp->scale());
    f = f.unaryExpr([fs](double x) { return std::abs(x) <= 1e-12 * fs ? 0.0 : x; });
    cur = SymplecticSpace::from_dense(0.5 * (f - f.transpose()), "stage" + std::to_string(k + 1));
  }
  out.finalQuotient = out.stages.back();
  out.projectAll = proj;
  out.liftAll = lift;
  out.finalForm = cross_form(sp, lift, lift);
  out.single = t_reduce(chain.back());
  out.isoToSingle = out.single.quotient.project * lift;
  Mat pulled = out.isoToSingle.transpose() * out.single.quotient.factoredForm * out.isoToSingle;
  out.isoResidual = max_abs(pulled - out.finalForm);
  out.isoInvertible = out.isoToSingle.rows() == out.isoToSingle.cols() &&
                      numerical_rank(out.isoToSingle, kRankTol, 1.0) == out.isoToSingle.rows();
  return out;
}

GlobalLocalReport global_vs_local(const std::vector<Subspace>& obs,
                                  const std::vector<Subspace>& cons) {
  if (obs.empty()) throw std::invalid_argument("global_vs_local: no regions");
  GlobalLocalReport r;
  const auto& sp = obs.front().ambient();
  r.o0 = Subspace::zero(sp);
  for (const auto& o : obs) r.o0 = subspace_sum(r.o0, o);
  r.se = Subspace::zero(sp);
  for (const auto& s : cons) r.se = subspace_sum(r.se, s);
  r.k0 = subspace_intersect(r.se, r.o0);
  r.r0 = quotient(r.o0, r.k0);
  r.re = t_reduce(r.se);
  r.dimR0 = r.r0.repDim;
  r.dimRe = r.re.physicalDim;
  if (!subspace_contains(r.re.commutant, r.o0))
    throw PreconditionViolation("global_vs_local: local observables leave the global commutant");
  r.injection = r.re.quotient.project * r.r0.lift;
  Mat pulled = r.injection.transpose() * r.re.quotient.factoredForm * r.injection;
  r.formResidual = max_abs(pulled - r.r0.factoredForm);
  r.injective = numerical_rank(r.injection, kRankTol, 1.0) == r.dimR0;
  r.onto = r.injective && r.dimR0 == r.dimRe;
  return r;
}

}  // namespace ccr
