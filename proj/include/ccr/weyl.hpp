#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "ccr/exact.hpp"
#include "ccr/symspace.hpp"

namespace ccr {

// Module basis for exact labels: label k realizes as sum_i k_i * scale_i * generator_i.
class LabelBasis {
 public:
  LabelBasis(SpacePtr space, Mat generators, std::vector<exact::Rational> scale = {});
  // Generators = coordinate axes, unit scale.
  static std::shared_ptr<const LabelBasis> coordinates(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  int size() const { return int(gen_.cols()); }
  const Mat& generators() const { return gen_; }
  const std::vector<exact::Rational>& scale() const { return scale_; }

 private:
  SpacePtr space_;
  Mat gen_;
  std::vector<exact::Rational> scale_;
};

using LabelBasisPtr = std::shared_ptr<const LabelBasis>;

struct GroupLabel {
  std::vector<long long> coords;
  bool operator<(const GroupLabel& o) const { return coords < o.coords; }
  bool operator==(const GroupLabel& o) const { return coords == o.coords; }
  GroupLabel operator+(const GroupLabel& o) const;
  GroupLabel operator-() const;
  bool is_zero() const;
};

class WeylElement {
 public:
  explicit WeylElement(LabelBasisPtr basis) : basis_(std::move(basis)) {}
  // c * delta_f
  static WeylElement generator(LabelBasisPtr basis, GroupLabel f, cplx c = 1.0);
  static WeylElement identity(LabelBasisPtr basis) ;

  const LabelBasisPtr& basis() const { return basis_; }
  const std::map<GroupLabel, cplx>& terms() const { return terms_; }
  void add(const GroupLabel& f, cplx c);
  void prune(double eps = 1e-15);

  Vec realize(const GroupLabel& f) const;

  WeylElement operator+(const WeylElement& o) const;
  WeylElement operator-(const WeylElement& o) const;
  WeylElement operator*(cplx c) const;

 private:
  LabelBasisPtr basis_;
  std::map<GroupLabel, cplx> terms_;
};

WeylElement weyl_mul(const WeylElement& a, const WeylElement& b);
WeylElement weyl_star(const WeylElement& a);
WeylElement commutator(const WeylElement& a, const WeylElement& b);
double norm1(const WeylElement& a);
double norm2(const WeylElement& a);
// Largest coefficient distance between two elements on the union of supports.
double weyl_distance(const WeylElement& a, const WeylElement& b);

class StateFunctional {
 public:
  enum class Kind { Central, CharSubspace, Quasifree };

  static StateFunctional central();
  // Throws PreconditionViolation unless s is first class.
  static StateFunctional char_subspace(const Subspace& s);
  // k: real symmetric matrix of the quadratic form K(f,f) on ambient coordinates.
  static StateFunctional quasifree(Mat k);

  Kind kind() const { return kind_; }
  cplx eval_generator(const WeylElement& ctx, const GroupLabel& f) const;
  cplx operator()(const WeylElement& a) const;

 private:
  Kind kind_ = Kind::Central;
  std::optional<Subspace> s_;
  Mat k_;
};

cplx central_state(const WeylElement& a);

// probes: labels assumed to lie in s; integer combinations up to `bound` are added.
bool is_dirac_state(const StateFunctional& w, const LabelBasisPtr& basis,
                    const std::vector<GroupLabel>& probes, int bound = 3);

struct GramReport {
  CMat gram;
  double minEig = 0;
  double norm = 0;
  bool pass = false;
};
GramReport gram_psd_check(const StateFunctional& w, const std::vector<WeylElement>& elements);

// Multiplicative-domain argument for a state with w(delta_c) = 1: evaluates
// w(delta_c delta_f), w(delta_f delta_c) and w(delta_f). A state that is Dirac on c
// must give w(delta_f) = e^{iB(c,f)} w(delta_f), hence 0 unless B(c,f) is in 2 pi Z.
struct NonregularityProbe {
  double pairing = 0;
  cplx left, right, value;
  bool forcedZero = false;
};
NonregularityProbe nonregularity_probe(const StateFunctional& w, const LabelBasisPtr& basis,
                                       const GroupLabel& c, const GroupLabel& f);

}  // namespace ccr
