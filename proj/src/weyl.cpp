#include "ccr/weyl.hpp"

#include <cmath>
#include <set>

#include "ccr/errors.hpp"

namespace ccr {

LabelBasis::LabelBasis(SpacePtr space, Mat generators, std::vector<exact::Rational> scale)
    : space_(std::move(space)), gen_(std::move(generators)), scale_(std::move(scale)) {
  if (gen_.rows() != space_->dim()) throw std::invalid_argument("label generators: wrong length");
  if (scale_.empty()) scale_.assign(gen_.cols(), exact::Rational(1));
  if (int(scale_.size()) != gen_.cols()) throw std::invalid_argument("label scale: wrong length");
}

LabelBasisPtr LabelBasis::coordinates(SpacePtr space) {
  int n = space->dim();
  return std::make_shared<const LabelBasis>(space, Mat::Identity(n, n));
}

GroupLabel GroupLabel::operator+(const GroupLabel& o) const {
  if (coords.size() != o.coords.size()) throw std::invalid_argument("label length mismatch");
  GroupLabel r = *this;
  for (std::size_t i = 0; i < coords.size(); ++i) r.coords[i] += o.coords[i];
  return r;
}

GroupLabel GroupLabel::operator-() const {
  GroupLabel r = *this;
  for (auto& c : r.coords) c = -c;
  return r;
}

bool GroupLabel::is_zero() const {
  for (auto c : coords)
    if (c != 0) return false;
  return true;
}

WeylElement WeylElement::generator(LabelBasisPtr basis, GroupLabel f, cplx c) {
  if (int(f.coords.size()) != basis->size()) throw std::invalid_argument("label length mismatch");
  WeylElement w(std::move(basis));
  w.add(f, c);
  return w;
}

WeylElement WeylElement::identity(LabelBasisPtr basis) {
  GroupLabel z{std::vector<long long>(basis->size(), 0)};
  return generator(std::move(basis), z, 1.0);
}

void WeylElement::add(const GroupLabel& f, cplx c) {
  auto [it, fresh] = terms_.emplace(f, c);
  if (!fresh) it->second += c;
}

void WeylElement::prune(double eps) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= eps)
      it = terms_.erase(it);
    else
      ++it;
  }
}

Vec WeylElement::realize(const GroupLabel& f) const {
  Vec x(basis_->size());
  for (int i = 0; i < basis_->size(); ++i)
    x(i) = static_cast<double>(exact::Rational(f.coords[i]) * basis_->scale()[i]);
  return basis_->generators() * x;
}

static void require_same(const WeylElement& a, const WeylElement& b) {
  if (a.basis() != b.basis()) throw std::invalid_argument("Weyl elements over different spaces");
}

WeylElement WeylElement::operator+(const WeylElement& o) const {
  require_same(*this, o);
  WeylElement r = *this;
  for (auto& [f, c] : o.terms_) r.add(f, c);
  r.prune();
  return r;
}

WeylElement WeylElement::operator-(const WeylElement& o) const { return *this + o * cplx(-1.0); }

WeylElement WeylElement::operator*(cplx c) const {
  WeylElement r(basis_);
  for (auto& [f, v] : terms_) r.add(f, v * c);
  r.prune();
  return r;
}

WeylElement weyl_mul(const WeylElement& a, const WeylElement& b) {
  require_same(a, b);
  const auto& sp = *a.basis()->space();
  WeylElement r(a.basis());
  std::map<GroupLabel, Vec> cache;
  auto vec = [&](const WeylElement& e, const GroupLabel& f) -> const Vec& {
    auto it = cache.find(f);
    if (it == cache.end()) it = cache.emplace(f, e.realize(f)).first;
    return it->second;
  };
  for (auto& [f, cf] : a.terms())
    for (auto& [h, ch] : b.terms()) {
      double bfh = form_eval(sp, vec(a, f), vec(b, h));
      r.add(f + h, cf * ch * std::exp(cplx(0, 0.5 * bfh)));
    }
  r.prune();
  return r;
}

WeylElement weyl_star(const WeylElement& a) {
  WeylElement r(a.basis());
  for (auto& [f, c] : a.terms()) r.add(-f, std::conj(c));
  return r;
}

WeylElement commutator(const WeylElement& a, const WeylElement& b) {
  return weyl_mul(a, b) - weyl_mul(b, a);
}

double norm1(const WeylElement& a) {
  double s = 0;
  for (auto& [f, c] : a.terms()) s += std::abs(c);
  return s;
}

double norm2(const WeylElement& a) {
  double s = 0;
  for (auto& [f, c] : a.terms()) s += std::norm(c);
  return std::sqrt(s);
}

double weyl_distance(const WeylElement& a, const WeylElement& b) {
  double d = 0;
  WeylElement diff = a - b;
  for (auto& [f, c] : diff.terms()) d = std::max(d, std::abs(c));
  return d;
}

StateFunctional StateFunctional::central() { return StateFunctional{}; }

StateFunctional StateFunctional::char_subspace(const Subspace& s) {
  if (!is_first_class(s))
    throw PreconditionViolation("char_subspace_state: subspace is not first class");
  StateFunctional w;
  w.kind_ = Kind::CharSubspace;
  w.s_ = s;
  return w;
}

StateFunctional StateFunctional::quasifree(Mat k) {
  StateFunctional w;
  w.kind_ = Kind::Quasifree;
  w.k_ = std::move(k);
  return w;
}

cplx StateFunctional::eval_generator(const WeylElement& ctx, const GroupLabel& f) const {
  switch (kind_) {
    case Kind::Central:
      return f.is_zero() ? 1.0 : 0.0;
    case Kind::CharSubspace: {
      if (f.is_zero()) return 1.0;
      return s_->contains_vector(ctx.realize(f), 1e-9) ? 1.0 : 0.0;
    }
    case Kind::Quasifree: {
      Vec v = ctx.realize(f);
      return std::exp(-v.dot(k_ * v) / 4.0);
    }
  }
  return 0.0;
}

cplx StateFunctional::operator()(const WeylElement& a) const {
  cplx s = 0;
  for (auto& [f, c] : a.terms()) s += c * eval_generator(a, f);
  return s;
}

cplx central_state(const WeylElement& a) { return StateFunctional::central()(a); }

bool is_dirac_state(const StateFunctional& w, const LabelBasisPtr& basis,
                    const std::vector<GroupLabel>& probes, int bound) {
  std::set<GroupLabel> all(probes.begin(), probes.end());
  // pairwise integer combinations a*p + b*q with |a|,|b| <= bound
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (std::size_t j = i; j < probes.size(); ++j)
      for (int a = -bound; a <= bound; ++a)
        for (int b = -bound; b <= bound; ++b) {
          GroupLabel g = probes[i];
          for (std::size_t k = 0; k < g.coords.size(); ++k)
            g.coords[k] = a * probes[i].coords[k] + b * probes[j].coords[k];
          all.insert(g);
        }
  WeylElement ctx(basis);
  for (const auto& f : all)
    if (std::abs(w.eval_generator(ctx, f) - 1.0) > 1e-12) return false;
  return true;
}

GramReport gram_psd_check(const StateFunctional& w, const std::vector<WeylElement>& el) {
  GramReport r;
  const int n = int(el.size());
  r.gram = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    WeylElement si = weyl_star(el[i]);
    for (int j = 0; j < n; ++j) r.gram(i, j) = w(weyl_mul(si, el[j]));
  }
  if (n == 0) {
    r.pass = true;
    return r;
  }
  r.norm = r.gram.norm();
  r.minEig = min_hermitian_eig(r.gram);
  r.pass = r.minEig >= -1e-10 * std::max(r.norm, 1.0);
  return r;
}

NonregularityProbe nonregularity_probe(const StateFunctional& w, const LabelBasisPtr& basis,
                                       const GroupLabel& c, const GroupLabel& f) {
  NonregularityProbe p;
  auto dc = WeylElement::generator(basis, c);
  auto df = WeylElement::generator(basis, f);
  p.pairing = form_eval(*basis->space(), dc.realize(c), df.realize(f));
  p.left = w(weyl_mul(dc, df));
  p.right = w(weyl_mul(df, dc));
  p.value = w(df);
  // left = e^{iB/2} w(delta_{c+f}), right = e^{-iB/2} w(delta_{c+f}); Dirac on c gives
  // left = right = value, so value (1 - e^{iB}) = 0.
  double phase_gap = std::abs(1.0 - std::exp(cplx(0, p.pairing)));
  p.forcedZero = phase_gap > 1e-12 && p.value == 0.0 && p.left == 0.0 && p.right == 0.0;
  return p;
}

}  // namespace ccr
