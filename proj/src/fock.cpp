#include "ccr/fock.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

namespace ccr::fock {

namespace {

constexpr double kPi = std::numbers::pi;

int count_above(const Vec& s, double tol, double ref) {
  if (s.size() == 0 || s(0) == 0.0) return 0;
  double cut = tol * std::max(s(0), ref);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++r;
  return r;
}

}  // namespace

CMat cnull_space(const CMat& a, double tol, double ref) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return CMat::Identity(n, n);
  auto d = svd(a, SvdVectors::FullV);
  int r = count_above(d.s, tol, ref);
  return d.V.rightCols(n - r);
}

CMat crange_basis(const CMat& a, double tol, double ref) {
  if (a.cols() == 0) return CMat(a.rows(), 0);
  auto d = svd(a, SvdVectors::Thin);
  int r = count_above(d.s, tol, ref);
  return d.U.leftCols(r);
}

int crank(const CMat& a, double tol, double ref) {
  if (a.size() == 0) return 0;
  return count_above(svd(a, SvdVectors::None).s, tol, ref);
}

double max_abs(const CMat& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

CMat restrict_cols(const CMat& x, const std::vector<int>& idx) {
  CMat out(x.rows(), idx.size());
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(k) = x.col(idx[k]);
  return out;
}

FockSpace::FockSpace(std::vector<int> signature, int maxParticles)
    : sig_(std::move(signature)), N_(maxParticles) {
  if (N_ < 1) throw std::invalid_argument("Fock space needs at least one particle");
  for (int s : sig_)
    if (s != 1 && s != -1) throw std::invalid_argument("mode signature must be +1 or -1");
  const int d = modes();
  // states ordered by particle number, then lexicographically
  for (int n = 0; n <= N_; ++n) {
    std::vector<int> occ(d, 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
      if (i == d - 1 || d == 0) {
        if (d == 0) {
          if (left == 0) states_.push_back(occ);
          return;
        }
        occ[i] = left;
        states_.push_back(occ);
        occ[i] = 0;
        return;
      }
      for (int k = left; k >= 0; --k) {
        occ[i] = k;
        rec(i + 1, left - k);
      }
      occ[i] = 0;
    };
    rec(0, n);
  }
  std::map<std::vector<int>, int> idx;
  for (std::size_t k = 0; k < states_.size(); ++k) {
    idx[states_[k]] = int(k);
    int n = 0;
    for (int v : states_[k]) n += v;
    num_.push_back(n);
  }
  const int D = dim();
  ann_.assign(d, CMat::Zero(D, D));
  metric_ = CMat::Zero(D, D);
  for (int k = 0; k < D; ++k) {
    int s = 1;
    for (int i = 0; i < d; ++i)
      if (sig_[i] < 0 && states_[k][i] % 2) s = -s;
    metric_(k, k) = double(s);
    for (int i = 0; i < d; ++i) {
      if (states_[k][i] == 0) continue;
      auto lower = states_[k];
      lower[i] -= 1;
      ann_[i](idx[lower], k) = std::sqrt(double(states_[k][i]));
    }
  }
}

int FockSpace::index(const std::vector<int>& occ) const {
  for (std::size_t k = 0; k < states_.size(); ++k)
    if (states_[k] == occ) return int(k);
  return -1;
}

CMat FockSpace::a(const CVec& v) const {
  if (v.size() != modes()) throw std::invalid_argument("one-particle vector outside the mode span");
  CMat out = CMat::Zero(dim(), dim());
  for (int i = 0; i < modes(); ++i)
    if (v(i) != 0.0) out += double(sig_[i]) * std::conj(v(i)) * ann_[i];
  return out;
}

CMat FockSpace::adag(const CVec& v) const {
  if (v.size() != modes()) throw std::invalid_argument("one-particle vector outside the mode span");
  CMat out = CMat::Zero(dim(), dim());
  for (int i = 0; i < modes(); ++i)
    if (v(i) != 0.0) out += v(i) * ann_[i].adjoint();
  return out;
}

CMat FockSpace::field(const CVec& v) const { return (adag(v) + a(v)) / std::sqrt(2.0); }

CMat FockSpace::krein_adjoint(const CMat& x) const { return metric_ * x.adjoint() * metric_; }

cplx FockSpace::krein(const CVec& psi, const CVec& phi) const { return psi.dot(metric_ * phi); }

CMat FockSpace::second_quantize(const CMat& m, const FockSpace& from) const {
  if (m.rows() != modes() || m.cols() != from.modes())
    throw std::invalid_argument("second_quantize: map has the wrong shape");
  if (from.max_particles() > N_) throw std::invalid_argument("second_quantize: target truncation too small");
  std::vector<CMat> cr(from.modes());
  for (int j = 0; j < from.modes(); ++j) {
    cr[j] = CMat::Zero(dim(), dim());
    for (int i = 0; i < modes(); ++i)
      if (m(i, j) != 0.0) cr[j] += m(i, j) * ann_[i].adjoint();
  }
  CMat out(dim(), from.dim());
  for (int k = 0; k < from.dim(); ++k) {
    CVec v = vacuum();
    double fact = 1;
    const auto& occ = from.states()[k];
    for (int j = 0; j < from.modes(); ++j)
      for (int c = 0; c < occ[j]; ++c) {
        v = cr[j] * v;
        fact *= double(c + 1);
      }
    out.col(k) = v / std::sqrt(fact);
  }
  return out;
}

CMat FockSpace::dGamma(const CMat& x) const {
  if (x.rows() != modes() || x.cols() != modes()) throw std::invalid_argument("dGamma: wrong shape");
  CMat out = CMat::Zero(dim(), dim());
  for (int i = 0; i < modes(); ++i)
    for (int j = 0; j < modes(); ++j)
      if (x(i, j) != 0.0) out += x(i, j) * ann_[i].adjoint() * ann_[j];
  return out;
}

std::vector<int> FockSpace::sector(int n) const {
  std::vector<int> out;
  for (int k = 0; k < dim(); ++k)
    if (num_[k] <= n) out.push_back(k);
  return out;
}

CVec FockSpace::vacuum() const {
  CVec v = CVec::Zero(dim());
  v(0) = 1.0;
  return v;
}

namespace {

std::vector<int> y_signature(int M) {
  std::vector<int> s;
  for (int m = 0; m < M; ++m)
    for (int mu = 0; mu < 4; ++mu) s.push_back(int(-gb::kEta[mu]));
  return s;
}

}  // namespace

GBFock::GBFock(gb::GridPtr grid, int maxParticles)
    : grid_(std::move(grid)),
      Y_(y_signature(grid_->size()), maxParticles),
      P_(std::vector<int>(3 * grid_->size(), 1), maxParticles),
      Q_(std::vector<int>(2 * grid_->size(), 1), maxParticles) {
  const int M = grid_->size();
  E_ = CMat::Zero(4 * M, 3 * M);
  std::vector<Eigen::Vector4d> coul;
  for (int m = 0; m < M; ++m) {
    Eigen::Matrix<double, 1, 4> row = gb::p_lower(*grid_, m).transpose();
    Mat z = ccr::null_space(row);
    for (int k = 0; k < 3; ++k) E_.block(4 * m, 3 * m + k, 4, 1) = z.col(k).cast<cplx>();
    Eigen::Matrix<double, 2, 4> rows = Eigen::Matrix<double, 2, 4>::Zero();
    rows(0, 0) = 1.0;
    rows.block<1, 3>(1, 1) = grid_->points().row(m);
    Mat c = ccr::null_space(rows);
    for (int k = 0; k < 2; ++k) {
      CVec y = CVec::Zero(4 * M);
      y.segment(4 * m, 4) = c.col(k).cast<cplx>();
      qbasis_.push_back(fromY(y));
    }
  }
  Qm_.resize(2 * M, 3 * M);
  for (int j = 0; j < 3 * M; ++j) Qm_.col(j) = coordQ(fromY(E_.col(j)));
}

CVec GBFock::coordY(const gb::GBValues& f) const {
  const int M = grid_->size();
  if (f.rows() != M) throw std::invalid_argument("grid function belongs to another grid");
  CVec c(4 * M);
  for (int m = 0; m < M; ++m)
    for (int mu = 0; mu < 4; ++mu) c(4 * m + mu) = grid_->coord_scale(m) * f(m, mu);
  return c;
}

gb::GBValues GBFock::fromY(const CVec& c) const {
  const int M = grid_->size();
  gb::GBValues f(M, 4);
  for (int m = 0; m < M; ++m)
    for (int mu = 0; mu < 4; ++mu) f(m, mu) = c(4 * m + mu) / grid_->coord_scale(m);
  return f;
}

CVec GBFock::coordQ(const gb::GBValues& f) const {
  CVec c(qbasis_.size());
  for (std::size_t i = 0; i < qbasis_.size(); ++i) c(i) = gb::K(*grid_, qbasis_[i], f);
  return c;
}

gb::GBValues GBFock::quotient_vector(int i) const { return qbasis_.at(i); }

CMat GBFock::chi(const CVec& h) const {
  if (h.size() != grid_->size() || !gb::is_theta_real(*grid_, h, 1e-12))
    throw std::invalid_argument("chi: gauge profile is not theta-real");
  gb::GBValues g = gb::p_times(*grid_, cplx(0, 1.0 / std::sqrt(2.0)) * h);
  return Y_.a(coordY(g));
}

CMat GBFock::gauge_generator(const CVec& h) const {
  CMat c = chi(h);
  return Y_.krein_adjoint(c) * c;
}

CMat GBFock::gauge_one_particle(const CVec& h) const {
  const int d = Y_.modes();
  CMat G(d, d);
  for (int j = 0; j < d; ++j) G.col(j) = coordY(gb::gauge_G(*grid_, h, fromY(CVec::Unit(d, j))));
  return G;
}

CMat GBFock::gauge_unitary(const CVec& h, double t) const {
  const int d = Y_.modes();
  CMat T = CMat::Identity(d, d) + t * gauge_one_particle(h);
  return Y_.second_quantize(T, Y_);
}

CMat GBFock::physical_subspace() const {
  auto hs = gb::theta_real_profiles(*grid_);
  const int D = Y_.dim();
  CMat stack(D * int(hs.size()), D);
  for (std::size_t k = 0; k < hs.size(); ++k) stack.middleRows(D * k, D) = chi(hs[k]);
  return cnull_space(stack, kRankTol, 1.0);
}

CMat GBFock::p_fock_range() const { return Y_.second_quantize(E_, P_); }

CMat GBFock::null_space(const CMat& physical) const {
  CMat G = physical.adjoint() * Y_.metric() * physical;
  G = 0.5 * (G + G.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMat> es(G);
  const Vec& ev = es.eigenvalues();
  double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) < 1e-9 * scale) keep.push_back(int(i));
  CMat z = restrict_cols(es.eigenvectors(), keep);
  return physical * z;
}

CMat GBFock::p0_factor_span() const {
  const int M = grid_->size();
  CMat range = p_fock_range();
  std::vector<int> low = P_.sector(P_.max_particles() - 1);
  std::vector<CVec> cols;
  for (int m = 0; m < M; ++m) {
    CVec z = CVec::Zero(4 * M);
    Eigen::Vector4d pu = gb::p_upper(*grid_, m);
    z.segment(4 * m, 4) = (pu / pu.norm()).cast<cplx>();
    CMat cr = Y_.adag(z);
    for (int k : low) cols.push_back(cr * range.col(k));
  }
  CMat all(Y_.dim(), cols.size());
  for (std::size_t k = 0; k < cols.size(); ++k) all.col(k) = cols[k];
  return crange_basis(all, kRankTol, 1.0);
}

IdentityReport ccr_check(const FockSpace& F, const CVec& f, const CVec& h, double B) {
  IdentityReport r;
  r.tolerance = 1e-10;
  CMat Af = F.field(f), Ah = F.field(h);
  CMat c = Af * Ah - Ah * Af - cplx(0, B) * CMat::Identity(F.dim(), F.dim());
  r.residual = max_abs(restrict_cols(c, F.sector(F.max_particles() - 2)));
  r.pass = r.residual <= r.tolerance;
  return r;
}

IdentityReport chi_commutator_check(const GBFock& gf, const CVec& h, const gb::GBValues& f,
                                    double sign) {
  IdentityReport r;
  const auto& Y = gf.Y();
  CMat X = gf.gauge_generator(h);
  CMat Af = gf.A_Y(f);
  CMat AG = gf.A_Y(gb::gauge_G(gf.grid(), h, f));
  CMat c = X * Af - Af * X - cplx(0, sign) * AG;
  r.tolerance = 1e-10 * std::max(1.0, max_abs(AG));
  r.residual = max_abs(restrict_cols(c, Y.sector(Y.max_particles() - 1)));
  r.pass = r.residual <= r.tolerance;
  return r;
}

IdentityReport gauge_derivative_check(const GBFock& gf, const CVec& h, double t) {
  IdentityReport r;
  auto D = [&](double s) { return CMat((gf.gauge_unitary(h, s) - gf.gauge_unitary(h, -s)) / (2 * s)); };
  CMat rich = (4.0 * D(t / 2) - D(t)) / 3.0;
  CMat target = cplx(0, 1) * gf.gauge_generator(h);
  r.tolerance = 1e-9 * std::max(1.0, max_abs(target));
  r.residual = max_abs(rich - target);
  r.pass = r.residual <= r.tolerance;
  return r;
}

std::vector<CMat> translation_generators(const GBFock& gf) {
  const auto& g = gf.grid();
  const int d = gf.Qf().modes();
  std::vector<CMat> P(4, CMat(d, d));
  for (int mu = 0; mu < 4; ++mu)
    for (int j = 0; j < d; ++j) {
      gb::GBValues e = gf.quotient_vector(j);
      for (int m = 0; m < g.size(); ++m) e.row(m) *= gb::p_upper(g, m)(mu);
      P[mu].col(j) = gf.coordQ(e);
    }
  return P;
}

SpectralReport spectral_check(const GBFock& gf, const Eigen::Vector4d& a) {
  SpectralReport r;
  const auto& Qf = gf.Qf();
  auto P = translation_generators(gf);
  for (const auto& p : P) r.selfAdjointResidual = std::max(r.selfAdjointResidual, max_abs(p - p.adjoint()));
  r.minP0 = min_hermitian_eig(P[0]);

  // generic combination splits the +-p degeneracy of p0
  auto cone = [&](const std::vector<CMat>& ops) {
    CMat gen = ops[0] + 0.31 * ops[1] + 0.17 * ops[2] + 0.07 * ops[3];
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (gen + gen.adjoint()));
    double worst = 0;
    for (Eigen::Index k = 0; k < es.eigenvectors().cols(); ++k) {
      CVec v = es.eigenvectors().col(k);
      double e[4];
      for (int mu = 0; mu < 4; ++mu) e[mu] = v.dot(ops[mu] * v).real();
      double sp = std::sqrt(e[1] * e[1] + e[2] * e[2] + e[3] * e[3]);
      worst = std::max({worst, sp - e[0], -e[0]});
    }
    return worst;
  };
  r.maxConeViolation = std::max(0.0, cone(P));

  std::vector<CMat> dP;
  for (const auto& p : P) dP.push_back(Qf.dGamma(p));
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (dP[0] + dP[0].adjoint()));
  r.minDGammaP0 = es.eigenvalues().minCoeff();
  CVec vac = Qf.vacuum();
  r.vacuumEnergy = std::abs(vac.dot(dP[0] * vac));
  {
    Eigen::SelfAdjointEigenSolver<CMat> e1(0.5 * (P[0] + P[0].adjoint()));
    for (Eigen::Index k = 0; k < e1.eigenvalues().size(); ++k) r.oneParticle.push_back(e1.eigenvalues()(k));
  }
  if (Qf.max_particles() >= 2) {
    std::vector<int> two;
    for (int k = 0; k < Qf.dim(); ++k)
      if (Qf.particles(k) == 2) two.push_back(k);
    CMat block(two.size(), two.size());
    for (std::size_t i = 0; i < two.size(); ++i)
      for (std::size_t j = 0; j < two.size(); ++j) block(i, j) = dP[0](two[i], two[j]);
    r.twoParticleMin = min_hermitian_eig(block);
  }
  r.maxConeViolation = std::max(r.maxConeViolation, cone(dP));

  // translation by a: one-particle phases, second quantized
  const auto& g = gf.grid();
  const int d = Qf.modes();
  CMat U(d, d);
  auto tr = gb::PoincareElement::translation(a);
  for (int j = 0; j < d; ++j) U.col(j) = gf.coordQ(gb::poincare_action(g, tr, gf.quotient_vector(j)));
  CMat GU = Qf.second_quantize(U, Qf);
  r.vacuumInvariance = (GU * vac - vac).norm();
  r.pass = r.minP0 >= -1e-10 && r.minDGammaP0 >= -1e-10 && r.maxConeViolation <= 1e-10 &&
           r.selfAdjointResidual <= 1e-12 && r.vacuumInvariance == 0.0;
  return r;
}

cplx vacuum_weyl_expectation(const GBFock& gf, const CVec& fq, int order) {
  const auto& Qf = gf.Qf();
  if (order < 0 || order > 2 * Qf.max_particles())
    throw std::invalid_argument("vacuum_weyl_expectation: series order exceeds 2N");
  CMat iA = cplx(0, 1) * Qf.field(fq);
  CVec vac = Qf.vacuum();
  CVec term = vac, sum = vac;
  for (int k = 1; k <= order; ++k) {
    term = iA * term / double(k);
    sum += term;
  }
  return vac.dot(sum);
}

}  // namespace ccr::fock
