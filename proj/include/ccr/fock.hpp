#pragma once

#include <vector>

#include "ccr/gbmodel.hpp"
#include "ccr/linalg.hpp"

namespace ccr::fock {

// Complex rank-revealing helpers (same relative cutoff as the real ones).
CMat cnull_space(const CMat& a, double tol = kRankTol, double ref = 0);
CMat crange_basis(const CMat& a, double tol = kRankTol, double ref = 0);
int crank(const CMat& a, double tol = kRankTol, double ref = 0);

// Occupation-number basis over d modes with at most N particles. Mode i carries
// signature s_i = +-1; the Krein metric is Gamma(J) = diag(prod s_i^{n_i}).
class FockSpace {
 public:
  FockSpace(std::vector<int> signature, int maxParticles);

  int dim() const { return int(states_.size()); }
  int modes() const { return int(sig_.size()); }
  int max_particles() const { return N_; }
  const std::vector<int>& signature() const { return sig_; }
  const std::vector<std::vector<int>>& states() const { return states_; }
  int particles(int idx) const { return num_[idx]; }
  int index(const std::vector<int>& occ) const;  // -1 when truncated away

  // Hilbert-space mode operators.
  const CMat& annihilate(int i) const { return ann_[i]; }
  CMat create(int i) const { return ann_[i].adjoint(); }
  const CMat& metric() const { return metric_; }

  // Krein annihilation sum_i s_i conj(v_i) a_i and creation sum_i v_i a_i^*.
  CMat a(const CVec& v) const;
  CMat adag(const CVec& v) const;
  CMat field(const CVec& v) const;  // (adag + a) / sqrt 2
  CMat krein_adjoint(const CMat& x) const;
  // Krein product <psi, phi> = psi^H Gamma phi.
  cplx krein(const CVec& psi, const CVec& phi) const;

  // Gamma(m) for a one-particle map from `from` modes to this space's modes
  // (m is modes() x from.modes()).
  CMat second_quantize(const CMat& m, const FockSpace& from) const;
  // dGamma(x) = sum x_ij a_i^* a_j.
  CMat dGamma(const CMat& x) const;
  // State indices with particle number <= n.
  std::vector<int> sector(int n) const;  // states with at most n particles
  CVec vacuum() const;

 private:
  std::vector<int> sig_;
  int N_;
  std::vector<std::vector<int>> states_;
  std::vector<int> num_;
  std::vector<CMat> ann_;
  CMat metric_;
};

// Rows/cols restricted to an index set.
CMat restrict_cols(const CMat& x, const std::vector<int>& idx);
double max_abs(const CMat& x);

// Gupta-Bleuler one-particle data on a small grid.
class GBFock {
 public:
  GBFock(gb::GridPtr grid, int maxParticles);

  const gb::GBGrid& grid() const { return *grid_; }
  const FockSpace& Y() const { return Y_; }       // full indefinite space
  const FockSpace& P() const { return P_; }       // complex p-space, positive basis
  const FockSpace& Qf() const { return Q_; }      // p / p0, Krein-orthonormal
  const CMat& embed() const { return E_; }        // p coords -> Y coords
  const CMat& qmap() const { return Qm_; }        // p coords -> quotient coords

  CVec coordY(const gb::GBValues& f) const;
  // Quotient coordinates K(e_i, f) for f in the p-space.
  CVec coordQ(const gb::GBValues& f) const;
  gb::GBValues fromY(const CVec& c) const;
  // Quotient basis vector i as a grid function.
  gb::GBValues quotient_vector(int i) const;

  CMat A_Y(const gb::GBValues& f) const { return Y_.field(coordY(f)); }
  // chi(h) = a(i p h / sqrt 2); throws std::invalid_argument for non theta-real h.
  CMat chi(const CVec& h) const;
  CMat gauge_generator(const CVec& h) const;
  // Gamma(T_h^t) on the full space.
  CMat gauge_unitary(const CVec& h, double t) const;
  // One-particle matrix of G_h in Y coordinates.
  CMat gauge_one_particle(const CVec& h) const;

  // Joint kernel of chi(h_k) over theta-real profiles; orthonormal columns.
  CMat physical_subspace() const;
  // Range of Gamma(E): the Fock space over the complex p-space.
  CMat p_fock_range() const;
  // Krein-null vectors inside the physical subspace.
  CMat null_space(const CMat& physical) const;
  // Vectors of the p-Fock range with at least one p0 factor.
  CMat p0_factor_span() const;

 private:
  gb::GridPtr grid_;
  FockSpace Y_, P_, Q_;
  CMat E_, Qm_;
  std::vector<gb::GBValues> qbasis_;
};

struct IdentityReport {
  double residual = 0;
  double tolerance = 0;
  bool pass = false;
};

// [A(f), A(h)] - i B(f,h) on sectors n <= N-2.
IdentityReport ccr_check(const FockSpace& F, const CVec& f, const CVec& h, double B);

// [chi^* chi, A(f)] - sign * i A(G_h f) on sectors n <= N-1.
IdentityReport chi_commutator_check(const GBFock& gf, const CVec& h, const gb::GBValues& f,
                                    double sign);
// (Gamma(T^t) - Gamma(T^-t)) / 2t against i chi^* chi.
IdentityReport gauge_derivative_check(const GBFock& gf, const CVec& h, double t);

struct SpectralReport {
  double minP0 = 0;
  double minDGammaP0 = 0;
  double vacuumEnergy = 0;
  std::vector<double> oneParticle;
  double twoParticleMin = 0;
  double maxConeViolation = 0;  // max over eigenvectors of (|p| - p0)_+ and (-p0)_+
  double selfAdjointResidual = 0;
  double vacuumInvariance = 0;  // |Gamma(U_a) Omega - Omega|
  bool pass = false;
};
SpectralReport spectral_check(const GBFock& gf, const Eigen::Vector4d& a);

// Translation generators P_mu on the quotient coordinates.
std::vector<CMat> translation_generators(const GBFock& gf);

// <Omega, sum_{k<=order} (i A(f))^k / k! Omega> on the quotient Fock space.
cplx vacuum_weyl_expectation(const GBFock& gf, const CVec& fq, int order);

}  // namespace ccr::fock
