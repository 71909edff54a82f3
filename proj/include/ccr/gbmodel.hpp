#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccr/net.hpp"
#include "ccr/symspace.hpp"

namespace ccr::gb {

// Contravariant components f^mu at each grid point, one row per point.
using GBValues = Eigen::Matrix<cplx, Eigen::Dynamic, 4, Eigen::RowMajor>;

inline constexpr std::array<double, 4> kEta{1.0, -1.0, -1.0, -1.0};

// Cubic lattice {k * spacing : |k_i| <= (n-1)/2} without the origin, on the mantle
// p0 = |p|, with midpoint weights spacing^3 / |p|.
class GBGrid {
 public:
  GBGrid(int n, double spacing);
  // Explicit lattice vectors; the set must be closed under k -> -k and avoid the origin.
  GBGrid(const std::vector<Eigen::Vector3i>& lattice, double spacing);

  int size() const { return int(p0_.size()); }
  int n() const { return n_; }
  double spacing() const { return spacing_; }
  double cutoff() const { return spacing_ * ((n_ - 1) / 2); }
  const Eigen::MatrixX3d& points() const { return pts_; }
  const Vec& p0() const { return p0_; }
  const Vec& weights() const { return w_; }
  int mirror(int m) const { return mirror_[m]; }
  Eigen::Vector3i lattice(int m) const { return lat_[m]; }
  // -1 if the lattice vector is not a grid point.
  int index_of(const Eigen::Vector3i& k) const;
  // Scale sqrt(2 pi w) of the real coordinates at point m.
  double coord_scale(int m) const { return scale_[m]; }

  // Quadrature self-test: relative error of the grid K-norm of p_x exp(-|p|^2/2).
  double tolQuad() const { return tolQuad_; }
  // Coarser level used in convergence studies, if any.
  std::optional<std::pair<int, double>> parent;

  // Real realization: index 8m + 2mu + {0: Re, 1: Im}, scaled by sqrt(2 pi w_m).
  const SpacePtr& space() const { return space_; }
  int real_dim() const { return 8 * size(); }
  Vec to_real(const GBValues& f) const;
  GBValues from_real(const Vec& u) const;
  GBValues zeros() const { return GBValues::Zero(size(), 4); }

  // Rows (Re, Im) of the normalized functional p_mu f^mu at each point, in real coordinates.
  const SpMat& p_functional() const { return pfun_; }

 private:
  void init(const std::vector<Eigen::Vector3i>& lattice);

  int n_;
  double spacing_;
  Eigen::MatrixX3d pts_;
  Vec p0_, w_, scale_;
  std::vector<int> mirror_;
  std::vector<Eigen::Vector3i> lat_;
  std::vector<int> lookup_;
  double tolQuad_ = 0;
  SpacePtr space_;
  SpMat pfun_;
};

using GridPtr = std::shared_ptr<const GBGrid>;
GridPtr make_grid(int n, double spacing);
GridPtr make_grid(const std::vector<Eigen::Vector3i>& lattice, double spacing);

// Lowered momentum p_mu = (p0, -p).
Eigen::Vector4d p_lower(const GBGrid& g, int m);
Eigen::Vector4d p_upper(const GBGrid& g, int m);

cplx K(const GBGrid& g, const GBValues& f, const GBValues& h);
double B(const GBGrid& g, const GBValues& f, const GBValues& h);
// Positive product 2 pi sum w conj(f) . h.
cplx positive_product(const GBGrid& g, const GBValues& f, const GBValues& h);
double positive_norm(const GBGrid& g, const GBValues& f);
// 2 pi sum w |h|^2 for scalar profiles.
double scalar_norm(const GBGrid& g, const CVec& h);

bool is_theta_real(const GBGrid& g, const GBValues& f, double tol = 1e-12);
bool is_theta_real(const GBGrid& g, const CVec& h, double tol = 1e-12);
GBValues theta(const GBGrid& g, const GBValues& f);

// p_mu f^mu per point.
CVec p_dot(const GBGrid& g, const GBValues& f);
// f^mu = p^mu h.
GBValues p_times(const GBGrid& g, const CVec& h);

// c(f,h) = sum w (p.f) conj(h)
cplx gauge_coeff(const GBGrid& g, const GBValues& f, const CVec& h);

struct GaugeMap {
  CVec h;
  double t = 1.0;
};
// Throws std::invalid_argument for a profile that is not theta-real.
GaugeMap make_gauge(const GBGrid& g, CVec h, double t = 1.0);
GBValues gauge_apply(const GBGrid& g, const GaugeMap& map, const GBValues& f);
GBValues gauge_G(const GBGrid& g, const CVec& h, const GBValues& f);
// Real matrix of G_h on the realization.
Mat gauge_G_matrix(const GBGrid& g, const CVec& h);

// Subspaces of the real realization.
Subspace p_space(const GBGrid& g);
Subspace p0_space(const GBGrid& g);
Subspace coulomb_space(const GBGrid& g);
Subspace gradient_space(const GBGrid& g);
Subspace maxwell_space(const GBGrid& g);
// Per-point theta-real scalar profiles spanning the gauge parameters (real dim M).
std::vector<CVec> theta_real_profiles(const GBGrid& g);

struct Decomposition {
  GBValues g;   // Coulomb-direction part
  GBValues s;   // p h
  CVec h;
};
Decomposition decompose_p(const GBGrid& grid, const GBValues& f, double tol = 1e-10);

struct KreinReport {
  double minEig = 0;
  double normK = 0;
  int kernelDim = 0;
  int expectedKernel = 0;
  int basisDim = 0;
  bool pass = false;
};
// Gram of K on the given real basis; kernel = eigenvalues below 1e-8 |K|.
KreinReport krein_gram_report(const GBGrid& g, const Subspace& basis, int expectedKernel);
KreinReport krein_positivity_report(const GBGrid& g);
// K restricted to the Coulomb space (expected strictly positive).
KreinReport coulomb_positivity_report(const GBGrid& g);

bool coulomb_nondegenerate(const GBGrid& g);
bool coulomb_nondegenerate(const GBGrid& g, const Subspace& region);

struct CauchyData {
  Eigen::MatrixX3cd Q, R;
};
CauchyData cauchy_data(const GBGrid& g, const GBValues& f, double tol = 1e-9);
double cauchy_pairing(const GBGrid& g, const GBValues& f, const GBValues& h);

// Translation by a in R^4, or a signed permutation rotation of the cubic lattice.
struct PoincareElement {
  enum class Kind { Translation, Rotation, Boost } kind = Kind::Translation;
  Eigen::Vector4d a = Eigen::Vector4d::Zero();
  Eigen::Matrix3i R = Eigen::Matrix3i::Identity();
  Eigen::Vector3d rapidity = Eigen::Vector3d::Zero();

  static PoincareElement translation(const Eigen::Vector4d& a);
  static PoincareElement rotation(const Eigen::Matrix3i& r);
  static PoincareElement rotation_z90();
  static PoincareElement boost(const Eigen::Vector3d& rapidity);
};
GBValues poincare_action(const GBGrid& g, const PoincareElement& e, const GBValues& f);
Mat poincare_matrix(const GBGrid& g, const PoincareElement& e);

// Region box in position space: lo/hi for (t, x, y, z).
struct Box {
  std::array<double, 4> lo{}, hi{};
  std::array<double, 4> center() const;
  std::array<double, 4> half() const;
  Box translated(const Eigen::Vector4d& a) const;
  Box rotated(const Eigen::Matrix3i& r) const;
  bool same(const Box& o, double tol = 1e-9) const;
};
bool boxes_spacelike(const Box& a, const Box& b);
bool box_inside(const Box& inner, const Box& outer);

enum class SampleKind { Vector, FieldStrength, Gradient };

// Scalar bump transforms for the first n positions of the fixed symmetric pattern
// (center, then +-x, +-y, +-z, +-t shifts). Throws for boxes the lattice cannot resolve.
std::vector<CVec> bump_profiles(const GBGrid& g, const Box& box, int n);
// n functions of the given kind, enumerating (position, component) pairs in order.
std::vector<GBValues> region_sample(const GBGrid& g, const Box& box, int n, SampleKind kind);
inline constexpr int kPatternSize = 9;

struct RegionSpec {
  std::string name;
  Box box;
};

struct GBNetOptions {
  int positions = kPatternSize;
  bool vectors = true;
  bool fieldStrengths = true;
  bool gradients = true;
  // Store the global p0 basis for functoriality checks (dense, small grids only).
  bool denseTotal = true;
  // Use these spacelike pairs instead of the geometric ones.
  std::optional<std::vector<std::pair<int, int>>> spacelikeOverride;
};

struct GBNet {
  std::shared_ptr<LocalNet> net;
  std::vector<RegionSpec> regions;
  std::vector<GroupAction> actions;
  std::vector<std::vector<int>> below;  // regions B' <= B
};

// Order is box inclusion; spacelike pairs from box geometry unless overridden.
GBNet gb_net(const GridPtr& g, const std::vector<RegionSpec>& regions, const GBNetOptions& opt = {},
             const std::vector<PoincareElement>& actions = {});

// Two-chain (theta-real gradients, p0) for staged reduction.
std::vector<Subspace> two_chain(const GBGrid& g);

}  // namespace ccr::gb
