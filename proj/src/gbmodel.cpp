#include "ccr/gbmodel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "ccr/errors.hpp"

namespace ccr::gb {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kShift = 0.25;  // pattern shift as a fraction of the box half-width

// Trapezoid nodes for a * int_{-1}^{1} b(u) cos(k a u) du, b(u) = exp(-1/(1-u^2)).
struct BumpRule {
  std::vector<double> u, wb;
  BumpRule() {
    const int n = 600;
    const double h = 2.0 / n;
    for (int i = 1; i < n; ++i) {
      double x = -1.0 + i * h;
      u.push_back(x);
      wb.push_back(h * std::exp(-1.0 / (1.0 - x * x)));
    }
  }
};

const BumpRule& bump_rule() {
  static const BumpRule rule;
  return rule;
}

double bump_transform(double k, double a) {
  const auto& r = bump_rule();
  double s = 0;
  for (std::size_t i = 0; i < r.u.size(); ++i) s += r.wb[i] * std::cos(k * a * r.u[i]);
  return a * s;
}

}  // namespace

GBGrid::GBGrid(int n, double spacing) : n_(n), spacing_(spacing) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("grid needs odd n >= 3");
  if (!(spacing > 0)) throw std::invalid_argument("grid spacing must be positive");
  const int r = (n - 1) / 2;
  std::vector<Eigen::Vector3i> lat;
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j)
      for (int k = -r; k <= r; ++k)
        if (i != 0 || j != 0 || k != 0) lat.emplace_back(i, j, k);
  init(lat);
}

GBGrid::GBGrid(const std::vector<Eigen::Vector3i>& lattice, double spacing) : spacing_(spacing) {
  if (!(spacing > 0)) throw std::invalid_argument("grid spacing must be positive");
  if (lattice.empty()) throw std::invalid_argument("grid needs at least one point");
  int r = 0;
  for (const auto& k : lattice) {
    if (k.isZero()) throw std::invalid_argument("grid points must avoid the origin");
    r = std::max(r, k.cwiseAbs().maxCoeff());
  }
  n_ = 2 * r + 1;
  init(lattice);
  for (int m = 0; m < size(); ++m)
    if (mirror_[m] < 0) throw std::invalid_argument("grid is not symmetric under p -> -p");
}

void GBGrid::init(const std::vector<Eigen::Vector3i>& lattice) {
  const int n = n_, r = (n_ - 1) / 2;
  const double spacing = spacing_;
  lookup_.assign(std::size_t(n) * n * n, -1);
  for (const auto& k : lattice) {
    auto& slot = lookup_[std::size_t((k(0) + r) * n + (k(1) + r)) * n + (k(2) + r)];
    if (slot >= 0) throw std::invalid_argument("duplicate grid point");
    slot = int(lat_.size());
    lat_.push_back(k);
  }
  const int M = int(lat_.size());
  pts_.resize(M, 3);
  p0_.resize(M);
  w_.resize(M);
  scale_.resize(M);
  mirror_.resize(M);
  for (int m = 0; m < M; ++m) {
    pts_.row(m) = lat_[m].cast<double>().transpose() * spacing;
    p0_(m) = pts_.row(m).norm();
    w_(m) = spacing * spacing * spacing / p0_(m);
    scale_(m) = std::sqrt(2 * kPi * w_(m));
  }
  for (int m = 0; m < M; ++m) mirror_[m] = index_of(-lat_[m]);

  double grid_val = 0;
  for (int m = 0; m < M; ++m) grid_val += w_(m) * pts_(m, 0) * pts_(m, 0) * std::exp(-p0_(m) * p0_(m));
  grid_val *= 2 * kPi;
  const double exact = 2 * kPi * (2 * kPi / 3.0);
  tolQuad_ = std::abs(grid_val - exact) / exact;

  std::vector<Eigen::Triplet<double>> tf, tp;
  for (int m = 0; m < M; ++m) {
    for (int mu = 0; mu < 4; ++mu) {
      int re = 8 * m + 2 * mu;
      tf.emplace_back(re, re + 1, -kEta[mu]);
      tf.emplace_back(re + 1, re, kEta[mu]);
    }
    Eigen::Vector4d pl = p_lower(*this, m) / (std::sqrt(2.0) * p0_(m));
    for (int mu = 0; mu < 4; ++mu) {
      tp.emplace_back(2 * m, 8 * m + 2 * mu, pl(mu));
      tp.emplace_back(2 * m + 1, 8 * m + 2 * mu + 1, pl(mu));
    }
  }
  SpMat F(8 * M, 8 * M);
  F.setFromTriplets(tf.begin(), tf.end());
  std::ostringstream label;
  label << "gb" << n << "^3@" << spacing;
  space_ = std::make_shared<const SymplecticSpace>(F, label.str());
  pfun_.resize(2 * M, 8 * M);
  pfun_.setFromTriplets(tp.begin(), tp.end());
}

int GBGrid::index_of(const Eigen::Vector3i& k) const {
  const int r = (n_ - 1) / 2;
  for (int i = 0; i < 3; ++i)
    if (std::abs(k(i)) > r) return -1;
  return lookup_[std::size_t((k(0) + r) * n_ + (k(1) + r)) * n_ + (k(2) + r)];
}

Vec GBGrid::to_real(const GBValues& f) const {
  if (f.rows() != size()) throw std::invalid_argument("grid function has the wrong size");
  Vec u(8 * size());
  for (int m = 0; m < size(); ++m)
    for (int mu = 0; mu < 4; ++mu) {
      u(8 * m + 2 * mu) = scale_(m) * f(m, mu).real();
      u(8 * m + 2 * mu + 1) = scale_(m) * f(m, mu).imag();
    }
  return u;
}

GBValues GBGrid::from_real(const Vec& u) const {
  if (u.size() != 8 * size()) throw std::invalid_argument("real vector has the wrong size");
  GBValues f(size(), 4);
  for (int m = 0; m < size(); ++m)
    for (int mu = 0; mu < 4; ++mu)
      f(m, mu) = cplx(u(8 * m + 2 * mu), u(8 * m + 2 * mu + 1)) / scale_(m);
  return f;
}

GridPtr make_grid(int n, double spacing) { return std::make_shared<const GBGrid>(n, spacing); }

GridPtr make_grid(const std::vector<Eigen::Vector3i>& lattice, double spacing) {
  return std::make_shared<const GBGrid>(lattice, spacing);
}

Eigen::Vector4d p_lower(const GBGrid& g, int m) {
  return {g.p0()(m), -g.points()(m, 0), -g.points()(m, 1), -g.points()(m, 2)};
}

Eigen::Vector4d p_upper(const GBGrid& g, int m) {
  return {g.p0()(m), g.points()(m, 0), g.points()(m, 1), g.points()(m, 2)};
}

static void require_size(const GBGrid& g, const GBValues& f) {
  if (f.rows() != g.size()) throw std::invalid_argument("grid function belongs to another grid");
}

cplx K(const GBGrid& g, const GBValues& f, const GBValues& h) {
  require_size(g, f);
  require_size(g, h);
  cplx s = 0;
  for (int m = 0; m < g.size(); ++m) {
    cplx t = 0;
    for (int mu = 0; mu < 4; ++mu) t += kEta[mu] * std::conj(f(m, mu)) * h(m, mu);
    s += g.weights()(m) * t;
  }
  return -2 * kPi * s;
}

double B(const GBGrid& g, const GBValues& f, const GBValues& h) { return K(g, f, h).imag(); }

cplx positive_product(const GBGrid& g, const GBValues& f, const GBValues& h) {
  require_size(g, f);
  require_size(g, h);
  cplx s = 0;
  for (int m = 0; m < g.size(); ++m) {
    cplx t = 0;
    for (int mu = 0; mu < 4; ++mu) t += std::conj(f(m, mu)) * h(m, mu);
    s += g.weights()(m) * t;
  }
  return 2 * kPi * s;
}

double positive_norm(const GBGrid& g, const GBValues& f) {
  return std::sqrt(std::max(0.0, positive_product(g, f, f).real()));
}

double scalar_norm(const GBGrid& g, const CVec& h) {
  double s = 0;
  for (int m = 0; m < g.size(); ++m) s += g.weights()(m) * std::norm(h(m));
  return 2 * kPi * s;
}

GBValues theta(const GBGrid& g, const GBValues& f) {
  GBValues t(g.size(), 4);
  for (int m = 0; m < g.size(); ++m) t.row(m) = f.row(g.mirror(m)).conjugate();
  return t;
}

bool is_theta_real(const GBGrid& g, const GBValues& f, double tol) {
  double n = f.norm();
  return (theta(g, f) - f).norm() <= tol * std::max(1.0, n);
}

bool is_theta_real(const GBGrid& g, const CVec& h, double tol) {
  double d = 0;
  for (int m = 0; m < g.size(); ++m) d = std::max(d, std::abs(std::conj(h(g.mirror(m))) - h(m)));
  return d <= tol * std::max(1.0, h.cwiseAbs().maxCoeff());
}

CVec p_dot(const GBGrid& g, const GBValues& f) {
  CVec d(g.size());
  for (int m = 0; m < g.size(); ++m) {
    Eigen::Vector4d pl = p_lower(g, m);
    cplx s = 0;
    for (int mu = 0; mu < 4; ++mu) s += pl(mu) * f(m, mu);
    d(m) = s;
  }
  return d;
}

GBValues p_times(const GBGrid& g, const CVec& h) {
  GBValues f(g.size(), 4);
  for (int m = 0; m < g.size(); ++m) {
    Eigen::Vector4d pu = p_upper(g, m);
    for (int mu = 0; mu < 4; ++mu) f(m, mu) = pu(mu) * h(m);
  }
  return f;
}

cplx gauge_coeff(const GBGrid& g, const GBValues& f, const CVec& h) {
  require_size(g, f);
  CVec d = p_dot(g, f);
  cplx s = 0;
  for (int m = 0; m < g.size(); ++m) s += g.weights()(m) * d(m) * std::conj(h(m));
  return s;
}

GaugeMap make_gauge(const GBGrid& g, CVec h, double t) {
  if (h.size() != g.size()) throw std::invalid_argument("gauge profile has the wrong size");
  if (!is_theta_real(g, h, 1e-12)) throw std::invalid_argument("gauge profile is not theta-real");
  return GaugeMap{std::move(h), t};
}

GBValues gauge_G(const GBGrid& g, const CVec& h, const GBValues& f) {
  cplx c = gauge_coeff(g, f, h);
  return p_times(g, h) * (cplx(0, -kPi) * c);
}

GBValues gauge_apply(const GBGrid& g, const GaugeMap& map, const GBValues& f) {
  return f + map.t * gauge_G(g, map.h, f);
}

Mat gauge_G_matrix(const GBGrid& g, const CVec& h) {
  const int n = g.real_dim();
  Mat G(n, n);
  for (int j = 0; j < n; ++j) G.col(j) = g.to_real(gauge_G(g, h, g.from_real(Vec::Unit(n, j))));
  return G;
}

namespace {

// Real basis {v, i v} for complex vectors v at point m (the per-point scale does not change the span).
void push_complex(const GBGrid&, int m, const Eigen::Vector4cd& v, Mat& out, int& col) {
  for (int part = 0; part < 2; ++part) {
    Eigen::Vector4cd w = part == 0 ? v : Eigen::Vector4cd(cplx(0, 1) * v);
    for (int mu = 0; mu < 4; ++mu) {
      out(8 * m + 2 * mu, col) = w(mu).real();
      out(8 * m + 2 * mu + 1, col) = w(mu).imag();
    }
    ++col;
  }
}

}  // namespace

Subspace p_space(const GBGrid& g) {
  const int M = g.size();
  Mat Q = Mat::Zero(8 * M, 6 * M);
  int col = 0;
  for (int m = 0; m < M; ++m) {
    // orthonormal basis of {v : p_lower . v = 0} in C^4 (real vectors suffice)
    Eigen::Vector4d pl = p_lower(g, m);
    Eigen::Matrix<double, 1, 4> row = pl.transpose();
    Mat z = null_space(row);
    for (int k = 0; k < 3; ++k) push_complex(g, m, z.col(k).cast<cplx>(), Q, col);
  }
  return Subspace::from_orthonormal(g.space(), Q);
}

Subspace p0_space(const GBGrid& g) {
  const int M = g.size();
  Mat Q = Mat::Zero(8 * M, 2 * M);
  int col = 0;
  for (int m = 0; m < M; ++m) {
    Eigen::Vector4d pu = p_upper(g, m) / (std::sqrt(2.0) * g.p0()(m));
    push_complex(g, m, pu.cast<cplx>(), Q, col);
  }
  return Subspace::from_orthonormal(g.space(), Q);
}

Subspace coulomb_space(const GBGrid& g) {
  const int M = g.size();
  Mat Q = Mat::Zero(8 * M, 4 * M);
  int col = 0;
  for (int m = 0; m < M; ++m) {
    Eigen::Matrix<double, 2, 4> rows = Eigen::Matrix<double, 2, 4>::Zero();
    rows(0, 0) = 1.0;
    rows.block<1, 3>(1, 1) = g.points().row(m);
    Mat z = null_space(rows);
    for (int k = 0; k < 2; ++k) push_complex(g, m, z.col(k).cast<cplx>(), Q, col);
  }
  return Subspace::from_orthonormal(g.space(), Q);
}

std::vector<CVec> theta_real_profiles(const GBGrid& g) {
  std::vector<CVec> out;
  for (int m = 0; m < g.size(); ++m) {
    int mb = g.mirror(m);
    if (mb < m) continue;
    CVec a = CVec::Zero(g.size()), b = CVec::Zero(g.size());
    a(m) = 1.0;
    a(mb) = 1.0;
    b(m) = cplx(0, 1);
    b(mb) = cplx(0, -1);
    out.push_back(a);
    out.push_back(b);
  }
  return out;
}

Subspace gradient_space(const GBGrid& g) {
  auto hs = theta_real_profiles(g);
  Mat V(g.real_dim(), int(hs.size()));
  for (std::size_t k = 0; k < hs.size(); ++k)
    V.col(int(k)) = g.to_real(p_times(g, cplx(0, 1) * hs[k]));
  return Subspace(g.space(), V);
}

Subspace maxwell_space(const GBGrid& g) {
  const int M = g.size();
  // rays with two points: k primitive and 2k on the grid; condition 2h(k) - h(2k) = 0
  std::vector<std::pair<int, int>> rays;
  for (int m = 0; m < M; ++m) {
    Eigen::Vector3i k = g.lattice(m);
    int gcd = std::gcd(std::gcd(std::abs(k(0)), std::abs(k(1))), std::abs(k(2)));
    if (gcd != 1) continue;
    int m2 = g.index_of(2 * k);
    if (m2 >= 0) rays.push_back({m, m2});
  }
  // real parameters (Re h, Im h) per point
  Mat C = Mat::Zero(2 * rays.size(), 2 * M);
  for (std::size_t r = 0; r < rays.size(); ++r)
    for (int part = 0; part < 2; ++part) {
      C(2 * r + part, 2 * rays[r].first + part) = 2.0;
      C(2 * r + part, 2 * rays[r].second + part) = -1.0;
    }
  Mat Z = null_space(C);
  Mat V(8 * M, Z.cols());
  for (Eigen::Index c = 0; c < Z.cols(); ++c) {
    CVec h(M);
    for (int m = 0; m < M; ++m) h(m) = cplx(Z(2 * m, c), Z(2 * m + 1, c));
    V.col(c) = g.to_real(p_times(g, h));
  }
  return Subspace(g.space(), V);
}

Decomposition decompose_p(const GBGrid& grid, const GBValues& f, double tol) {
  require_size(grid, f);
  CVec d = p_dot(grid, f);
  double worst = 0;
  for (int m = 0; m < grid.size(); ++m) {
    double n = f.row(m).norm();
    if (n > 0) worst = std::max(worst, std::abs(d(m)) / (std::sqrt(2.0) * grid.p0()(m) * n));
  }
  if (worst > tol) {
    std::ostringstream os;
    os << "decompose_p: f is not in the p-space, relative residual " << worst;
    throw PreconditionViolation(os.str());
  }
  Decomposition out;
  out.h.resize(grid.size());
  for (int m = 0; m < grid.size(); ++m) out.h(m) = f(m, 0) / grid.p0()(m);
  out.s = p_times(grid, out.h);
  out.g = f - out.s;
  return out;
}

KreinReport krein_gram_report(const GBGrid& g, const Subspace& basis, int expectedKernel) {
  KreinReport r;
  r.basisDim = basis.rank();
  r.expectedKernel = expectedKernel;
  // Re K in real coordinates is diagonal with -eta on both parts
  Vec q(g.real_dim());
  for (int m = 0; m < g.size(); ++m)
    for (int mu = 0; mu < 4; ++mu) q(8 * m + 2 * mu) = q(8 * m + 2 * mu + 1) = -kEta[mu];
  if (basis.rank() == 0) {
    r.pass = expectedKernel == 0;
    return r;
  }
  SpMat Q = basis.basis().sparseView();
  Mat G = Mat(Q.transpose() * q.asDiagonal() * Q);
  Vec ev = symmetric_eigenvalues(G);
  r.normK = ev.cwiseAbs().maxCoeff();
  r.minEig = ev.minCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) < 1e-8 * r.normK) ++r.kernelDim;
  r.pass = r.minEig >= -1e-10 * r.normK && r.kernelDim == expectedKernel;
  return r;
}

KreinReport krein_positivity_report(const GBGrid& g) {
  return krein_gram_report(g, p_space(g), 2 * g.size());
}

KreinReport coulomb_positivity_report(const GBGrid& g) {
  auto r = krein_gram_report(g, coulomb_space(g), 0);
  r.pass = r.pass && r.minEig > 0;
  return r;
}

bool coulomb_nondegenerate(const GBGrid& g) { return is_nondegenerate(coulomb_space(g)); }

bool coulomb_nondegenerate(const GBGrid& g, const Subspace& region) {
  if (region.rank() == 0) return true;
  return is_nondegenerate(subspace_intersect(coulomb_space(g), region));
}

CauchyData cauchy_data(const GBGrid& g, const GBValues& f, double tol) {
  require_size(g, f);
  double n = f.norm();
  double f0 = f.col(0).norm();
  double div = 0;
  for (int m = 0; m < g.size(); ++m) {
    cplx d = 0;
    for (int l = 0; l < 3; ++l) d += g.points()(m, l) * f(m, l + 1);
    div = std::max(div, std::abs(d) / g.p0()(m));
  }
  if (f0 > tol * std::max(n, 1e-300) || div > tol * std::max(n, 1e-300))
    throw std::invalid_argument("cauchy_data: f needs zero time component and transverse spatial part");
  const double c = std::pow(2 * kPi, 1.5);
  CauchyData out;
  out.Q.resize(g.size(), 3);
  out.R.resize(g.size(), 3);
  for (int m = 0; m < g.size(); ++m) {
    int mb = g.mirror(m);
    for (int l = 0; l < 3; ++l) {
      cplx fl = -f(m, l + 1), flm = -f(mb, l + 1);  // lowered spatial index
      out.Q(m, l) = cplx(0, c / g.p0()(m)) * (fl - std::conj(flm));
      out.R(m, l) = c * (fl + std::conj(flm));
    }
  }
  return out;
}

double cauchy_pairing(const GBGrid& g, const GBValues& f, const GBValues& h) {
  auto cf = cauchy_data(g, f);
  auto ch = cauchy_data(g, h);
  const double vol = std::pow(g.spacing(), 3);
  cplx s = 0;
  for (int m = 0; m < g.size(); ++m) {
    int mb = g.mirror(m);
    for (int l = 0; l < 3; ++l) s += cf.Q(mb, l) * ch.R(m, l) - cf.R(mb, l) * ch.Q(m, l);
  }
  s *= vol;
  return (-1.0 / (16 * kPi * kPi) * s).real();
}

PoincareElement PoincareElement::translation(const Eigen::Vector4d& a) {
  PoincareElement e;
  e.kind = Kind::Translation;
  e.a = a;
  return e;
}

PoincareElement PoincareElement::rotation(const Eigen::Matrix3i& r) {
  Eigen::Matrix3i rt = r.transpose() * r;
  if (rt != Eigen::Matrix3i::Identity() || r.cast<double>().determinant() != 1.0)
    throw UnsupportedAction("rotation must be a proper signed permutation of the lattice axes");
  PoincareElement e;
  e.kind = Kind::Rotation;
  e.R = r;
  return e;
}

PoincareElement PoincareElement::rotation_z90() {
  Eigen::Matrix3i r;
  r << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  return rotation(r);
}

PoincareElement PoincareElement::boost(const Eigen::Vector3d& rapidity) {
  PoincareElement e;
  e.kind = Kind::Boost;
  e.rapidity = rapidity;
  return e;
}

GBValues poincare_action(const GBGrid& g, const PoincareElement& e, const GBValues& f) {
  require_size(g, f);
  GBValues out(g.size(), 4);
  switch (e.kind) {
    case PoincareElement::Kind::Translation:
      for (int m = 0; m < g.size(); ++m) {
        double pa = p_lower(g, m).dot(e.a);
        out.row(m) = std::exp(cplx(0, -pa)) * f.row(m);
      }
      return out;
    case PoincareElement::Kind::Rotation: {
      Eigen::Matrix3d R = e.R.cast<double>();
      for (int m = 0; m < g.size(); ++m) {
        int j = g.index_of(e.R * g.lattice(m));
        if (j < 0) throw UnsupportedAction("rotation does not preserve the grid");
        out(j, 0) = f(m, 0);
        Eigen::Vector3cd v = f.row(m).tail<3>().transpose();
        out.row(j).tail<3>() = (R.cast<cplx>() * v).transpose();
      }
      return out;
    }
    case PoincareElement::Kind::Boost:
      break;
  }
  throw UnsupportedAction("boosts do not preserve the momentum grid");
}

Mat poincare_matrix(const GBGrid& g, const PoincareElement& e) {
  if (e.kind == PoincareElement::Kind::Boost)
    throw UnsupportedAction("boosts do not preserve the momentum grid");
  const int n = g.real_dim();
  Mat V = Mat::Zero(n, n);
  for (int m = 0; m < g.size(); ++m) {
    for (int c = 0; c < 8; ++c) {
      Vec u = Vec::Zero(n);
      u(8 * m + c) = 1.0;
      Vec img = g.to_real(poincare_action(g, e, g.from_real(u)));
      V.col(8 * m + c) = img;
    }
  }
  return V;
}

std::array<double, 4> Box::center() const {
  std::array<double, 4> c{};
  for (int i = 0; i < 4; ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

std::array<double, 4> Box::half() const {
  std::array<double, 4> a{};
  for (int i = 0; i < 4; ++i) a[i] = 0.5 * (hi[i] - lo[i]);
  return a;
}

Box Box::translated(const Eigen::Vector4d& a) const {
  Box b = *this;
  for (int i = 0; i < 4; ++i) {
    b.lo[i] += a(i);
    b.hi[i] += a(i);
  }
  return b;
}

Box Box::rotated(const Eigen::Matrix3i& r) const {
  auto c = center();
  auto a = half();
  Eigen::Vector3d cs(c[1], c[2], c[3]), as(a[1], a[2], a[3]);
  Eigen::Vector3d nc = r.cast<double>() * cs;
  Eigen::Vector3d na = r.cwiseAbs().cast<double>() * as;
  Box b = *this;
  for (int i = 0; i < 3; ++i) {
    b.lo[i + 1] = nc(i) - na(i);
    b.hi[i + 1] = nc(i) + na(i);
  }
  return b;
}

bool Box::same(const Box& o, double tol) const {
  for (int i = 0; i < 4; ++i)
    if (std::abs(lo[i] - o.lo[i]) > tol || std::abs(hi[i] - o.hi[i]) > tol) return false;
  return true;
}

bool boxes_spacelike(const Box& a, const Box& b) {
  double d2 = 0;
  for (int i = 1; i < 4; ++i) {
    double gap = std::max({0.0, a.lo[i] - b.hi[i], b.lo[i] - a.hi[i]});
    d2 += gap * gap;
  }
  double dt = std::max(a.hi[0] - b.lo[0], b.hi[0] - a.lo[0]);
  return std::sqrt(d2) > dt;
}

bool box_inside(const Box& inner, const Box& outer) {
  for (int i = 0; i < 4; ++i)
    if (inner.lo[i] < outer.lo[i] - 1e-12 || inner.hi[i] > outer.hi[i] + 1e-12) return false;
  return true;
}

std::vector<CVec> bump_profiles(const GBGrid& g, const Box& box, int n) {
  if (n < 0 || n > kPatternSize) throw std::invalid_argument("bump_profiles: n out of range");
  auto c = box.center();
  auto a = box.half();
  const double resolution = kPi / g.cutoff();
  const double cell = kPi / g.spacing();
  // time profiles are evaluated at p0 directly; only spatial axes sit on the lattice
  for (int i = 0; i < 4; ++i) {
    if (i > 0 && 2 * (1 - kShift) * a[i] < resolution) {
      std::ostringstream os;
      os << "region box too small for the position lattice (axis " << i << ", half-width " << a[i]
         << ", resolution " << resolution << ")";
      throw std::invalid_argument(os.str());
    }
    if (!(a[i] > 0)) throw std::invalid_argument("region box has an empty side");
    if (i > 0 && std::abs(c[i]) + a[i] > cell)
      throw std::invalid_argument("region box leaves the periodicity cell of the momentum lattice");
  }
  std::vector<CVec> out;
  const int r = (g.n() - 1) / 2;
  for (int k = 0; k < n; ++k) {
    std::array<double, 4> cc = c;
    if (k > 0) {
      int axis = k <= 6 ? 1 + (k - 1) / 2 : 0;
      double sign = (k % 2 == 1) ? 1.0 : -1.0;
      cc[axis] += sign * kShift * a[axis];
    }
    std::array<double, 4> aa{};
    for (int i = 0; i < 4; ++i) aa[i] = (1 - kShift) * a[i];
    std::vector<std::vector<double>> spatial(3, std::vector<double>(2 * r + 1));
    for (int l = 0; l < 3; ++l)
      for (int j = -r; j <= r; ++j) spatial[l][j + r] = bump_transform(j * g.spacing(), aa[l + 1]);
    std::unordered_map<int, double> timeCache;
    CVec h(g.size());
    for (int m = 0; m < g.size(); ++m) {
      Eigen::Vector3i kk = g.lattice(m);
      int key = kk.squaredNorm();
      auto it = timeCache.find(key);
      if (it == timeCache.end()) it = timeCache.emplace(key, bump_transform(g.p0()(m), aa[0])).first;
      double mag = it->second;
      double phase = -g.p0()(m) * cc[0];
      for (int l = 0; l < 3; ++l) {
        mag *= spatial[l][kk(l) + r];
        phase += g.points()(m, l) * cc[l + 1];
      }
      h(m) = mag * std::exp(cplx(0, phase));
    }
    out.push_back(h);
  }
  return out;
}

std::vector<GBValues> region_sample(const GBGrid& g, const Box& box, int n, SampleKind kind) {
  if (n < 0) throw std::invalid_argument("region_sample: negative count");
  if (n == 0) return {};
  const int per = kind == SampleKind::Vector ? 4 : kind == SampleKind::FieldStrength ? 6 : 1;
  const int positions = (n + per - 1) / per;
  if (positions > kPatternSize) throw std::invalid_argument("region_sample: too many samples for the pattern");
  auto prof = bump_profiles(g, box, positions);
  std::vector<GBValues> out;
  for (int k = 0; k < positions && int(out.size()) < n; ++k) {
    for (int c = 0; c < per && int(out.size()) < n; ++c) {
      GBValues f = g.zeros();
      if (kind == SampleKind::Vector) {
        f.col(c) = prof[k];
      } else if (kind == SampleKind::Gradient) {
        f = p_times(g, cplx(0, 1) * prof[k]);
      } else {
        // F^{ab} = 1, F^{ba} = -1; g^mu = i p_nu F^{nu mu} phi
        static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
        int a = pairs[c][0], b = pairs[c][1];
        for (int m = 0; m < g.size(); ++m) {
          Eigen::Vector4d pl = p_lower(g, m);
          f(m, b) = cplx(0, 1) * pl(a) * prof[k](m);
          f(m, a) = cplx(0, -1) * pl(b) * prof[k](m);
        }
      }
      out.push_back(f);
    }
  }
  return out;
}

GBNet gb_net(const GridPtr& g, const std::vector<RegionSpec>& regions, const GBNetOptions& opt,
             const std::vector<PoincareElement>& actions) {
  const int R = int(regions.size());
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> leq, space;
  for (const auto& r : regions) names.push_back(r.name);
  GBNet out;
  out.regions = regions;
  out.below.assign(R, {});
  for (int a = 0; a < R; ++a)
    for (int b = 0; b < R; ++b) {
      if (box_inside(regions[a].box, regions[b].box)) {
        if (a != b) leq.push_back({a, b});
        out.below[b].push_back(a);
      }
    }
  if (opt.spacelikeOverride) {
    space = *opt.spacelikeOverride;
  } else {
    for (int a = 0; a < R; ++a)
      for (int b = a + 1; b < R; ++b)
        if (boxes_spacelike(regions[a].box, regions[b].box)) space.push_back({a, b});
  }
  RegionPoset poset(names, leq, space);
  out.net = std::make_shared<LocalNet>(poset, g->space());

  std::vector<std::vector<Vec>> fieldVecs(R), consVecs(R);
  std::vector<std::vector<CVec>> profiles(R);
  for (int b = 0; b < R; ++b) {
    profiles[b] = bump_profiles(*g, regions[b].box, opt.positions);
    auto addBoth = [&](std::vector<Vec>& dst, const GBValues& f) {
      dst.push_back(g->to_real(f));
      dst.push_back(g->to_real(cplx(0, 1) * f));
    };
    if (opt.vectors)
      for (auto& f : region_sample(*g, regions[b].box, 4 * opt.positions, SampleKind::Vector))
        addBoth(fieldVecs[b], f);
    if (opt.fieldStrengths)
      for (auto& f : region_sample(*g, regions[b].box, 6 * opt.positions, SampleKind::FieldStrength))
        addBoth(fieldVecs[b], f);
    for (auto& h : profiles[b]) {
      GBValues ph = p_times(*g, h);
      addBoth(consVecs[b], ph);
      if (opt.gradients) addBoth(fieldVecs[b], ph);
    }
  }
  for (int b = 0; b < R; ++b) {
    std::vector<Vec> xs, ss;
    for (int a : out.below[b]) {
      xs.insert(xs.end(), fieldVecs[a].begin(), fieldVecs[a].end());
      ss.insert(ss.end(), consVecs[a].begin(), consVecs[a].end());
    }
    if (!opt.gradients) xs.insert(xs.end(), ss.begin(), ss.end());
    Mat X(g->real_dim(), xs.size()), S(g->real_dim(), ss.size());
    for (std::size_t i = 0; i < xs.size(); ++i) X.col(i) = xs[i];
    for (std::size_t i = 0; i < ss.size(); ++i) S.col(i) = ss[i];
    // spans are truncated separately, so s(B) is added to X(B) explicitly
    Subspace sb(g->space(), S);
    out.net->set_region(b, subspace_sum(Subspace(g->space(), X), sb), sb);
  }
  out.net->set_observable_condition(g->p_functional());
  if (opt.denseTotal) out.net->set_total_constraints(p0_space(*g));

  GaugeData gd;
  for (int b = 0; b < R; ++b) gd.profiles[b] = profiles[b];
  // 2 pi c(f,h) is the scalar product of p.f with h, so |.| / (|f| |h|) is a normalized overlap
  gd.coeff = [g](const Vec& u, const CVec& h) { return 2 * kPi * gauge_coeff(*g, g->from_real(u), h); };
  gd.profileNorm = [g](const CVec& h) { return std::sqrt(scalar_norm(*g, h)); };
  out.net->set_gauge(std::move(gd));

  for (const auto& e : actions) {
    GroupAction act;
    std::ostringstream name;
    if (e.kind == PoincareElement::Kind::Translation)
      name << "translation(" << e.a.transpose() << ")";
    else
      name << "rotation";
    act.name = name.str();
    for (int a = 0; a < R; ++a) {
      Box img = e.kind == PoincareElement::Kind::Translation ? regions[a].box.translated(e.a)
                                                            : regions[a].box.rotated(e.R);
      for (int b = 0; b < R; ++b)
        if (img.same(regions[b].box)) act.regionMap[a] = b;
    }
    act.V = poincare_matrix(*g, e);
    out.actions.push_back(std::move(act));
  }
  return out;
}

std::vector<Subspace> two_chain(const GBGrid& g) { return {gradient_space(g), p0_space(g)}; }

}  // namespace ccr::gb
