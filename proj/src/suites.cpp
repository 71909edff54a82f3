#include "ccr/suites.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "ccr/errors.hpp"
#include "ccr/exact.hpp"
#include "ccr/fock.hpp"
#include "ccr/net.hpp"
#include "ccr/reduce.hpp"
#include "ccr/weyl.hpp"

namespace ccr::suites {

namespace {

constexpr double kPi = std::numbers::pi;
using Rng = std::mt19937_64;

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double normal(Rng& rng) { return std::normal_distribution<double>(0.0, 1.0)(rng); }

// Integer antisymmetric form; about a third of the instances get a Darboux block structure
// with extra degenerate directions.
Eigen::MatrixXi random_form(Rng& rng, int n) {
  Eigen::MatrixXi F = Eigen::MatrixXi::Zero(n, n);
  if (uniform_int(rng, 0, 2) == 0) {
    int pairs = uniform_int(rng, 0, n / 2);
    for (int k = 0; k < pairs; ++k) {
      F(2 * k, 2 * k + 1) = 1;
      F(2 * k + 1, 2 * k) = -1;
    }
    return F;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int v = uniform_int(rng, 0, 2) == 0 ? 0 : uniform_int(rng, -2, 2);
      F(i, j) = v;
      F(j, i) = -v;
    }
  return F;
}

// Clears denominators of a rational column.
Eigen::VectorXi integer_column(const exact::QMatrix& q, int col) {
  using boost::multiprecision::cpp_int;
  cpp_int l = 1;
  for (int i = 0; i < q.rows(); ++i) {
    cpp_int d = boost::multiprecision::denominator(q(i, col));
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  Eigen::VectorXi v(q.rows());
  for (int i = 0; i < q.rows(); ++i) {
    cpp_int x = boost::multiprecision::numerator(q(i, col)) * (l / boost::multiprecision::denominator(q(i, col)));
    v(i) = int(x);
  }
  return v;
}

// Isotropic integer vectors built one at a time from the exact commutant of the previous ones.
Eigen::MatrixXi random_isotropic(Rng& rng, const Eigen::MatrixXi& F, int k) {
  const int n = int(F.rows());
  Eigen::MatrixXi S(n, 0);
  auto Fq = exact::QMatrix::from_integers(F);
  for (int step = 0; step < k; ++step) {
    exact::QMatrix cond = S.cols() ? (exact::QMatrix::from_integers(S).transpose() * Fq) : exact::QMatrix(0, n);
    exact::QMatrix Z = exact::null_space(cond);
    if (Z.cols() == 0) break;
    Eigen::VectorXi v = Eigen::VectorXi::Zero(n);
    for (int c = 0; c < Z.cols(); ++c) {
      int a = uniform_int(rng, -2, 2);
      if (a) v += a * integer_column(Z, c);
    }
    if (v.cwiseAbs().maxCoeff() > 1000) continue;
    Eigen::MatrixXi T(n, S.cols() + 1);
    T << S, v;
    if (exact::rank(exact::QMatrix::from_integers(T)) == T.cols()) S = T;
  }
  return S;
}

json instance_json(std::uint64_t seed, int index) { return {{"seed", seed}, {"instance", index}}; }

gb::GBValues random_values(Rng& rng, int M) {
  gb::GBValues f(M, 4);
  for (int m = 0; m < M; ++m)
    for (int mu = 0; mu < 4; ++mu) f(m, mu) = cplx(normal(rng), normal(rng));
  return f;
}

CVec random_theta_real(Rng& rng, const gb::GBGrid& g) {
  CVec h = CVec::Zero(g.size());
  for (const auto& b : gb::theta_real_profiles(g)) h += normal(rng) * b;
  return h;
}

// Floating-point scale of c(f, h): sum w |p.f| |h| with absolute values.
double coeff_scale(const gb::GBGrid& g, const gb::GBValues& f, const CVec& h) {
  double s = 0;
  for (int m = 0; m < g.size(); ++m) {
    Eigen::Vector4d pl = gb::p_lower(g, m);
    double d = 0;
    for (int mu = 0; mu < 4; ++mu) d += std::abs(pl(mu)) * std::abs(f(m, mu));
    s += g.weights()(m) * d * std::abs(h(m));
  }
  return s;
}

double pnorm(const gb::GBGrid& g, const gb::GBValues& f) { return gb::positive_norm(g, f); }

gb::Box make_box(std::array<double, 4> c, std::array<double, 4> a) {
  gb::Box b;
  for (int i = 0; i < 4; ++i) {
    b.lo[i] = c[i] - a[i];
    b.hi[i] = c[i] + a[i];
  }
  return b;
}

}  // namespace

// ---------------------------------------------------------------- symplectic

std::vector<CheckResult> tprocedure(std::uint64_t seed, int instances, int maxDim) {
  Rng rng(seed);
  int dimFail = 0, oracleFail = 0, nondegFail = 0, nondegCases = 0;
  json firstFail;
  for (int it = 0; it < instances; ++it) {
    const int n = uniform_int(rng, 2, maxDim);
    Eigen::MatrixXi Fi = random_form(rng, n);
    Eigen::MatrixXi Si = random_isotropic(rng, Fi, uniform_int(rng, 0, n / 2 + 1));
    auto space = SymplecticSpace::from_dense(Fi.cast<double>());
    Subspace s(space, Si.cast<double>());
    ReductionResult r = t_reduce(s);

    auto Fq = exact::QMatrix::from_integers(Fi);
    auto Sq = exact::QMatrix::from_integers(Si);
    int rs = exact::rank(Sq);
    int rc = exact::commutant_dim(Fq, Sq);
    exact::QMatrix C = exact::null_space(Si.cols() ? Sq.transpose() * Fq : exact::QMatrix(0, n));
    int formRank = exact::restricted_form_rank(Fq, C);
    bool exactNondeg = formRank == rc - rs;
    bool exactDouble = exact::commutant_dim(Fq, C) == rs;

    bool okDim = r.physicalDim == r.commutant.rank() - r.constraints.rank();
    bool okOracle = r.constraints.rank() == rs && r.commutant.rank() == rc && r.physicalDim == rc - rs &&
                    r.doubleCommutant == exactDouble && r.nondegenerate == exactNondeg;
    bool okNondeg = true;
    if (r.doubleCommutant) {
      ++nondegCases;
      okNondeg = r.nondegenerate && exactNondeg;
    }
    if (!okDim) ++dimFail;
    if (!okOracle) ++oracleFail;
    if (!okNondeg) ++nondegFail;
    if ((!okDim || !okOracle || !okNondeg) && firstFail.is_null()) {
      firstFail = instance_json(seed, it);
      firstFail["n"] = n;
    }
  }
  json d = {{"instances", instances}, {"max_dim", maxDim}};
  if (!firstFail.is_null()) d["first_failure"] = firstFail;
  json dn = d;
  dn["double_commutant_cases"] = nondegCases;
  return {make_check("tprocedure.dimension_law", dimFail == 0, dimFail, 0, d),
          make_check("tprocedure.exact_oracle", oracleFail == 0, oracleFail, 0, d),
          make_check("tprocedure.nondegenerate_quotient", nondegFail == 0, nondegFail, 0, dn)};
}

std::vector<CheckResult> stages(std::uint64_t seed, int instances, int maxDim) {
  Rng rng(seed ^ 0x5eedULL);
  int dimFail = 0, isoFail = 0;
  double worst = 0;
  json firstFail;
  for (int it = 0; it < instances; ++it) {
    const int n = uniform_int(rng, 4, maxDim);
    Eigen::MatrixXi Fi = random_form(rng, n);
    Eigen::MatrixXi Si = random_isotropic(rng, Fi, uniform_int(rng, 2, n / 2 + 1));
    auto space = SymplecticSpace::from_dense(Fi.cast<double>());
    // nested prefixes of the isotropic family
    std::vector<Subspace> chain;
    const int k = int(Si.cols());
    int stagesCount = std::min(k, uniform_int(rng, 2, 3));
    for (int j = 1; j <= stagesCount; ++j) {
      int cols = j == stagesCount ? k : std::max(1, k * j / stagesCount);
      chain.emplace_back(space, Si.leftCols(cols).cast<double>());
    }
    if (chain.empty()) chain.push_back(Subspace::zero(space));
    StagedResult st = reduce_by_stages(chain);
    bool okDim = st.finalQuotient.repDim == st.single.physicalDim;
    bool okIso = st.isoInvertible && st.isoResidual <= 1e-10;
    worst = std::max(worst, st.isoResidual);
    if (!okDim) ++dimFail;
    if (!okIso) ++isoFail;
    if ((!okDim || !okIso) && firstFail.is_null()) {
      firstFail = instance_json(seed, it);
      firstFail["n"] = n;
    }
  }
  json d = {{"instances", instances}, {"max_dim", maxDim}};
  if (!firstFail.is_null()) d["first_failure"] = firstFail;
  return {make_check("stages.dimension", dimFail == 0, dimFail, 0, d),
          make_check("stages.isomorphism", isoFail == 0, worst, 1e-10, d)};
}

std::vector<CheckResult> stages_gb(const gb::GridPtr& g) {
  StagedResult st = reduce_by_stages(gb::two_chain(*g));
  int expected = gb::p_space(*g).rank() - gb::p0_space(*g).rank();
  bool ok = st.finalQuotient.repDim == st.single.physicalDim && st.single.physicalDim == expected &&
            st.isoInvertible && st.isoResidual <= 1e-10;
  json d = {{"staged_dim", st.finalQuotient.repDim},
            {"single_dim", st.single.physicalDim},
            {"dim_p_minus_dim_p0", expected}};
  return {make_check("stages.gb_two_chain", ok, st.isoResidual, 1e-10, d)};
}

std::vector<CheckResult> stage1_radical(const gb::GridPtr& g) {
  Subspace P = gb::p_space(*g), P0 = gb::p0_space(*g);
  Subspace rad = radical(P);
  bool ok = rad.rank() > 0 && subspace_equal(rad, P0);
  double res = rad.rank() ? projection_residual(P0.basis(), rad.basis()) : 0.0;
  json d = {{"dim_p", P.rank()}, {"radical_dim", rad.rank()}, {"dim_p0", P0.rank()}};
  return {make_check("stages.gb_stage1_radical", ok, res, 1e-8, d)};
}

// ---------------------------------------------------------------- Weyl

std::vector<CheckResult> weyl(std::uint64_t seed, int instances) {
  Rng rng(seed ^ 0x77e1ULL);
  double assoc = 0, invol = 0, norms = 0, central = 0;
  bool normOrder = true;
  auto randomElement = [&](const LabelBasisPtr& lb) {
    WeylElement a(lb);
    int terms = uniform_int(rng, 1, 4);
    for (int t = 0; t < terms; ++t) {
      GroupLabel f;
      for (int i = 0; i < lb->size(); ++i) f.coords.push_back(uniform_int(rng, -2, 2));
      a.add(f, cplx(normal(rng), normal(rng)));
    }
    return a;
  };
  for (int it = 0; it < instances; ++it) {
    auto space = SymplecticSpace::darboux(uniform_int(rng, 1, 3));
    auto lb = LabelBasis::coordinates(space);
    WeylElement a = randomElement(lb), b = randomElement(lb), c = randomElement(lb);
    double scale = norm1(a) * norm1(b) * norm1(c);
    assoc = std::max(assoc, weyl_distance(weyl_mul(weyl_mul(a, b), c), weyl_mul(a, weyl_mul(b, c))) / scale);
    double i1 = weyl_distance(weyl_star(weyl_star(a)), a);
    double i2 = weyl_distance(weyl_star(weyl_mul(a, b)), weyl_mul(weyl_star(b), weyl_star(a))) /
                (norm1(a) * norm1(b));
    invol = std::max({invol, i1, i2});
    double sq = 0;
    for (const auto& [f, v] : a.terms()) sq += std::norm(v);
    double n2 = norm2(a);
    double viaState = central_state(weyl_mul(weyl_star(a), a)).real();
    norms = std::max({norms, std::abs(n2 * n2 - sq) / sq, std::abs(viaState - sq) / sq});
    if (n2 > norm1(a) * (1 + 1e-12)) normOrder = false;
    GroupLabel gl;
    for (int i = 0; i < lb->size(); ++i) gl.coords.push_back(uniform_int(rng, -2, 2));
    auto dg = WeylElement::generator(lb, gl);
    auto shifted = weyl_mul(weyl_mul(dg, a), weyl_star(dg));
    central = std::max(central, std::abs(central_state(shifted) - central_state(a)) / norm1(a));
  }

  // characteristic state of span{q1, q2} in Darboux R^6
  auto space = SymplecticSpace::darboux(3);
  auto lb = LabelBasis::coordinates(space);
  Mat sv = Mat::Zero(6, 2);
  sv(0, 0) = 1;
  sv(2, 1) = 1;
  Subspace s(space, sv);
  auto chi = StateFunctional::char_subspace(s);
  double minEig = 1e300;
  bool gramPass = true;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<WeylElement> els;
    int count = uniform_int(rng, 2, 6);
    for (int e = 0; e < count; ++e) {
      WeylElement x(lb);
      int terms = uniform_int(rng, 1, 3);
      for (int t = 0; t < terms; ++t) {
        GroupLabel f{{uniform_int(rng, -1, 1), 0, uniform_int(rng, -1, 1), 0, 0, 0}};
        if (uniform_int(rng, 0, 2) == 0) f.coords[uniform_int(rng, 0, 5)] += 1;
        x.add(f, cplx(normal(rng), normal(rng)));
      }
      els.push_back(x);
    }
    auto gr = gram_psd_check(chi, els);
    minEig = std::min(minEig, gr.minEig / std::max(1.0, gr.norm));
    gramPass = gramPass && gr.pass;
  }
  bool dirac = is_dirac_state(chi, lb, {GroupLabel{{1, 0, 0, 0, 0, 0}}, GroupLabel{{0, 0, 1, 0, 0, 0}}});

  // c = q1 is a constraint, f = p1 pairs to 1 with it
  Mat cv = Mat::Zero(6, 1);
  cv(0, 0) = 1;
  auto dirac1 = StateFunctional::char_subspace(Subspace(space, cv));
  auto probe = nonregularity_probe(dirac1, lb, GroupLabel{{1, 0, 0, 0, 0, 0}}, GroupLabel{{0, 1, 0, 0, 0, 0}});
  auto probe2 = nonregularity_probe(dirac1, lb, GroupLabel{{2, 0, 0, 0, 0, 0}}, GroupLabel{{0, 3, 1, 0, 0, 0}});
  bool nonreg = probe.forcedZero && probe.value == 0.0 && probe2.forcedZero && probe2.value == 0.0;

  json d = {{"instances", instances}};
  return {make_check("weyl.associativity", assoc <= 1e-12, assoc, 1e-12, d),
          make_check("weyl.involution", invol <= 1e-12, invol, 1e-12, d),
          make_check("weyl.norms", norms <= 1e-12 && normOrder, norms, 1e-12, d),
          make_check("weyl.central_invariance", central <= 1e-12, central, 1e-12, d),
          make_check("weyl.char_state_positivity", gramPass && dirac, std::max(0.0, -minEig), 1e-10,
                     {{"dirac_on_s", dirac}, {"families", 20}}),
          make_check("weyl.nonregularity", nonreg, std::abs(probe.value) + std::abs(probe2.value), 0,
                     {{"pairing", probe.pairing}, {"pairing_2", probe2.pairing}})};
}

// ---------------------------------------------------------------- gauge

std::vector<CheckResult> gauge(const gb::GridPtr& gp, std::uint64_t seed, int instances) {
  const auto& g = *gp;
  Rng rng(seed ^ 0x6a06eULL);
  double r1 = 0, r2 = 0, r3 = 0, r4 = 0, rk = 0;
  for (int it = 0; it < instances; ++it) {
    gb::GBValues f = random_values(rng, g.size()), k = random_values(rng, g.size());
    CVec h = random_theta_real(rng, g), q = random_theta_real(rng, g), gg = random_theta_real(rng, g);
    double t = normal(rng), s = normal(rng);
    gb::GBValues Ghf = gb::gauge_G(g, h, f), Ghk = gb::gauge_G(g, h, k);
    // (i)
    double lhs = gb::B(g, Ghf, k), rhs = -gb::B(g, f, Ghk);
    double sc = pnorm(g, Ghf) * pnorm(g, k) + pnorm(g, f) * pnorm(g, Ghk);
    r1 = std::max(r1, std::abs(lhs - rhs) / sc);
    // (ii): G_g G_h f = -i pi p g c(G_h f, g) with c(G_h f, g) = 0 on the cone
    gb::GBValues GgGh = gb::gauge_G(g, gg, Ghf);
    double bound = kPi * pnorm(g, gb::p_times(g, gg)) * coeff_scale(g, Ghf, gg);
    r2 = std::max(r2, pnorm(g, GgGh) / std::max(bound, 1e-300));
    // (iii)
    gb::GBValues Gqf = gb::gauge_G(g, q, f);
    gb::GBValues comp = gb::gauge_apply(g, {h, t}, gb::gauge_apply(g, {q, s}, f));
    gb::GBValues lin = f + t * Ghf + s * Gqf;
    r3 = std::max(r3, pnorm(g, comp - lin) / (pnorm(g, f) + std::abs(t) * pnorm(g, Ghf) + std::abs(s) * pnorm(g, Gqf)));
    // quadratic scaling
    gb::GBValues scaled = gb::gauge_apply(g, {t * h, 1.0}, f);
    gb::GBValues quad = f + t * t * (gb::gauge_apply(g, {h, 1.0}, f) - f);
    r4 = std::max(r4, pnorm(g, scaled - quad) / (pnorm(g, f) + t * t * pnorm(g, Ghf)));
    // K-unitarity
    gb::GBValues Tf = gb::gauge_apply(g, {h, t}, f), Tk = gb::gauge_apply(g, {h, t}, k);
    double ks = pnorm(g, Tf) * pnorm(g, Tk) + pnorm(g, f) * pnorm(g, k);
    rk = std::max(rk, std::abs(gb::K(g, Tf, Tk) - gb::K(g, f, k)) / ks);
  }

  // Fixed points: three membership tests agree on samples inside and outside p.
  Subspace P = gb::p_space(g);
  auto hs = gb::theta_real_profiles(g);
  int disagreements = 0;
  for (int it = 0; it < 40; ++it) {
    Vec u = it < 20 ? Vec(P.basis() * Vec::NullaryExpr(P.rank(), [&] { return normal(rng); }))
                    : Vec(Vec::NullaryExpr(g.real_dim(), [&] { return normal(rng); }));
    gb::GBValues f = g.from_real(u);
    double fn = pnorm(g, f);
    bool fixed = true, pairZero = true;
    for (const auto& h : hs) {
      gb::GBValues Gf = gb::gauge_G(g, h, f);
      double sc = kPi * pnorm(g, gb::p_times(g, h)) * coeff_scale(g, f, h);
      if (pnorm(g, Gf) > 1e-12 * std::max(sc, 1e-300) + 1e-14 * fn) fixed = false;
      if (std::abs(gb::B(g, f, Gf)) > 1e-12 * fn * std::max(sc, 1e-300) + 1e-300) pairZero = false;
    }
    CVec d = gb::p_dot(g, f);
    bool pointwise = true;
    for (int m = 0; m < g.size(); ++m)
      if (std::abs(d(m)) > 1e-12 * (2 * g.p0()(m)) * f.row(m).norm()) pointwise = false;
    if (fixed != pairZero || fixed != pointwise || pointwise != (it < 20)) ++disagreements;
  }

  json d = {{"instances", instances}, {"grid_points", g.size()}};
  return {make_check("gauge.antisymmetry", r1 <= 1e-10, r1, 1e-10, d),
          make_check("gauge.nilpotent", r2 <= 1e-10, r2, 1e-10, d),
          make_check("gauge.composition", r3 <= 1e-10, r3, 1e-10, d),
          make_check("gauge.quadratic_scaling", r4 <= 1e-10, r4, 1e-10, d),
          make_check("gauge.k_unitary", rk <= 1e-10, rk, 1e-10, d),
          make_check("gauge.fixed_points", disagreements == 0, disagreements, 0, {{"samples", 40}})};
}

// ---------------------------------------------------------------- Krein and subspaces

std::vector<CheckResult> krein(const gb::GridPtr& gp) {
  const auto& g = *gp;
  const int M = g.size();
  auto kr = gb::krein_positivity_report(g);
  auto cr = gb::coulomb_positivity_report(g);
  bool nondeg = gb::coulomb_nondegenerate(g);
  Subspace P = gb::p_space(g), P0 = gb::p0_space(g), C = gb::coulomb_space(g), F = gb::maxwell_space(g);
  int rp = orthonormal_rank(P.basis()), rp0 = orthonormal_rank(P0.basis());
  double incRes = std::max({projection_residual(P0.basis(), F.basis()), projection_residual(P.basis(), P0.basis()),
                            projection_residual(P.basis(), C.basis())});
  bool inc = incRes <= 1e-8 && F.rank() < P0.rank() && rp == 6 * M && rp0 == 2 * M;
  json dk = {{"grid_points", M}, {"min_eig", kr.minEig}, {"norm_K", kr.normK},
             {"kernel_dim", kr.kernelDim}, {"dim_p0", kr.expectedKernel}, {"dim_p", kr.basisDim}};
  return {make_check("krein.p_space", kr.pass, std::max(0.0, -kr.minEig), 1e-10 * kr.normK, dk),
          make_check("krein.coulomb", cr.pass, std::max(0.0, -cr.minEig), 0, {{"min_eig", cr.minEig}, {"dim_c", cr.basisDim}}),
          make_check("krein.coulomb_nondegenerate", nondeg, 0, 0, {{"dim_c", C.rank()}}),
          make_check("krein.inclusions", inc, incRes, 1e-8,
                     {{"dim_f", F.rank()}, {"dim_p0", P0.rank()}, {"dim_p", P.rank()}, {"dim_c", C.rank()}})};
}

std::vector<CheckResult> decompose(const gb::GridPtr& gp, std::uint64_t seed, int instances) {
  const auto& g = *gp;
  Rng rng(seed ^ 0xdec0ULL);
  Subspace P = gb::p_space(g);
  double round = 0, uniq = 0;
  for (int it = 0; it < instances; ++it) {
    Vec u = P.basis() * Vec::NullaryExpr(P.rank(), [&] { return normal(rng); });
    gb::GBValues f = g.from_real(u);
    auto dec = gb::decompose_p(g, f);
    double fn = f.cwiseAbs().maxCoeff();
    round = std::max(round, (dec.g + dec.s - f).cwiseAbs().maxCoeff() / fn);
    double tr = dec.g.col(0).cwiseAbs().maxCoeff();
    for (int m = 0; m < g.size(); ++m) {
      cplx dv = 0;
      for (int l = 0; l < 3; ++l) dv += g.points()(m, l) * dec.g(m, l + 1);
      tr = std::max(tr, std::abs(dv) / g.p0()(m));
    }
    round = std::max(round, tr / fn);
    auto again = gb::decompose_p(g, dec.g);
    uniq = std::max(uniq, again.h.cwiseAbs().maxCoeff() * g.p0().maxCoeff() / fn);
    uniq = std::max(uniq, (again.g - dec.g).cwiseAbs().maxCoeff() / fn);
  }
  return {make_check("decompose.round_trip", round <= 1e-12, round, 1e-12, {{"instances", instances}}),
          make_check("decompose.uniqueness", uniq <= 1e-12, uniq, 1e-12, {{"instances", instances}})};
}

// ---------------------------------------------------------------- Cauchy data

gb::Box default_cauchy_box() { return make_box({0, 0, 0, 0}, {0.5, 1.5, 1.5, 1.5}); }

std::vector<CauchyRow> cauchy_rows(const std::vector<Level>& levels, const gb::Box& box, int samples) {
  std::vector<CauchyRow> rows;
  for (const auto& lv : levels) {
    auto gp = gb::make_grid(lv.n, lv.spacing);
    const auto& g = *gp;
    auto raw = gb::region_sample(g, box, samples, gb::SampleKind::Vector);
    std::vector<gb::GBValues> fs;
    for (auto f : raw) {
      // Coulomb projection: drop f0 and the longitudinal part
      for (int m = 0; m < g.size(); ++m) {
        Eigen::Vector3d n = g.points().row(m).transpose() / g.p0()(m);
        Eigen::Vector3cd v = f.row(m).tail<3>().transpose();
        v -= n.cast<cplx>() * (n.cast<cplx>().dot(v));
        f(m, 0) = 0;
        f.row(m).tail<3>() = v.transpose();
      }
      fs.push_back(f);
      fs.push_back(cplx(0, 1) * f);
    }
    CauchyRow r;
    r.level = lv;
    r.tolQuad = g.tolQuad();
    for (std::size_t i = 0; i < fs.size(); ++i) {
      r.selfPair = std::max(r.selfPair, std::abs(gb::cauchy_pairing(g, fs[i], fs[i])));
      for (std::size_t j = i + 1; j < fs.size(); ++j) {
        double cp = gb::cauchy_pairing(g, fs[i], fs[j]);
        double b = gb::B(g, fs[i], fs[j]);
        double nn = pnorm(g, fs[i]) * pnorm(g, fs[j]);
        r.residual = std::max(r.residual, std::abs(cp - b) / nn);
        r.signFlip = std::max(r.signFlip, std::abs(cp + b) / nn);
      }
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<CheckResult> cauchy(const std::vector<Level>& levels, const gb::Box& box) {
  auto rows = cauchy_rows(levels, box);
  bool mono = rows.size() >= 2;
  for (std::size_t i = 1; i < rows.size(); ++i) mono = mono && rows[i].residual < rows[i - 1].residual;
  bool selfZero = true;
  json table = json::array();
  for (const auto& r : rows) {
    selfZero = selfZero && r.selfPair == 0.0;
    table.push_back({{"n", r.level.n}, {"spacing", r.level.spacing}, {"residual", r.residual},
                     {"residual_against_minus_B", r.signFlip}, {"self_pairing", r.selfPair}});
  }
  double fin = rows.empty() ? 0 : rows.back().residual;
  double self = 0;
  for (const auto& r : rows) self = std::max(self, r.selfPair);
  return {make_check("cauchy.identity", mono && fin <= 1e-3, fin, 1e-3, {{"monotone", mono}, {"levels", table}}),
          make_check("cauchy.antisymmetry", selfZero, self, 0, {{"levels", table}})};
}

// ---------------------------------------------------------------- causality

CausalityConfig default_causality() {
  CausalityConfig c;
  c.levels = {{17, 0.5}, {21, 0.45}, {25, 0.4}};
  c.regions = {{"L", make_box({0, -4, 0, 0}, {0.5, 1.5, 1.5, 1.5})},
               {"R", make_box({0, 4, 0, 0}, {0.5, 1.5, 1.5, 1.5})}};
  c.witnessRegions = {{"N1", make_box({0, -1.6, 0, 0}, {0.5, 0.5, 0.5, 0.5})},
                      {"N2", make_box({0, 1.6, 0, 0}, {0.5, 0.5, 0.5, 0.5})}};
  return c;
}

std::vector<CausalityRow> causality_rows(const CausalityConfig& c) {
  std::vector<CausalityRow> rows;
  for (const auto& lv : c.levels) {
    auto g = gb::make_grid(lv.n, lv.spacing);
    gb::GBNetOptions opt;
    opt.positions = c.positions;
    opt.denseTotal = false;
    opt.spacelikeOverride = c.spacelike;
    auto net = gb::gb_net(g, c.regions, opt);
    auto rep = check_weak_causality(*net.net, c.factor * g->tolQuad());
    rows.push_back({lv, g->tolQuad(), rep.maxResidual, rep.pass});
  }
  return rows;
}

std::vector<CheckResult> causality(const CausalityConfig& c) {
  if (c.levels.empty()) throw std::invalid_argument("causality: no grid levels");
  auto rows = causality_rows(c);
  bool all = true, mono = true;
  json table = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    all = all && rows[i].pass;
    if (i > 0) mono = mono && rows[i].maxB < rows[i - 1].maxB;
    table.push_back({{"n", rows[i].level.n}, {"spacing", rows[i].level.spacing}, {"tol_quad", rows[i].tolQuad},
                     {"max_B", rows[i].maxB}, {"tolerance", c.factor * rows[i].tolQuad}});
  }
  const auto& fin = rows.back();

  auto g = gb::make_grid(c.levels.back().n, c.levels.back().spacing);
  gb::GBNetOptions opt;
  opt.positions = c.positions;
  opt.denseTotal = false;
  const auto& wr = c.witnessRegions.empty() ? c.regions : c.witnessRegions;
  if (c.witnessRegions.empty()) opt.spacelikeOverride = c.spacelike;
  auto wnet = gb::gb_net(g, wr, opt);
  double thr = c.factor * g->tolQuad();
  auto wit = check_field_causality_violation(*wnet.net, thr);
  double val = wit.entries.empty() ? wit.maxResidual : wit.entries.front().residual;
  json wd = {{"note", wit.note}, {"n", c.levels.back().n}, {"spacing", c.levels.back().spacing}};
  if (!wit.entries.empty())
    wd["pair"] = {wnet.regions[wit.entries.front().a].name, wnet.regions[wit.entries.front().b].name};
  return {make_check("causality.weak", all && (mono || rows.size() == 1), fin.maxB, c.factor * fin.tolQuad,
                     {{"monotone", mono}, {"levels", table}}),
          make_check("causality.field_witness", wit.pass, val, thr, wd)};
}

// ---------------------------------------------------------------- nets

namespace {

double min_half_width(const gb::GBGrid& g) { return 1.05 * (kPi / g.cutoff()) / 1.5; }

}  // namespace

std::vector<gb::RegionSpec> default_net_regions(const gb::GBGrid& g) {
  const double a = min_half_width(g), d = 0.2 * a;
  return {{"A", make_box({0, 0, 0, 0}, {0.5, a, a, a})},
          {"A+x", make_box({0, d, 0, 0}, {0.5, a, a, a})},
          {"A+y", make_box({0, 0, d, 0}, {0.5, a, a, a})},
          {"A-x", make_box({0, -d, 0, 0}, {0.5, a, a, a})},
          {"A-y", make_box({0, 0, -d, 0}, {0.5, a, a, a})},
          {"B", make_box({0, 0, 0, 0}, {0.75, a + d, a + d, a + d})},
          {"C", make_box({0, 0, 0, 0}, {1.0, a + 2 * d, a + 2 * d, a + 2 * d})}};
}

std::vector<gb::PoincareElement> default_actions(const gb::GBGrid& g) {
  const double d = 0.2 * min_half_width(g);
  return {gb::PoincareElement::translation(Eigen::Vector4d(0, d, 0, 0)), gb::PoincareElement::rotation_z90()};
}

std::vector<CheckResult> net(const gb::GridPtr& g, const std::vector<gb::RegionSpec>& regions,
                             const std::vector<gb::PoincareElement>& actions) {
  gb::GBNetOptions opt;
  opt.positions = 1;
  auto gn = gb::gb_net(g, regions, opt, actions);
  auto iso = check_isotony(*gn.net);
  auto red = check_reduction_isotony(*gn.net);
  auto cov = check_covariance(*gn.net, gn.actions);
  auto fun = check_quotient_functoriality(*gn.net);
  auto summary = [&](const NetReport& r) {
    json e = json::array();
    for (const auto& c : r.entries)
      e.push_back({{"what", c.what}, {"a", c.a >= 0 && c.a < int(regions.size()) ? regions[c.a].name : std::to_string(c.a)},
                   {"b", c.b >= 0 && c.b < int(regions.size()) ? regions[c.b].name : std::to_string(c.b)},
                   {"residual", c.residual}, {"pass", c.pass}});
    return json{{"entries", e}};
  };
  int mapped = 0;
  for (const auto& a : gn.actions) mapped += int(a.regionMap.size());
  json cd = summary(cov);
  cd["mapped_regions"] = mapped;
  return {make_check("net.isotony", iso.pass, iso.maxResidual, iso.tolerance, summary(iso)),
          make_check("net.reduction_isotony", red.pass, red.maxResidual, red.tolerance, summary(red)),
          make_check("net.covariance", cov.pass && mapped > 0, cov.maxResidual, cov.tolerance, cd),
          make_check("net.functoriality", fun.pass, fun.maxResidual, fun.tolerance, summary(fun))};
}

std::vector<CheckResult> net_counterexamples() {
  auto space = SymplecticSpace::darboux(2);  // (q1, p1, q2, p2)
  auto span = [&](std::initializer_list<int> idx) {
    Mat v = Mat::Zero(4, idx.size());
    int c = 0;
    for (int i : idx) v(i, c++) = 1;
    return Subspace(space, v);
  };
  const int q1 = 0, p1 = 1, q2 = 2, p2 = 3;
  struct Case {
    std::string name, target;
    Subspace X1, s1, X2, s2, X3;
    bool scale = false;
  };
  auto full = Subspace::full(space);
  auto zero = Subspace::zero(space);
  std::vector<Case> cases = {
      {"isotony", "isotony", span({q1, q2}), zero, full, span({q1}), span({q2})},
      {"reduction_isotony", "reduction_isotony", span({q1, q2}), zero, full, span({p2}), span({q1})},
      {"weak_causality", "weak_causality", span({q1}), zero, full, zero, span({p1})},
      {"covariance", "covariance", span({q1, q2}), zero, full, zero, span({q2}), true},
  };
  json d = json::array();
  bool all = true;
  for (const auto& c : cases) {
    // B1 <= B2, B3 spacelike to B1
    RegionPoset poset({"B1", "B2", "B3"}, {{0, 1}}, {{0, 2}});
    LocalNet n(poset, space);
    n.set_region(0, c.X1, c.s1);
    n.set_region(1, c.X2, c.s2);
    n.set_region(2, c.X3, zero);
    GroupAction act;
    act.name = c.scale ? "scaling by 2" : "identity";
    act.V = (c.scale ? 2.0 : 1.0) * Mat::Identity(4, 4);
    act.regionMap = {{0, 0}, {1, 1}, {2, 2}};
    std::map<std::string, bool> res = {{"isotony", check_isotony(n).pass},
                                       {"reduction_isotony", check_reduction_isotony(n).pass},
                                       {"weak_causality", check_weak_causality(n, 1e-10).pass},
                                       {"covariance", check_covariance(n, {act}).pass}};
    bool ok = true;
    for (const auto& [k, v] : res) ok = ok && (v == (k != c.target));
    all = all && ok;
    json e = {{"net", c.name}};
    for (const auto& [k, v] : res) e[k] = v ? "PASS" : "FAIL";
    d.push_back(e);
  }
  return {make_check("net.counterexamples", all, all ? 0 : 1, 0, {{"cases", d}})};
}

// ---------------------------------------------------------------- Fock

std::vector<CheckResult> fock(const FockConfig& c, std::uint64_t seed) {
  Rng rng(seed ^ 0xf0cULL);
  auto g = gb::make_grid(c.lattice, c.spacing);
  const int M = g->size();
  fock::GBFock gf(g, c.N);
  const auto& Y = gf.Y();
  const auto& Q = gf.Qf();
  std::vector<CheckResult> out;

  // CCR on the indefinite space and on the physical quotient
  double ccr = 0;
  for (int it = 0; it < 5; ++it) {
    CVec f = CVec::NullaryExpr(Y.modes(), [&] { return cplx(normal(rng), normal(rng)); });
    CVec h = CVec::NullaryExpr(Y.modes(), [&] { return cplx(normal(rng), normal(rng)); });
    double b = gb::B(*g, gf.fromY(f), gf.fromY(h));
    ccr = std::max(ccr, fock::ccr_check(Y, f, h, b).residual / std::max(1.0, std::abs(b)));
    CVec fq = CVec::NullaryExpr(Q.modes(), [&] { return cplx(normal(rng), normal(rng)); });
    CVec hq = CVec::NullaryExpr(Q.modes(), [&] { return cplx(normal(rng), normal(rng)); });
    double bq = fq.dot(hq).imag();
    ccr = std::max(ccr, fock::ccr_check(Q, fq, hq, bq).residual / std::max(1.0, std::abs(bq)));
  }
  out.push_back(make_check("fock.ccr", ccr <= 1e-10, ccr, 1e-10, {{"sector", "n <= N-2"}, {"N", c.N}}));

  // gauge generator
  double gc = 0, literal = 0, gd = 0;
  auto hs = gb::theta_real_profiles(*g);
  for (int it = 0; it < 4; ++it) {
    CVec h = random_theta_real(rng, *g);
    gb::GBValues f = random_values(rng, M);
    auto r = fock::chi_commutator_check(gf, h, f, -1.0);
    auto rl = fock::chi_commutator_check(gf, h, f, +1.0);
    gc = std::max(gc, r.residual / r.tolerance * 1e-10);
    literal = std::max(literal, rl.residual / rl.tolerance * 1e-10);
    auto dr = fock::gauge_derivative_check(gf, h, 1e-2);
    gd = std::max(gd, dr.residual / dr.tolerance * 1e-9);
  }
  out.push_back(make_check("fock.gauge_commutator", gc <= 1e-10, gc, 1e-10,
                           {{"sector", "n <= N-1"}, {"residual_with_plus_i", literal}}));
  out.push_back(make_check("fock.gauge_derivative", gd <= 1e-9, gd, 1e-9, {{"method", "Richardson"}}));

  // physical subspace for each truncation up to N
  json dims = json::array();
  bool physOk = true, nullOk = true;
  for (int n = 1; n <= c.N; ++n) {
    fock::GBFock gn(g, n);
    CMat phys = gn.physical_subspace();
    CMat range = gn.p_fock_range();
    CMat both(phys.rows(), phys.cols() + range.cols());
    both << phys, range;
    int rb = fock::crank(both), rr = fock::crank(range);
    bool ok = int(phys.cols()) == gn.P().dim() && rr == gn.P().dim() && rb == rr;
    CMat nul = gn.null_space(phys);
    CMat p0s = gn.p0_factor_span();
    CMat nb(nul.rows(), nul.cols() + p0s.cols());
    nb << nul, p0s;
    bool nok = nul.cols() == p0s.cols() && fock::crank(nb) == int(nul.cols()) &&
               int(nul.cols()) == gn.P().dim() - gn.Qf().dim();
    physOk = physOk && ok;
    nullOk = nullOk && nok;
    dims.push_back({{"N", n}, {"dim_H_prime", phys.cols()}, {"dim_Fock_Cp", gn.P().dim()},
                    {"dim_H_null", nul.cols()}, {"dim_p0_factor_span", p0s.cols()},
                    {"dim_quotient", gn.Qf().dim()}});
  }
  out.push_back(make_check("fock.physical_subspace", physOk, physOk ? 0 : 1, 0,
                           {{"one_particle_dim", 3 * M}, {"truncations", dims}}));
  out.push_back(make_check("fock.null_space", nullOk, nullOk ? 0 : 1, 0, {{"truncations", dims}}));

  // isometry of H'/H'' with the Fock space over p/p0, and intertwined fields
  CMat R = gf.p_fock_range();
  CMat W = Q.second_quantize(gf.qmap(), gf.P());
  CMat gramY = R.adjoint() * Y.metric() * R;
  CMat gramQ = W.adjoint() * Q.metric() * W;
  double iso = fock::max_abs(gramY - gramQ);
  double inter = 0;
  auto safe = gf.P().sector(c.N - 1);
  for (int it = 0; it < 3; ++it) {
    CVec v = CVec::NullaryExpr(gf.P().modes(), [&] { return cplx(normal(rng), normal(rng)); });
    CMat lhs = W * R.adjoint() * Y.field(gf.embed() * v) * R;
    CMat rhs = Q.field(gf.qmap() * v) * W;
    inter = std::max(inter, fock::max_abs(fock::restrict_cols(lhs - rhs, safe)));
  }
  out.push_back(make_check("fock.quotient_isometry", iso <= 1e-10 && inter <= 1e-10, std::max(iso, inter), 1e-10,
                           {{"gram_residual", iso}, {"field_intertwining_residual", inter}}));

  // Maxwell-space fields map H' into H''
  Subspace Fm = gb::maxwell_space(*g);
  CMat phys = gf.physical_subspace();
  CMat nul = gf.null_space(phys);
  double mx = 0;
  for (Eigen::Index k = 0; k < Fm.rank(); ++k) {
    gb::GBValues f = g->from_real(Fm.basis().col(k));
    CMat img = gf.A_Y(f) * R;
    img = fock::restrict_cols(img, safe);
    CMat rest = img - nul * (nul.adjoint() * img);
    mx = std::max(mx, fock::max_abs(rest));
    mx = std::max(mx, fock::max_abs(Q.field(gf.coordQ(f))));
  }
  out.push_back(make_check("fock.maxwell_quotient", mx <= 1e-10, mx, 1e-10,
                           {{"dim_maxwell", Fm.rank()}, {"dim_p0", 2 * M}}));

  // vacuum Weyl series: even orders reproduce the partial sums of exp(-K/4)
  CVec fq = 0.7 * CVec::NullaryExpr(Q.modes(), [&] { return cplx(normal(rng), normal(rng)); }) /
            std::sqrt(double(Q.modes()));
  double Kq = fq.squaredNorm();
  double worst = 0;
  json series = json::array();
  double partial = 0, term = 1;
  for (int j = 0; j <= c.N; ++j) {
    if (j > 0) term *= -Kq / 4 / j;
    partial += term;
    cplx v = fock::vacuum_weyl_expectation(gf, fq, 2 * j);
    worst = std::max(worst, std::abs(v - partial));
    series.push_back({{"order", 2 * j}, {"value", v.real()}, {"gap_to_closed_form", std::abs(v.real() - std::exp(-Kq / 4))}});
  }
  bool tooLarge = false;
  try {
    fock::vacuum_weyl_expectation(gf, fq, 2 * c.N + 1);
  } catch (const std::invalid_argument&) {
    tooLarge = true;
  }
  out.push_back(make_check("fock.vacuum_weyl", worst <= 1e-12 && tooLarge, worst, 1e-12,
                           {{"K", Kq}, {"series", series}, {"rejects_order_above_2N", tooLarge}}));
  return out;
}

std::vector<CheckResult> spectral(const FockConfig& c) {
  auto g = gb::make_grid(c.spectralLattice, c.spacing);
  fock::GBFock gf(g, c.spectralN);
  auto sp = fock::spectral_check(gf, Eigen::Vector4d(0.3, -0.7, 0.45, 1.1));
  double minp0 = g->p0().minCoeff();
  std::vector<double> expected;
  for (int m = 0; m < g->size(); ++m) {
    expected.push_back(g->p0()(m));
    expected.push_back(g->p0()(m));
  }
  std::sort(expected.begin(), expected.end());
  double oneGap = 0;
  for (std::size_t i = 0; i < expected.size() && i < sp.oneParticle.size(); ++i)
    oneGap = std::max(oneGap, std::abs(expected[i] - sp.oneParticle[i]));
  bool oneOk = sp.oneParticle.size() == expected.size() && oneGap <= 1e-12;
  bool twoOk = c.spectralN < 2 || std::abs(sp.twoParticleMin - 2 * minp0) <= 1e-12;
  double pos = std::max(0.0, -std::min(sp.minP0, sp.minDGammaP0));
  return {make_check("spectral.positive_energy",
                     sp.minP0 >= -1e-10 && sp.minDGammaP0 >= -1e-10 && sp.vacuumEnergy <= 1e-14 && oneOk && twoOk,
                     pos, 1e-10,
                     {{"min_P0", sp.minP0}, {"min_dGamma_P0", sp.minDGammaP0}, {"one_particle", sp.oneParticle},
                      {"two_particle_min", sp.twoParticleMin}, {"twice_min_p0", 2 * minp0}}),
          make_check("spectral.cone", sp.maxConeViolation <= 1e-10 && sp.selfAdjointResidual <= 1e-12,
                     sp.maxConeViolation, 1e-10, {{"self_adjoint_residual", sp.selfAdjointResidual}}),
          make_check("spectral.vacuum_invariance", sp.vacuumInvariance == 0.0, sp.vacuumInvariance, 0, json::object())};
}

// ---------------------------------------------------------------- global vs local

gb::GridPtr global_local_grid() {
  return gb::make_grid(std::vector<Eigen::Vector3i>{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}},
                       1.0);
}

std::vector<gb::RegionSpec> default_global_regions() {
  const std::array<double, 4> half{0.5, 2.2, 2.2, 2.2};
  std::vector<gb::RegionSpec> out{{"O", make_box({0, 0, 0, 0}, half)}};
  const char* axes = "xyz";
  for (int ax = 1; ax <= 3; ++ax)
    for (double sg : {-1.0, 1.0}) {
      std::array<double, 4> c{0, 0, 0, 0};
      c[ax] = 0.8 * sg;
      out.push_back({std::string(sg < 0 ? "-" : "+") + axes[ax - 1], make_box(c, half)});
    }
  return out;
}

std::vector<CheckResult> global_local(const gb::GridPtr& g, const std::vector<gb::RegionSpec>& regions,
                                      int positions) {
  gb::GBNetOptions opt;
  opt.denseTotal = false;
  opt.positions = positions;
  auto gn = gb::gb_net(g, regions, opt);
  std::vector<Subspace> obs, cons;
  for (int b = 0; b < int(regions.size()); ++b) {
    obs.push_back(gn.net->o(b));
    cons.push_back(gn.net->s(b));
  }
  auto rep = global_vs_local(obs, cons);
  Subspace P = gb::p_space(*g), P0 = gb::p0_space(*g);
  bool pe = subspace_equal(rep.o0, P) && subspace_equal(rep.se, P0);
  json d = {{"dim_R0", rep.dimR0}, {"dim_Re", rep.dimRe}, {"dim_o0", rep.o0.rank()}, {"dim_p", P.rank()},
            {"dim_se", rep.se.rank()}, {"dim_p0", P0.rank()}, {"union_equals_p", pe}};
  return {make_check("global_local.dimensions", rep.onto && rep.injective && rep.dimR0 == rep.dimRe && pe,
                     std::abs(rep.dimR0 - rep.dimRe), 0, d),
          make_check("global_local.form_preserving", rep.formResidual <= 1e-10, rep.formResidual, 1e-10, d)};
}

// ---------------------------------------------------------------- converge

ConvergeResult converge(const CausalityConfig& c, const gb::Box& cauchyBox) {
  if (c.levels.size() < 2) throw std::invalid_argument("converge: needs at least 2 levels");
  ConvergeResult out;
  auto cr = cauchy_rows(c.levels, cauchyBox);
  auto sr = causality_rows(c);
  for (std::size_t i = 0; i < c.levels.size(); ++i) {
    auto g = gb::make_grid(c.levels[i].n, c.levels[i].spacing);
    // K on p is block diagonal per point: eigenvalues {0, 1, 1} in the scaled coordinates
    double gap = 1e300;
    for (int m = 0; m < g->size(); ++m) {
      Eigen::Matrix<double, 1, 4> row = gb::p_lower(*g, m).transpose();
      Mat z = null_space(row);
      Eigen::Vector4d q(-gb::kEta[0], -gb::kEta[1], -gb::kEta[2], -gb::kEta[3]);
      Mat G = z.transpose() * q.asDiagonal() * z;
      Eigen::SelfAdjointEigenSolver<Mat> es(G);
      Vec ev = es.eigenvalues();
      gap = std::min(gap, ev(1) - std::abs(ev(0)));
    }
    out.rows.push_back({c.levels[i].spacing, cr[i].residual, sr[i].maxB, gap});
  }
  out.cauchyMonotone = out.spacelikeMonotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    out.cauchyMonotone = out.cauchyMonotone && out.rows[i].cauchy < out.rows[i - 1].cauchy;
    out.spacelikeMonotone = out.spacelikeMonotone && out.rows[i].spacelike < out.rows[i - 1].spacelike;
  }
  return out;
}

}  // namespace ccr::suites
