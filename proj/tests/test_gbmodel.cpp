#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ccr/gbmodel.hpp"
#include "ccr/suites.hpp"

using namespace ccr;
using namespace ccr::gb;

namespace {

GBValues random_theta_real(const GBGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  GBValues f = g.zeros();
  for (int m = 0; m < g.size(); ++m)
    for (int mu = 0; mu < 4; ++mu) f(m, mu) = cplx(n(rng), n(rng));
  return theta(g, f) * 0.5 + f * 0.5;
}

CVec random_profile(const GBGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  CVec h(g.size());
  for (int m = 0; m < g.size(); ++m) h(m) = cplx(n(rng), n(rng));
  CVec r(g.size());
  for (int m = 0; m < g.size(); ++m) r(m) = 0.5 * (h(m) + std::conj(h(g.mirror(m))));
  return r;
}

}  // namespace

TEST_CASE("grid excludes the origin and is mirror closed") {
  auto g = make_grid(3, 0.5);
  CHECK(g->size() == 26);
  for (int m = 0; m < g->size(); ++m) {
    CHECK(g->mirror(g->mirror(m)) == m);
    CHECK(g->p0()(m) == doctest::Approx(g->points().row(m).norm()));
  }
  CHECK(g->index_of({0, 0, 0}) == -1);
  CHECK(g->real_dim() == 8 * 26);
}

TEST_CASE("real realization round trips") {
  auto g = make_grid(3, 0.5);
  std::mt19937_64 rng(3);
  GBValues f = random_theta_real(*g, rng);
  CHECK(is_theta_real(*g, f));
  CHECK((g->from_real(g->to_real(f)) - f).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("B is antisymmetric and equals the realized form") {
  auto g = make_grid(3, 0.5);
  std::mt19937_64 rng(5);
  GBValues f = random_theta_real(*g, rng), h = random_theta_real(*g, rng);
  CHECK(B(*g, f, h) == doctest::Approx(-B(*g, h, f)));
  double viaForm = g->to_real(f).dot(g->space()->dense_form() * g->to_real(h));
  CHECK(viaForm == doctest::Approx(B(*g, f, h)).epsilon(1e-10));
  CHECK(std::abs(K(*g, f, h) - std::conj(K(*g, h, f))) < 1e-12);
}

TEST_CASE("p0 is the radical of B on p") {
  auto g = make_grid(3, 0.5);
  Subspace p = p_space(*g), p0 = p0_space(*g);
  CHECK(subspace_contains(p, p0));
  CHECK(subspace_equal(radical(p), p0));
  CHECK(p0.rank() == 2 * g->size());
}

TEST_CASE("gauge maps preserve B and fix p0 pointwise on p") {
  auto g = make_grid(3, 0.5);
  std::mt19937_64 rng(7);
  CVec h = random_profile(*g, rng);
  GaugeMap map = make_gauge(*g, h, 0.7);
  GBValues f = random_theta_real(*g, rng), k = random_theta_real(*g, rng);
  GBValues gf = gauge_apply(*g, map, f), gk = gauge_apply(*g, map, k);
  CHECK(B(*g, gf, gk) == doctest::Approx(B(*g, f, k)).epsilon(1e-10));
  CVec bad = CVec::Ones(g->size()) * cplx(0, 1);
  CHECK_THROWS_AS(make_gauge(*g, bad), std::invalid_argument);
}

TEST_CASE("decomposition of p reconstructs the vector") {
  auto g = make_grid(3, 0.5);
  Subspace p = p_space(*g);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  Vec c(p.rank());
  for (int i = 0; i < c.size(); ++i) c(i) = n(rng);
  GBValues f = g->from_real(p.basis() * c);
  Decomposition d = decompose_p(*g, f);
  CHECK((d.g + d.s - f).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((d.s - p_times(*g, d.h)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("K is positive on the Coulomb space") {
  auto g = make_grid(3, 0.5);
  auto r = coulomb_positivity_report(*g);
  CHECK(r.pass);
  CHECK(r.minEig > 0);
}

TEST_CASE("translations preserve B") {
  auto g = make_grid(3, 0.5);
  std::mt19937_64 rng(11);
  GBValues f = random_theta_real(*g, rng), h = random_theta_real(*g, rng);
  auto t = PoincareElement::translation({0.3, 1.0, -0.5, 2.0});
  CHECK(B(*g, poincare_action(*g, t, f), poincare_action(*g, t, h)) ==
        doctest::Approx(B(*g, f, h)).epsilon(1e-10));
  auto r = PoincareElement::rotation_z90();
  CHECK(B(*g, poincare_action(*g, r, f), poincare_action(*g, r, h)) ==
        doctest::Approx(B(*g, f, h)).epsilon(1e-10));
}

TEST_CASE("box geometry") {
  Box a{{-0.5, -4.5, -1.5, -1.5}, {0.5, -3.5, 1.5, 1.5}};
  Box b{{-0.5, 3.5, -1.5, -1.5}, {0.5, 4.5, 1.5, 1.5}};
  CHECK(boxes_spacelike(a, b));
  Box late = b.translated({8.0, 0, 0, 0});
  CHECK_FALSE(boxes_spacelike(a, late));
  Box big{{-1, -5, -2, -2}, {1, -3, 2, 2}};
  CHECK(box_inside(a, big));
  CHECK_FALSE(box_inside(big, a));
}

TEST_CASE("staged reduction of the two-chain matches single reduction") {
  auto g = make_grid(3, 0.5);
  auto chain = two_chain(*g);
  REQUIRE(chain.size() == 2);
  for (const auto& c : suites::stages_gb(g)) CHECK_MESSAGE(c.pass, c.id);
  for (const auto& c : suites::stage1_radical(g)) CHECK_MESSAGE(c.pass, c.id);
}
