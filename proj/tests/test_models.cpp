#include "doctest.h"
#include "oracles.hpp"
#include "shockspec/errors.hpp"
#include "shockspec/glancing.hpp"
#include "shockspec/hypotheses.hpp"
#include "shockspec/model.hpp"
#include "shockspec/util.hpp"

using namespace shockspec;

TEST_CASE("burgers hypotheses all hold with unit ellipticity margin") {
  const SystemModel m = make_burgers(1);
  const Endstates es = burgers_endstates();
  const HypothesisReport rep = check_hypotheses(m, es, 64);
  CHECK(rep.all_hold());
  const auto* a3 = rep.find("A3");
  REQUIRE(a3 != nullptr);
  CHECK(a3->witness.margin == doctest::Approx(1.0));
}

TEST_CASE("isentropic gas d=2: structural hypotheses hold with margins") {
  const SystemModel m = make_isentropic(2);
  const Endstates es = isentropic_lax_endstates(m, 1.0, 2.0);
  const HypothesisReport rep = check_hypotheses(m, es, 200);
  for (const char* id : {"A1", "A2", "A3", "H0", "H1", "H2"}) {
    const auto* r = rep.find(id);
    REQUIRE(r != nullptr);
    CHECK_MESSAGE(r->verdict == HypVerdict::Holds, id);
  }
  CHECK(rep.find("A3")->witness.margin > 0.0);
  // brute-force recheck of the ellipticity margin on a fresh sphere grid
  double theta = 1e300;
  for (const Vec& xi : sphere_grid(2, 1000)) {
    Mat blk = Mat::Zero(m.r, m.r);
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        blk += xi(j) * xi(k) *
               m.visc(j, k, es.u_plus).bottomRightCorner(m.r, m.r);
    Eigen::SelfAdjointEigenSolver<Mat> s(0.5 * (blk + blk.transpose()));
    theta = std::min(theta, s.eigenvalues().minCoeff());
  }
  CHECK(theta > 0.0);
  CHECK(rep.find("A3")->witness.margin ==
        doctest::Approx(theta).epsilon(0.05));
}

TEST_CASE("zero parabolic block raises NonParabolic") {
  SystemModel m = make_burgers(1);
  m.viscosity = [](int, int, const Vec&) { return Mat::Zero(1, 1); };
  m.viscosity_deriv = [](int, int, const Vec&, const Vec&) {
    return Mat::Zero(1, 1);
  };
  m.sym_b2 = [](int, int, const Vec&) { return Mat::Zero(1, 1); };
  CHECK_THROWS_AS(check_hypotheses(m, burgers_endstates(), 16), NonParabolic);
}

TEST_CASE("burgers shock classification is Lax with l=1") {
  const ShockClass sc = classify_shock(make_burgers(1), burgers_endstates());
  CHECK(sc.i_plus == 1);
  CHECK(sc.i_minus == 1);
  CHECK(sc.i == 2);
  CHECK(sc.kind == ShockKind::Lax);
  CHECK(sc.l == 1);
  CHECK(sc.alpha == 0);
}

TEST_CASE("isentropic Lax 1-shock: i = n+1") {
  const SystemModel m = make_isentropic(1);
  const Endstates es = isentropic_lax_endstates(m, 1.0, 2.0);
  // brute-force eigenvalues u -+ c at the endstates fix the counts
  const ShockClass sc = classify_shock(m, es);
  CHECK(sc.i == m.n + 1);
  CHECK(sc.kind == ShockKind::Lax);
  CHECK(sc.l == 1);
}

TEST_CASE("equal endstates are rejected") {
  Endstates es;
  es.u_minus = Vec::Constant(1, 0.7);
  es.u_plus = Vec::Constant(1, 0.7);
  CHECK_THROWS_AS(classify_shock(make_burgers(1), es), EqualEndstates);
}

TEST_CASE("classification is invariant under positive flux scaling") {
  SystemModel m = make_overcompressive();
  const Endstates es = overcompressive_endstates();
  const ShockClass sc = classify_shock(m, es);
  CHECK(sc.kind == ShockKind::Overcompressive);
  CHECK(sc.i == m.n + 2);
  CHECK(sc.l == 2);
  SystemModel scaled = m;
  scaled.flux[0] = [&m](const Vec& u) { return Vec(3.5 * m.flux[0](u)); };
  scaled.flux_jac[0] = [&m](const Vec& u) { return Mat(3.5 * m.flux_jac[0](u)); };
  const ShockClass sc2 = classify_shock(scaled, es);
  CHECK(sc2.i_plus == sc.i_plus);
  CHECK(sc2.i_minus == sc.i_minus);
  CHECK(sc2.kind == sc.kind);
}

TEST_CASE("undercompressive model: i = n, alpha = 1") {
  const ShockClass sc =
      classify_shock(make_undercompressive(), undercompressive_endstates());
  CHECK(sc.kind == ShockKind::Undercompressive);
  CHECK(sc.i == 2);
  CHECK(sc.l == 1);
  CHECK(sc.alpha == 1);
}

TEST_CASE("multiplicity scan: burgers constant, gas constant, synthetic variable") {
  CHECK(multiplicity_scan(make_burgers(2), Vec::Constant(1, 0.3), 64).constant);

  const SystemModel gas = make_isentropic(2);
  Vec state(3);
  state << 1.2, 0.6, 0.0;
  const MultiplicityScan gs = multiplicity_scan(gas, state, 256);
  CHECK(gs.constant);
  CHECK(gs.pattern == std::vector<int>{1, 1, 1});

  const SystemModel syn = make_synthetic3x3();
  for (int budget : {64, 128, 512}) {
    const MultiplicityScan ss = multiplicity_scan(syn, Vec::Zero(3), budget);
    CHECK_FALSE(ss.constant);
    REQUIRE(ss.witness.size() == 2);
    // roots {xi1, +-|xi|} coalesce on the xi2 = 0 rays
    CHECK(std::abs(ss.witness(1)) < 0.5);
  }
}

TEST_CASE("glancing scan: scalar empty, gas d=2 matches the closed form") {
  const SystemModel b2 = make_burgers(2);
  const Endstates eb = burgers_endstates();
  std::vector<Vec> grid;
  for (double s : {0.4, 0.8, 1.2}) grid.push_back(Vec::Constant(1, s));
  CHECK(glancing_scan(b2, eb, +1, grid).empty());

  const SystemModel gas = make_isentropic(2);
  const Endstates es = isentropic_lax_endstates(gas, 1.0, 2.0);
  const GlancingReport rep = glancing_scan(gas, es, +1, grid);
  REQUIRE_FALSE(rep.empty());
  const double slope = oracles::gas_glancing_slope(
      es.u_plus(0), es.u_plus(1) / es.u_plus(0), 5.0 / 3.0, 1.0);
  for (const auto& p : rep.points) {
    CHECK(p.gap < 1e-7);
    CHECK(p.multiplicity == 2);
    CHECK(std::abs(std::abs(p.tau) - slope * p.xi_tilde.norm()) <
          1e-5 * std::max(1.0, std::abs(p.tau)));
  }
  // upstream state is supersonic: no real branch points
  CHECK(glancing_scan(gas, es, -1, grid).empty());
}

TEST_CASE("gamma2 formula and limits") {
  GlancingReport rep;
  rep.side = +1;
  rep.curve_count = 1;
  GlancingPoint p;
  p.xi_tilde = Vec::Constant(1, 1.0);
  p.tau = 1.0;  // eta(xi) = xi
  p.multiplicity = 2;
  rep.points.push_back(p);

  const Vec xi = Vec::Constant(1, 1.0);
  // s=2, rho=1e-2, |Im lambda - eta| = 1e-3
  const double g = rep.gamma2(xi, Complex(0.0, 1.0 + 1e-3), 1e-2);
  CHECK(g == doctest::Approx(1.0 + std::pow(0.11, -0.5)).epsilon(1e-10));
  CHECK(g == doctest::Approx(4.015).epsilon(1e-3));

  // gamma2 >= 1 and -> 1 away from the curve at fixed rho
  double prev = 1e300;
  for (double dist : {0.1, 1.0, 10.0, 100.0}) {
    const double gg = rep.gamma2(xi, Complex(0.0, 1.0 + dist), 1e-2);
    CHECK(gg >= 1.0);
    CHECK(gg < prev);
    prev = gg;
  }
  CHECK(prev < 1.05);

  // gamma1 ordering rho <= 1/gamma1 <= 1
  const double g1 = rep.gamma1(xi, Complex(0.0, 1.0 + 1e-3), 1e-2);
  CHECK(g1 >= 1.0);
  CHECK(1.0 / g1 >= 1e-2);
}

TEST_CASE("jacobians match centered differences to 1e-6 (H0 witness)") {
  for (const char* id : {"burgers", "isentropic", "synthetic3x3",
                         "overcompressive", "undercompressive"}) {
    const bool multid = std::string(id) == "burgers" || std::string(id) == "isentropic";
    const SystemModel m = make_builtin(id, multid ? 2 : 1);
    Vec u = Vec::Constant(m.n, 1.1);
    if (std::string(id) == "isentropic") u(0) = 1.3;
    for (int j = 0; j < m.d; ++j) {
      const Mat a = m.jac(j, u);
      Mat fd(m.n, m.n);
      for (int b = 0; b < m.n; ++b) {
        Vec e = Vec::Zero(m.n);
        e(b) = 1e-6;
        fd.col(b) = (m.flux_at(j, u + e) - m.flux_at(j, u - e)) / 2e-6;
      }
      CHECK((a - fd).norm() <= 1e-6 * std::max(1.0, a.norm()));
    }
  }
}
