#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "shockspec/errors.hpp"
#include "shockspec/profile.hpp"

using namespace shockspec;

TEST_CASE("rankine-hugoniot residuals") {
  const SystemModel m = make_burgers(1);
  CHECK(rankine_hugoniot_residual(m, burgers_endstates(1.0, -1.0)).norm() ==
        doctest::Approx(0.0));
  // F1(U+) - F1(U-) = 0 - 1/2
  CHECK(rankine_hugoniot_residual(m, burgers_endstates(1.0, 0.0))(0) ==
        doctest::Approx(-0.5));
  const SystemModel gas = make_isentropic(1);
  const Endstates es = isentropic_lax_endstates(gas, 1.0, 2.0);
  CHECK(rankine_hugoniot_residual(gas, es).norm() < 1e-10);
}

TEST_CASE("burgers profile matches -tanh(x/2) to 1e-8") {
  const SystemModel m = make_burgers(1);
  const ShockProfile p = solve_profile(m, burgers_endstates());
  REQUIRE(p.n() == 1);
  CHECK(p.residual < 1e-8);
  CHECK(p.decay_rate > 0.5);
  double worst = 0.0, worst_d = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    worst = std::max(worst,
                     std::abs(p.values(0, i) - oracles::burgers_profile(p.grid[i])));
    worst_d = std::max(worst_d, std::abs(p.derivative(0, i) -
                                         oracles::burgers_profile_deriv(p.grid[i])));
  }
  CHECK(worst < 1e-8);
  CHECK(worst_d < 1e-8);
  // off-node evaluation
  CHECK(std::abs(p.at(0.3721)(0) - oracles::burgers_profile(0.3721)) < 1e-8);
  CHECK((p.at(p.L)(0) - (-1.0)) < 1e-8);
}

TEST_CASE("gas profile matches the reduced phase-portrait integration") {
  const SystemModel gas = make_isentropic(1);
  const Endstates es = isentropic_lax_endstates(gas, 1.0, 2.0);
  const ShockProfile p = solve_profile(gas, es);
  CHECK(p.residual < 1e-8);
  CHECK((p.values.col(0) - es.u_minus).norm() < 1e-7);
  CHECK((p.values.col(p.size() - 1) - es.u_plus).norm() < 1e-7);
  // density is monotone (specific volume 1/rho monotone too)
  for (int i = 1; i < p.size(); ++i) CHECK(p.values(0, i) >= p.values(0, i - 1) - 1e-12);
  // momentum constant along the connection
  for (int i = 0; i < p.size(); i += 50)
    CHECK(p.values(1, i) == doctest::Approx(es.u_minus(1)).epsilon(1e-9));
  const auto orc = oracles::gas_profile_rk4(es.u_minus(0), es.u_plus(0),
                                            es.u_minus(1), 5.0 / 3.0, 1.0, 1.0,
                                            p.L, 1e-4);
  double worst = 0.0;
  for (const auto& [x, rho] : orc) {
    if (std::abs(x) > p.L) continue;
    worst = std::max(worst, std::abs(p.at(x)(0) - rho));
  }
  CHECK(worst < 1e-7);
}

TEST_CASE("violated jump condition is rejected") {
  const SystemModel m = make_burgers(1);
  CHECK_THROWS_AS(solve_profile(m, burgers_endstates(1.0, 0.0)), RHViolated);
}

TEST_CASE("translation covariance of the phase condition") {
  const SystemModel m = make_burgers(1);
  ProfileOptions base;
  const ShockProfile p0 = solve_profile(m, burgers_endstates(), base);
  ProfileOptions shifted = base;
  // phase value u(0) = ubar(-1.5) produces the profile shifted by +1.5
  shifted.phase_value = oracles::burgers_profile(-1.5);
  const ShockProfile p1 = solve_profile(m, burgers_endstates(), shifted);
  double worst = 0.0;
  for (double x : {-4.0, -1.0, 0.0, 2.0, 5.0})
    worst = std::max(worst, std::abs(p1.at(x)(0) - p0.at(x - 1.5)(0)));
  CHECK(worst < 1e-6);
}

TEST_CASE("doubling L changes the profile on the window below 1e-8") {
  const SystemModel m = make_burgers(1);
  ProfileOptions o1;
  o1.L = 15.0;
  ProfileOptions o2;
  o2.L = 30.0;
  const ShockProfile p1 = solve_profile(m, burgers_endstates(), o1);
  const ShockProfile p2 = solve_profile(m, burgers_endstates(), o2);
  double worst = 0.0;
  for (double x = -14.5; x <= 14.5; x += 0.73)
    worst = std::max(worst, (p1.at(x) - p2.at(x)).norm());
  CHECK(worst < 1e-8);
}

TEST_CASE("derivative decays at the fitted rate") {
  const SystemModel m = make_burgers(1);
  const ShockProfile p = solve_profile(m, burgers_endstates());
  // |U'(x)| <= C exp(-rate |x|) on the outer half
  const double C = 2.0;
  for (double x = p.L / 2; x <= p.L; x += 0.37) {
    CHECK(p.derivative_at(x).norm() <=
          C * std::exp(-p.decay_rate * std::abs(x)) + 1e-12);
    CHECK(p.derivative_at(-x).norm() <=
          C * std::exp(-p.decay_rate * std::abs(x)) + 1e-12);
  }
}

TEST_CASE("overcompressive profile and two tangent fields") {
  const SystemModel m = make_overcompressive();
  const Endstates es = overcompressive_endstates();
  const ShockProfile p = solve_profile(m, es);
  CHECK(p.residual < 1e-8);
  CHECK((p.at(p.L) - es.u_plus).norm() < 1e-6);
  const ShockClass sc = classify_shock(m, es);
  REQUIRE(sc.l == 2);
  const TangentFields tf = tangent_fields(m, p, sc);
  CHECK(tf.l == 2);
  // both fields decay at the ends
  for (const auto& phi : tf.phi) {
    const int mlast = static_cast<int>(tf.grid.size()) - 1;
    CHECK(phi.col(0).norm() < 1e-5);
    CHECK(phi.col(mlast).norm() < 1e-5);
  }
  // independence at x=0
  const int mid = static_cast<int>(tf.grid.size()) / 2;
  Mat both(2, 2);
  both.col(0) = tf.phi[0].col(mid).normalized();
  both.col(1) = tf.phi[1].col(mid).normalized();
  CHECK(std::abs(both.determinant()) > 0.5);
}

TEST_CASE("burgers tangent field is the profile derivative") {
  const SystemModel m = make_burgers(1);
  const ShockProfile p = solve_profile(m, burgers_endstates());
  const ShockClass sc = classify_shock(m, burgers_endstates());
  const TangentFields tf = tangent_fields(m, p, sc);
  REQUIRE(tf.l == 1);
  double worst = 0.0;
  for (size_t i = 0; i < tf.grid.size(); ++i)
    worst = std::max(worst, std::abs(tf.phi[0](0, i) -
                                     oracles::burgers_profile_deriv(tf.grid[i])));
  CHECK(worst < 1e-8);
}

TEST_CASE("undercompressive model keeps a single bounded solution") {
  const SystemModel m = make_undercompressive();
  const Endstates es = undercompressive_endstates();
  const ShockProfile p = solve_profile(m, es);
  CHECK(p.residual < 1e-8);
  // profile is the scalar shock in u with v = 0
  for (double x : {-3.0, 0.4, 2.2})
    CHECK(std::abs(p.at(x)(0) - oracles::burgers_profile(x)) < 1e-7);
  for (int i = 0; i < p.size(); i += 101) CHECK(std::abs(p.values(1, i)) < 1e-9);
  const ShockClass sc = classify_shock(m, es);
  const TangentFields tf = tangent_fields(m, p, sc);
  CHECK(tf.l == 1);
}

TEST_CASE("profile csv round trip is bit-identical") {
  const SystemModel m = make_burgers(1);
  ProfileOptions o;
  o.L = 12.0;
  const ShockProfile p = solve_profile(m, burgers_endstates(), o);
  std::stringstream s1;
  p.write_csv(s1);
  std::stringstream in(s1.str());
  const ShockProfile q = ShockProfile::read_csv(in);
  std::stringstream s2;
  q.write_csv(s2);
  CHECK(s1.str() == s2.str());
}
