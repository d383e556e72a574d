#include "doctest.h"
#include "oracles.hpp"
#include "shockspec/errors.hpp"
#include "shockspec/evans.hpp"
#include "shockspec/util.hpp"

using namespace shockspec;

namespace {
struct BurgersFix {
  SystemModel m = make_burgers(1);
  Endstates es = burgers_endstates();
  ShockProfile p = solve_profile(m, es);
  ShockClass sc = classify_shock(m, es);
  TangentFields tf = tangent_fields(m, p, sc);
};
BurgersFix& fix() {
  static BurgersFix f;
  return f;
}
}  // namespace

TEST_CASE("translational zero: |D(0,0)| below the zero floor") {
  const EvansValue ev = evans(fix().m, fix().p, Frequency::scalar(0.0));
  CHECK(ev.abs_normalized() < 1e-8);
}

TEST_CASE("evans at lambda=1 is nonzero and matches continuous orthogonalization") {
  const Frequency f = Frequency::scalar(1.0);
  const EvansValue ev = evans(fix().m, fix().p, f);
  CHECK(ev.abs_normalized() > 1e-3);
  const auto orc = oracles::evans_cont_orth(fix().m, fix().p, f);
  const Complex diff = ev.log_total() - orc.log_total;
  CHECK(std::abs(std::exp(diff) - 1.0) < 1e-6);
}

TEST_CASE("conjugate symmetry of D for real models") {
  const SystemModel m2 = make_burgers(2);
  Endstates es = burgers_endstates();
  const ShockProfile p2 = solve_profile(m2, es);
  const Vec xi = Vec::Constant(1, 0.3);
  const Complex lam(0.2, 0.5);
  const EvansValue a = evans(m2, p2, Frequency(xi, lam));
  const EvansValue b = evans(m2, p2, Frequency(xi, std::conj(lam)));
  const Complex da = a.value * std::exp(a.scale_log);
  const Complex db = b.value * std::exp(b.scale_log);
  CHECK(std::abs(db - std::conj(da)) / std::abs(da) < 1e-10);
}

TEST_CASE("renormalization invariance: halving the QR interval") {
  const Frequency f = Frequency::scalar(0.7);
  EvansOptions o1;
  o1.renorm_interval = 1.0;
  EvansOptions o2;
  o2.renorm_interval = 0.5;
  const EvansValue a = evans(fix().m, fix().p, f, o1);
  const EvansValue b = evans(fix().m, fix().p, f, o2);
  CHECK(std::abs(a.abs_normalized() - b.abs_normalized()) < 1e-8);
}

TEST_CASE("vanishing order 1 for the burgers Lax shock") {
  Vec zhat(2);  // (re lambda, im lambda) direction, no xi component in d=1
  zhat << 1.0, 0.0;
  const auto rhos = log_grid(1e-3, 1e-1, 13);
  const VanishingOrder vo = vanishing_order(fix().m, fix().p, zhat, rhos);
  CHECK(vo.conclusive);
  CHECK(vo.order == 1);
  CHECK(vo.fit_residual < 0.1);

  Vec zdiag(2);
  zdiag << 0.6, 0.8;
  const VanishingOrder vd = vanishing_order(fix().m, fix().p, zdiag, rhos);
  CHECK(vd.conclusive);
  CHECK(vd.order == 1);
}

TEST_CASE("vanishing order 2 for the overcompressive model") {
  const SystemModel m = make_overcompressive();
  const Endstates es = overcompressive_endstates();
  const ShockProfile p = solve_profile(m, es);
  Vec zhat(2);
  zhat << 1.0, 0.0;
  const auto rhos = log_grid(1e-3, 1e-1, 13);
  const VanishingOrder vo = vanishing_order(m, p, zhat, rhos);
  CHECK(vo.conclusive);
  CHECK(vo.order == 2);
}

TEST_CASE("half-decade window is inconclusive") {
  Vec zhat(2);
  zhat << 1.0, 0.0;
  const auto rhos = log_grid(3e-2, 1e-1, 6);
  const VanishingOrder vo = vanishing_order(fix().m, fix().p, zhat, rhos);
  CHECK_FALSE(vo.conclusive);
}

TEST_CASE("doubled Evans equals (-1)^N D_L") {
  // N = 2: sign +1
  for (Complex lam : {Complex(1.0, 0.0), Complex(0.35, 0.6), Complex(0.1, -1.1)}) {
    const Frequency f = Frequency::scalar(lam);
    const EvansValue d = evans(fix().m, fix().p, f);
    const EvansValue dd = doubled_evans(fix().m, fix().p, f, fix().tf);
    const Complex ratio =
        std::exp(dd.log_total() - d.log_total());
    const double sign = 1.0;  // (-1)^2
    CHECK(std::abs(ratio - sign) < 1e-6);
  }
}

TEST_CASE("doubled Evans on the contour, gas model (N odd)") {
  const SystemModel gas = make_isentropic(1);
  const Endstates es = isentropic_lax_endstates(gas, 1.0, 2.0);
  const ShockProfile p = solve_profile(gas, es);
  const ShockClass sc = classify_shock(gas, es);
  const TangentFields tf = tangent_fields(gas, p, sc);
  ContourPoint cp;
  cp.xi_tilde = Vec(0);
  cp.theta1 = 0.05;
  cp.k = 0.4;
  const Frequency f = cp.frequency();
  const EvansValue d = evans(gas, p, f);
  const EvansValue dd = doubled_evans(gas, p, f, tf);
  const Complex ratio = std::exp(dd.log_total() - d.log_total());
  CHECK(std::abs(ratio - (-1.0)) < 1e-6);  // (-1)^3
}

TEST_CASE("winding number zero for burgers on and off axis") {
  WindingOptions wo;
  wo.R = 4.0;
  wo.rho0 = 1e-2;
  const WindingResult wr = winding_number(fix().m, fix().p, Vec(0), wo);
  CHECK(wr.winding == 0);
  CHECK(wr.closure_defect < 0.2);
  CHECK(wr.min_abs_d > wo.floor);
}

TEST_CASE("winding matches a dense phase-sampling count") {
  // dense fixed sampling of the same contour as an independent count
  const SystemModel m2 = make_burgers(2);
  const ShockProfile p2 = solve_profile(m2, burgers_endstates());
  const Vec xi = Vec::Constant(1, 0.5);
  WindingOptions wo;
  wo.R = 3.0;
  wo.rho0 = 2e-2;
  const WindingResult wr = winding_number(m2, p2, xi, wo);
  CHECK(wr.winding == 0);

  FirstOrderSymbol sym(m2, p2, Frequency(xi, Complex(wo.R, 0)));
  auto limp = [&](const Frequency& f) { return sym.with_frequency(f).G_limit(+1); };
  auto limm = [&](const Frequency& f) { return sym.with_frequency(f).G_limit(-1); };
  auto lam_at = [&](double t) -> Complex {
    t = std::fmod(t, 4.0);
    if (t < 1.0) return wo.R * std::exp(Complex(0, -M_PI / 2 + M_PI * t));
    if (t < 2.0) return Complex(0, wo.R + (wo.rho0 - wo.R) * (t - 1));
    if (t < 3.0) return wo.rho0 * std::exp(Complex(0, M_PI / 2 - M_PI * (t - 2)));
    return Complex(0, -wo.rho0 + (wo.rho0 - wo.R) * (t - 3));
  };
  const Frequency f0(xi, lam_at(0));
  FrameContinuation cp(limp, true, f0), cm(limm, false, f0);
  double total = 0.0;
  Complex prev;
  const int Npts = 2000;
  for (int i = 0; i <= Npts; ++i) {
    const Frequency f(xi, lam_at(4.0 * i / Npts));
    cp.step_to(f);
    cm.step_to(f);
    const CMat fp = cp.frame(), fm = cm.frame();
    const Complex v = evans(m2, p2, f, EvansOptions{}, &fp, &fm).value;
    if (i > 0) total += std::arg(v / prev);
    prev = v;
  }
  CHECK(std::lround(total / (2 * M_PI)) == wr.winding);
}

TEST_CASE("contour through the origin reports ContourTooClose") {
  WindingOptions wo;
  wo.rho0 = 0.0;  // passes through lambda = 0 where D vanishes
  wo.R = 2.0;
  CHECK_THROWS_AS(winding_number(fix().m, fix().p, Vec(0), wo),
                  ContourTooClose);
}
