#include "doctest.h"
#include "oracle_evolution.hpp"
#include "oracles.hpp"
#include "shockspec/errors.hpp"
#include "shockspec/green.hpp"
#include "shockspec/resolvent.hpp"
#include "shockspec/util.hpp"

using namespace shockspec;

namespace {
struct Fx {
  SystemModel m = make_burgers(1);
  Endstates es = burgers_endstates();
  ShockProfile p = solve_profile(m, es);
  ShockClass cls = classify_shock(m, es);
};
Fx& fx() {
  static Fx f;
  return f;
}

ForcingSpec zero_forcing(int n) {
  ForcingSpec s;
  s.n = n;
  s.name = "zero";
  s.l1 = 0;
  s.linf = 0;
  s.dx_l1 = 0;
  s.f = [n](double) { return Vec::Zero(n); };
  s.df = [n](double) { return Vec::Zero(n); };
  return s;
}
}  // namespace

TEST_CASE("zero forcing gives the zero solution") {
  const Frequency f = Frequency::scalar(Complex(0.3, 0.4));
  ResolventOptions ro;
  ro.check_residual = false;
  const ResolventSolution sol =
      solve_resolvent(fx().m, fx().p, f, zero_forcing(1), 0, ro);
  CHECK(sol.norm_linf < 1e-10);
}

TEST_CASE("resolvent matches the time-stepping Laplace oracle") {
  const Complex lam(1.0, 0.0);
  const ForcingSpec g = gaussian_forcing(1, 0, 0.0, 1.0);
  for (int beta : {0, 1}) {
    const ResolventSolution sol = solve_resolvent(
        fx().m, fx().p, Frequency::scalar(lam), g, beta, ResolventOptions{});
    CHECK(sol.residual < 1e-6 * (1 + sol.f_l1 + sol.f_linf));
    // oracle: U = -int_0^inf e^{-lambda t} e^{Lt} (d^beta f) dt
    auto a = [&](double x) { return oracles::burgers_profile(x); };
    auto u0 = [&](double x) {
      return beta == 0 ? g.f(x)(0) : g.df(x)(0);
    };
    const auto orc = oracles::scalar_laplace_oracle(a, u0, 30.0, 4001, 40.0,
                                                    0.004, lam);
    double worst = 0.0, scale = 0.0;
    for (size_t i = 0; i < orc.x.size(); i += 7) {
      const double x = orc.x[i];
      if (std::abs(x) > 15.0) continue;
      // interpolate the solver output
      const auto it = std::upper_bound(sol.x.begin(), sol.x.end(), x);
      const int q = std::clamp(static_cast<int>(it - sol.x.begin()) - 1, 0,
                               static_cast<int>(sol.x.size()) - 2);
      const double t = (x - sol.x[q]) / (sol.x[q + 1] - sol.x[q]);
      const Complex uu = ((1 - t) * sol.U[q] + t * sol.U[q + 1])(0);
      worst = std::max(worst, std::abs(uu + orc.laplace[i]));
      scale = std::max(scale, std::abs(uu));
    }
    CHECK(worst / scale < 1e-4);
  }
}

TEST_CASE("linearity of the resolvent map") {
  const Frequency f = Frequency::scalar(Complex(0.5, 0.7));
  const ForcingSpec g1 = gaussian_forcing(1, 0, 0.0, 1.0);
  const ForcingSpec g2 = gaussian_forcing(1, 0, 1.5, 0.7);
  ForcingSpec combo = g1;
  combo.f = [&](double x) { return Vec(2.0 * g1.f(x) - 0.5 * g2.f(x)); };
  combo.df = [&](double x) { return Vec(2.0 * g1.df(x) - 0.5 * g2.df(x)); };
  ResolventOptions ro;
  ro.check_residual = false;
  const auto s1 = solve_resolvent(fx().m, fx().p, f, g1, 0, ro);
  const auto s2 = solve_resolvent(fx().m, fx().p, f, g2, 0, ro);
  const auto sc = solve_resolvent(fx().m, fx().p, f, combo, 0, ro);
  double worst = 0.0;
  for (size_t i = 0; i < sc.x.size(); ++i)
    worst = std::max(worst,
                     (sc.U[i] - 2.0 * s1.U[i] + 0.5 * s2.U[i]).norm());
  CHECK(worst < 1e-10);
}

TEST_CASE("conjugate symmetry of the resolvent") {
  const SystemModel m2 = make_burgers(2);
  const ShockProfile p2 = solve_profile(m2, burgers_endstates());
  const Vec xi = Vec::Constant(1, 0.2);
  const ForcingSpec g = gaussian_forcing(1, 0, 0.5, 1.0);
  ResolventOptions ro;
  ro.check_residual = false;
  const auto sa = solve_resolvent(m2, p2, Frequency(xi, Complex(0.4, 0.6)), g, 0, ro);
  const auto sb = solve_resolvent(m2, p2, Frequency(xi, Complex(0.4, -0.6)), g, 0, ro);
  double worst = 0.0;
  for (size_t i = 0; i < sa.x.size(); ++i)
    worst = std::max(worst, (sb.U[i] - sa.U[i].conjugate()).norm());
  CHECK(worst < 1e-10);
}

TEST_CASE("grid refinement changes |U|_inf below 1e-4 relative") {
  const Frequency f = Frequency::scalar(Complex(0.2, 0.3));
  const ForcingSpec g = gaussian_forcing(1, 0, 0.0, 1.0);
  ResolventOptions coarse;
  coarse.check_residual = false;
  coarse.bvp.segment_length = 1.0;
  coarse.bvp.output_spacing = 0.05;
  ResolventOptions fine = coarse;
  fine.bvp.segment_length = 0.5;
  fine.bvp.output_spacing = 0.025;
  const auto sa = solve_resolvent(fx().m, fx().p, f, g, 0, coarse);
  const auto sb = solve_resolvent(fx().m, fx().p, f, g, 0, fine);
  CHECK(std::abs(sa.norm_linf - sb.norm_linf) / sb.norm_linf < 1e-4);
}

TEST_CASE("resolvent scaling exponents on the contour (Lax)") {
  const auto rhos = log_grid(2e-3, 1e-1, 12);
  const auto fam = default_forcing_family(1, true);
  ScanOptions so;
  so.jobs = 4;
  SUBCASE("beta=0, p=inf: exponent above -1.65") {
    const ScanReport rep =
        scaling_scan(fx().m, fx().p, fx().cls, {}, rhos, 0,
                     std::numeric_limits<double>::infinity(), fam, so);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.fit.slope >= -1.65);
  }
  SUBCASE("beta=1, p=2: exponent above -0.65") {
    const ScanReport rep = scaling_scan(fx().m, fx().p, fx().cls, {}, rhos, 1,
                                        2.0, fam, so);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.fit.slope >= -0.65);
  }
  SUBCASE("weak-norm variant passes the same thresholds") {
    const ScanReport rep = scaling_scan_weak_norm(fx().m, fx().p, fx().cls, {},
                                                  rhos, 1, 2.0, fam, so);
    CHECK(rep.verdict == Verdict::Pass);
    CHECK(rep.fit.slope >= -0.65);
  }
}

TEST_CASE("weak-norm ratio never exceeds the strong-norm ratio") {
  // sharp forcing: |f_x|_L1 >> |f|_L1
  const ForcingSpec sharp = gaussian_forcing(1, 0, 0.0, 0.05);
  CHECK(sharp.dx_l1 > 10.0 * sharp.l1);
  const Frequency f = Frequency::scalar(Complex(0.3, 0.2));
  const auto sol = solve_resolvent(fx().m, fx().p, f, sharp, 1);
  const double strong = sol.norm_l2 / sharp.l1;
  const double weak = sol.norm_l2 / (sharp.l1 + sharp.dx_l1);
  CHECK(weak <= strong);
}

TEST_CASE("undercompressive scan: beta=1 threshold moves to -1.65") {
  const SystemModel m = make_undercompressive();
  const Endstates es = undercompressive_endstates();
  const ShockProfile p = solve_profile(m, es);
  const ShockClass cls = classify_shock(m, es);
  REQUIRE(cls.alpha == 1);
  const auto rhos = log_grid(2e-3, 1e-1, 12);
  const auto fam = std::vector<ForcingSpec>{gaussian_forcing(2, 1, 0.0, 1.0),
                                            gaussian_forcing(2, 0, 1.0, 0.8)};
  ScanOptions so;
  so.jobs = 4;
  const ScanReport rep = scaling_scan(m, p, cls, {}, rhos, 1, 2.0, fam, so);
  CHECK(rep.predicted_exponent == doctest::Approx(-1.5));
  CHECK(rep.verdict == Verdict::Pass);
  // weak-norm variant keeps the undercompressive threshold
  const ScanReport wrep =
      scaling_scan_weak_norm(m, p, cls, {}, rhos, 1, 2.0, fam, so);
  CHECK(wrep.predicted_exponent == doctest::Approx(-1.5));
  CHECK(wrep.verdict == Verdict::Pass);
}

TEST_CASE("conjugator is the identity for constant coefficients") {
  const SystemModel m = make_constant_coefficient(0.8, 1.0);
  const ShockProfile p = ShockProfile::constant(m, Vec::Zero(1), 10.0);
  FirstOrderSymbol sym(m, p, Frequency::scalar(Complex(0.4, 0.3)));
  const Conjugator c = compute_conjugator(sym);
  CHECK(c.max_correction < 1e-10);
}

TEST_CASE("conjugator reduces the doubled burgers system") {
  FirstOrderSymbol sym(fx().m, fx().p, Frequency::scalar(Complex(0.15, 0.2)));
  const Conjugator c = compute_conjugator(sym);
  CHECK(c.max_correction < 50.0);
  CHECK(c.residual < 1e-4);
}

TEST_CASE("fast blocks keep a uniform real-part margin on the contour") {
  double cmin = 1e300, cmax = 0.0;
  for (double rho : log_grid(1e-3, 1e-1, 7)) {
    ContourPoint cp;
    cp.xi_tilde = Vec(0);
    cp.k = rho;
    const Frequency f = cp.frequency();
    FirstOrderSymbol sym(fx().m, fx().p, f);
    const BlockSplit bs =
        FirstOrderSymbol::block_split(sym.G_doubled_limit(), 2 * fx().m.n);
    REQUIRE(bs.nPp + bs.nPm == 2);
    for (int i = bs.nH; i < 2 * sym.N() - 0; ++i) {
      (void)i;
    }
    double local = 1e300;
    for (int i = bs.nH; i < bs.nH + bs.nPp + bs.nPm; ++i)
      local = std::min(local, std::abs(bs.eig(i).real()));
    cmin = std::min(cmin, local);
    cmax = std::max(cmax, local);
  }
  CHECK(cmin > 0.5);             // fast rates stay order one
  CHECK(cmax / cmin < 1.5);      // and stable across the grid
}

TEST_CASE("two-sided estimate: finite sup with stable refinement") {
  std::vector<ContourPoint> pts;
  for (double k : log_grid(5e-3, 0.2, 5)) {
    ContourPoint cp;
    cp.xi_tilde = Vec(0);
    cp.k = k;
    pts.push_back(cp);
  }
  const auto fam = std::vector<ForcingSpec>{gaussian_forcing(1, 0, 0.0, 1.0),
                                            gaussian_forcing(1, 0, 1.0, 0.6)};
  ScanOptions so;
  so.jobs = 4;
  const MaxEstimateReport rep =
      verify_max_estimate(fx().m, fx().p, pts, fam, so);
  CHECK(rep.sup_ratio > 0.0);
  CHECK(std::isfinite(rep.sup_ratio));
}

TEST_CASE("auxiliary problem obeys the whole-line bounds") {
  const ForcingSpec g = gaussian_forcing(1, 0, 0.3, 1.0);
  const AuxiliaryReport ar =
      auxiliary_solve(fx().m, fx().p, 1e-2, g, 2.0, ResolventOptions{});
  CHECK(std::isfinite(ar.c_v));
  CHECK(std::isfinite(ar.c_vx));
  // stability of the constant across the rho range
  std::vector<double> cs;
  for (double rho : {1e-3, 1e-2, 1e-1})
    cs.push_back(
        auxiliary_solve(fx().m, fx().p, rho, g, 2.0, ResolventOptions{}).c_v);
  const double spread = *std::max_element(cs.begin(), cs.end()) /
                        *std::min_element(cs.begin(), cs.end());
  CHECK(spread < 10.0);

  ScanOptions so;
  so.jobs = 3;
  const ScanReport rep =
      auxiliary_scan(fx().m, fx().p, log_grid(1e-3, 1e-1, 9), g, 2.0, 0, so);
  CHECK(rep.fit.slope >= -0.1);
  CHECK(rep.verdict == Verdict::Pass);
}

TEST_CASE("green kernel: constant-coefficient closed form to 1e-6") {
  const double a = 1.0, b = 1.0, lam0 = 0.3;
  const SystemModel m = make_constant_coefficient(a, b);
  const ShockProfile p = ShockProfile::constant(m, Vec::Zero(1), 16.0);
  GreenKernelOptions go;
  go.bump_width = 0.06;
  const std::vector<double> ys{-1.0, 0.5};
  const std::vector<double> xs{-4.0, -1.5, 0.0, 1.0, 3.0};
  const GreenKernelReport rep = green_kernel_1d(m, p, lam0, ys, xs, go);
  double worst = 0.0;
  for (size_t j = 0; j < ys.size(); ++j)
    for (size_t i = 0; i < xs.size(); ++i) {
      const double want = oracles::constcoef_green(a, b, lam0, xs[i], ys[j]);
      worst = std::max(worst,
                       std::abs(rep.kernel[j][i](0, 0).real() - want));
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("green kernel bound constants: shock case, alpha preference") {
  const std::vector<double> ys = linear_grid(-4.0, 4.0, 5);
  const std::vector<double> xs = linear_grid(-8.0, 8.0, 9);
  const GreenKernelReport rep =
      green_kernel_1d(fx().m, fx().p, 1e-2, ys, xs, GreenKernelOptions{});
  CHECK(std::isfinite(rep.C_bound));
  CHECK(rep.C_bound > 0.0);
  CHECK(rep.preferred_alpha == 0);  // Lax case needs no e^{-th|y|} excess

  const SystemModel uc = make_undercompressive();
  const ShockProfile up = solve_profile(uc, undercompressive_endstates());
  const GreenKernelReport urep =
      green_kernel_1d(uc, up, 1e-2, ys, xs, GreenKernelOptions{});
  CHECK(urep.preferred_alpha == 1);
}
