#include "shockspec/resolvent.hpp"

#include <cmath>

#include "shockspec/errors.hpp"
#include "shockspec/subspace.hpp"
#include "shockspec/util.hpp"

namespace shockspec {

// ---- forcing families -------------------------------------------------

namespace {

ForcingSpec make_component_forcing(int n, int comp, std::string name,
                                   std::function<double(double)> g,
                                   std::function<double(double)> dg,
                                   double l1, double linf, double dx_l1,
                                   double width) {
  ForcingSpec s;
  s.feature_width = width;
  s.n = n;
  s.name = std::move(name);
  s.l1 = l1;
  s.linf = linf;
  s.dx_l1 = dx_l1;
  s.f = [n, comp, g](double x) {
    Vec v = Vec::Zero(n);
    v(comp) = g(x);
    return v;
  };
  s.df = [n, comp, dg](double x) {
    Vec v = Vec::Zero(n);
    v(comp) = dg(x);
    return v;
  };
  return s;
}

}  // namespace

ForcingSpec gaussian_forcing(int n, int comp, double c, double w) {
  const double amp = 1.0 / (w * std::sqrt(2 * M_PI));  // unit mass
  auto g = [c, w, amp](double x) {
    const double t = (x - c) / w;
    return amp * std::exp(-0.5 * t * t);
  };
  auto dg = [c, w, amp](double x) {
    const double t = (x - c) / w;
    return -amp * t / w * std::exp(-0.5 * t * t);
  };
  return make_component_forcing(
      n, comp, "gauss(c=" + std::to_string(c) + ",w=" + std::to_string(w) + ")",
      g, dg, 1.0, amp, 2.0 * amp, w);
}

ForcingSpec tophat_forcing(int n, int comp, double c, double w) {
  const double amp = 0.5 / w;
  auto g = [c, w, amp](double x) {
    return (std::abs(x - c) <= w) ? amp : 0.0;
  };
  auto dg = [](double) { return 0.0; };  // distributional; not for beta=1
  return make_component_forcing(
      n, comp, "tophat(c=" + std::to_string(c) + ",w=" + std::to_string(w) + ")",
      g, dg, 1.0, amp, std::numeric_limits<double>::quiet_NaN(), w);
}

ForcingSpec mollifier_forcing(int n, int comp, double c, double w) {
  // integral of exp(-1/(1-t^2)) over (-1,1)
  static const double kMass = 0.443993816168079437;
  const double amp = 1.0 / (kMass * w);
  auto g = [c, w, amp](double x) {
    const double t = (x - c) / w;
    if (std::abs(t) >= 1.0) return 0.0;
    return amp * std::exp(-1.0 / (1.0 - t * t));
  };
  auto dg = [c, w, amp](double x) {
    const double t = (x - c) / w;
    if (std::abs(t) >= 1.0) return 0.0;
    const double q = 1.0 - t * t;
    return amp * std::exp(-1.0 / q) * (-2.0 * t / (q * q)) / w;
  };
  // |g'|_L1 = 2 max g = 2 amp exp(-1)
  return make_component_forcing(
      n, comp, "bump(c=" + std::to_string(c) + ",w=" + std::to_string(w) + ")",
      g, dg, 1.0, amp * std::exp(-1.0), 2.0 * amp * std::exp(-1.0), w);
}

std::vector<ForcingSpec> default_forcing_family(int n, bool smooth_only) {
  std::vector<ForcingSpec> fam;
  fam.push_back(gaussian_forcing(n, 0, 0.0, 1.0));
  fam.push_back(gaussian_forcing(n, 0, 2.5, 0.5));
  fam.push_back(gaussian_forcing(n, n > 1 ? 1 : 0, -2.0, 1.5));
  if (smooth_only) {
    fam.push_back(mollifier_forcing(n, 0, -1.0, 2.0));
    fam.push_back(mollifier_forcing(n, n > 1 ? 1 : 0, 1.0, 3.0));
  } else {
    fam.push_back(tophat_forcing(n, 0, -1.0, 1.0));
    fam.push_back(tophat_forcing(n, n > 1 ? 1 : 0, 1.5, 2.0));
  }
  return fam;
}

// ---- resolvent solve ---------------------------------------------------

double ResolventSolution::norm_lp(double p) const {
  if (std::isinf(p)) return norm_linf;
  if (p == 2.0) return norm_l2;
  if (p == 1.0) return norm_l1;
  throw Error("norm_lp: only p in {1,2,inf}");
}

double ResolventSolution::ux_lp(double p) const {
  if (std::isinf(p)) return ux_linf;
  if (p == 2.0) return ux_l2;
  if (p == 1.0) return ux_l1;
  throw Error("ux_lp: only p in {1,2,inf}");
}

namespace {

struct TailData {
  // expansion of the doubled state beyond x = L in the stable eigenbasis
  CVec mu;                  // stable eigenvalues
  CMat vecs;                // 2N x k
  CVec coef;
};

TailData tail_expansion(const CMat& Ginf, const CVec& wL) {
  Eigen::ComplexEigenSolver<CMat> es(Ginf);
  std::vector<int> idx;
  for (int i = 0; i < Ginf.rows(); ++i)
    if (es.eigenvalues()(i).real() < 0) idx.push_back(i);
  TailData t;
  t.mu.resize(idx.size());
  t.vecs.resize(Ginf.rows(), idx.size());
  for (size_t c = 0; c < idx.size(); ++c) {
    t.mu(c) = es.eigenvalues()(idx[c]);
    t.vecs.col(c) = es.eigenvectors().col(idx[c]);
  }
  // least-squares fit of the boundary value in the stable basis
  t.coef = t.vecs.colPivHouseholderQr().solve(wL);
  return t;
}

// integral over [L, inf) of |rows . sum_j coef_j e^{mu_j (x-L)} v_j|^2
double tail_l2sq_rows(const TailData& t, int row0, int nrows) {
  double s = 0.0;
  for (int j = 0; j < t.mu.size(); ++j)
    for (int k = 0; k < t.mu.size(); ++k) {
      const Complex inner =
          (t.vecs.block(row0, j, nrows, 1).adjoint() *
           t.vecs.block(row0, k, nrows, 1))(0, 0);
      const Complex denom = std::conj(t.mu(j)) + t.mu(k);
      s += std::real(std::conj(t.coef(j)) * t.coef(k) * inner / (-denom));
    }
  return std::max(0.0, s);
}

double tail_l1_rows(const TailData& t, int row0, int nrows) {
  // quadrature with the analytic expansion; slowest rate sets the window
  double rmin = 1e300;
  for (int j = 0; j < t.mu.size(); ++j)
    rmin = std::min(rmin, -t.mu(j).real());
  if (!(rmin > 0)) return 0.0;
  const double T = 40.0 / rmin;
  const int nq = 400;
  double s = 0.0, prev = -1.0;
  for (int q = 0; q <= nq; ++q) {
    const double z = T * q / nq;
    CVec val = CVec::Zero(nrows);
    for (int j = 0; j < t.mu.size(); ++j)
      val += t.coef(j) * std::exp(t.mu(j) * z) *
             t.vecs.block(row0, j, nrows, 1);
    const double cur = val.norm();
    if (prev >= 0) s += 0.5 * (prev + cur) * (T / nq);
    prev = cur;
  }
  return s;
}

}  // namespace

ResolventSolution solve_resolvent(const SystemModel& model,
                                  const ShockProfile& profile,
                                  const Frequency& freq,
                                  const ForcingSpec& forcing, int beta,
                                  const ResolventOptions& opt) {
  if (beta == 1 && !std::isfinite(forcing.dx_l1))
    throw EvaluatorDomain("beta=1 needs a differentiable forcing");
  FirstOrderSymbol sym(model, profile, freq);
  const int N = sym.N(), n = model.n;
  const double L = profile.L;

  // coefficient convergence at the truncation
  {
    const double gap = (sym.G(L) - sym.G_limit(+1)).norm() +
                       (sym.G(-L) - sym.G_limit(-1)).norm();
    if (gap > opt.coeff_convergence_tol *
                  std::max(1.0, sym.G_limit(+1).norm()))
      throw TruncationTooSmall("coefficient gap " + std::to_string(gap) +
                               " at x = +-L");
  }

  const CMat Ginf = sym.G_doubled_limit();
  const CMat qs = invariant_frame(Ginf, true);
  if (qs.cols() != N)
    throw SplittingLost("doubled stable dimension " +
                        std::to_string(qs.cols()) + " != N");
  // rows annihilating the stable subspace: orthogonal complement
  CMat qc;
  {
    Eigen::HouseholderQR<CMat> qr(qs);
    const CMat qfull = qr.householderQ();
    qc = qfull.rightCols(2 * N - qs.cols());
  }

  auto rhs_at = [&](double x) -> CVec {
    const Vec fpl = (beta == 0) ? forcing.f(x) : forcing.df(x);
    const Vec fmi = (beta == 0) ? forcing.f(-x) : forcing.df(-x);
    CVec g = CVec::Zero(2 * N);
    g.head(N) = sym.forcing_map(x) * fpl.cast<Complex>();
    g.tail(N) = -(sym.forcing_map(-x) * fmi.cast<Complex>());
    return g;
  };

  ResolventOptions optl = opt;
  optl.bvp.output_spacing = std::min(
      {opt.bvp.output_spacing, 0.0125, forcing.feature_width / 8.0});

  BvpProblem pb;
  pb.a = 0.0;
  pb.b = L;
  pb.A = [&](double x) { return sym.G_doubled(x); };
  pb.g = rhs_at;
  pb.Ba = CMat::Zero(N, 2 * N);
  pb.Ba.leftCols(N) = CMat::Identity(N, N);
  pb.Ba.rightCols(N) = -CMat::Identity(N, N);
  pb.beta_a = CVec::Zero(N);
  pb.Bb = qc.adjoint();
  pb.beta_b = CVec::Zero(N);

  const BvpSolution bs = solve_linear_bvp(pb, optl.bvp);

  ResolventSolution sol;
  sol.freq = freq;
  sol.beta = beta;
  sol.rcond = bs.rcond;
  sol.f_l1 = forcing.l1;
  sol.f_linf = forcing.linf;
  sol.fx_l1 = forcing.dx_l1;
  sol.xd = bs.x;
  sol.W = bs.u;
  sol.Fd.reserve(bs.x.size());
  for (double x : bs.x) sol.Fd.push_back(rhs_at(x));

  // unfold to [-L, L]
  const int md = static_cast<int>(bs.x.size());
  sol.x.resize(2 * md - 1);
  sol.U.resize(2 * md - 1);
  sol.Ux.resize(2 * md - 1);
  for (int i = 0; i < md; ++i) {
    // +x from W_plus, -x from W_minus; derivative rows are the first n of W'
    const CVec w = bs.u[i];
    const CVec dw = bs.du[i];
    sol.x[md - 1 + i] = bs.x[i];
    sol.U[md - 1 + i] = w.head(n);
    sol.Ux[md - 1 + i] = dw.head(n);
    sol.x[md - 1 - i] = -bs.x[i];
    sol.U[md - 1 - i] = w.segment(N, n);
    // d/dx U(-x) = -(d/dx W_minus rows)
    sol.Ux[md - 1 - i] = -dw.segment(N, n);
  }

  // norms with the analytic tail beyond [−L, L]
  {
    std::vector<double> absu(sol.x.size()), absu2(sol.x.size()),
        absux(sol.x.size()), absux2(sol.x.size());
    for (size_t i = 0; i < sol.x.size(); ++i) {
      absu[i] = sol.U[i].norm();
      absu2[i] = absu[i] * absu[i];
      absux[i] = sol.Ux[i].norm();
      absux2[i] = absux[i] * absux[i];
    }
    sol.norm_linf = *std::max_element(absu.begin(), absu.end());
    sol.ux_linf = *std::max_element(absux.begin(), absux.end());
    double l2sq = trapezoid(sol.x, absu2);
    double uxl2sq = trapezoid(sol.x, absux2);
    sol.norm_l1 = trapezoid(sol.x, absu);
    sol.ux_l1 = trapezoid(sol.x, absux);

    const TailData t = tail_expansion(Ginf, bs.u.back());
    const double tp = tail_l2sq_rows(t, 0, n);
    const double tm = tail_l2sq_rows(t, N, n);
    sol.tail_l2 = std::sqrt(tp + tm);
    l2sq += tp + tm;
    sol.norm_l1 += tail_l1_rows(t, 0, n) + tail_l1_rows(t, N, n);
    sol.norm_l2 = std::sqrt(l2sq);
    sol.ux_l2 = std::sqrt(uxl2sq);
  }

  if (opt.check_residual) {
    // residual of the second-order equation evaluated on stored nodes
    // (U and U' are exact there; the only numerical derivative is the
    // fourth-order stencil on B11 U' - A1 U and on B^{1k} U)
    const Complex I(0, 1);
    double worst = 0.0;
    const int mtot = static_cast<int>(sol.x.size());
    auto Q = [&](int i) -> CVec {
      const auto c = sym.coeffs_at(sol.x[i]);
      return c.B[0][0].cast<Complex>() * sol.Ux[i] -
             c.A1.cast<Complex>() * sol.U[i];
    };
    const int stride = std::max(
        1, static_cast<int>(std::lround(0.37 / (sol.x[1] - sol.x[0]))));
    for (int i = 2; i + 2 < mtot; i += stride) {
      if (std::abs(sol.x[i]) > 0.6 * L) continue;
      // uniform five-point neighbourhood required
      const double hh = sol.x[i + 1] - sol.x[i];
      bool uniform = true;
      for (int s = -2; s < 2; ++s)
        if (std::abs(sol.x[i + s + 1] - sol.x[i + s] - hh) > 1e-10)
          uniform = false;
      if (!uniform) continue;
      const auto c = sym.coeffs_at(sol.x[i]);
      const CVec u = sol.U[i];
      const CVec du = sol.Ux[i];
      const CVec dq =
          (-Q(i + 2) + 8.0 * Q(i + 1) - 8.0 * Q(i - 1) + Q(i - 2)) / (12 * hh);
      CVec res = dq - freq.lambda * u;
      for (int j = 1; j < model.d; ++j) {
        res -= I * freq.xi_tilde(j - 1) * (c.Aj[j - 1].cast<Complex>() * u);
        res += I * freq.xi_tilde(j - 1) * (c.B[j][0].cast<Complex>() * du);
      }
      for (int k = 1; k < model.d; ++k) {
        auto bu = [&](int q) -> CVec {
          return sym.coeffs_at(sol.x[q]).B[0][k].cast<Complex>() * sol.U[q];
        };
        const CVec dbu = (-bu(i + 2) + 8.0 * bu(i + 1) - 8.0 * bu(i - 1) +
                          bu(i - 2)) /
                         (12 * hh);
        res += I * freq.xi_tilde(k - 1) * dbu;
      }
      for (int j = 1; j < model.d; ++j)
        for (int k = 1; k < model.d; ++k)
          res -= freq.xi_tilde(j - 1) * freq.xi_tilde(k - 1) *
                 (c.B[j][k].cast<Complex>() * u);
      const Vec fr = (beta == 0) ? forcing.f(sol.x[i]) : forcing.df(sol.x[i]);
      res -= fr.cast<Complex>();
      worst = std::max(worst, res.norm());
    }
    sol.residual = worst;
    double scale = 1.0 + sol.f_l1 + sol.f_linf;
    if (beta == 1) scale += sol.fx_l1 + sol.f_linf / forcing.feature_width;
    if (worst > opt.residual_tol * scale)
      throw Error("resolvent residual " + std::to_string(worst) +
                  " exceeds tolerance");
  }
  return sol;
}

// ---- scans --------------------------------------------------------------

std::vector<Vec> default_scan_directions(int d) {
  std::vector<Vec> dirs;
  if (d == 1) {
    Vec v(1);
    v << 1.0;
    dirs.push_back(v);
    v << -1.0;
    dirs.push_back(v);
    return dirs;
  }
  // (xi-direction magnitude, k) mixes
  for (double ang : {0.15, 0.75, 1.35}) {
    Vec v = Vec::Zero(d);
    v(0) = std::cos(ang);
    v(d - 1) = std::sin(ang);
    dirs.push_back(v);
  }
  return dirs;
}

namespace {

ScanReport run_scaling_scan(const SystemModel& model,
                            const ShockProfile& profile, const ShockClass& cls,
                            std::vector<Vec> dirs,
                            const std::vector<double>& rho_grid, int beta,
                            double p, const std::vector<ForcingSpec>& family,
                            const ScanOptions& opt, bool weak_norm,
                            const GlancingReport* glancing) {
  ScanReport rep;
  rep.name = weak_norm ? "resolvent-weak" : "resolvent";
  if (dirs.empty()) dirs = default_scan_directions(model.d);

  const int npts = static_cast<int>(rho_grid.size());
  std::vector<double> ratio(npts, 0.0);
  std::vector<std::vector<std::vector<double>>> rows(npts);
  std::vector<std::string> errors(npts);

  parallel_for(npts, opt.jobs, [&](int i) {
    const double rho_nom = rho_grid[i];
    for (const Vec& dir : dirs) {
      double theta1 = opt.theta1;
      for (int attempt = 0;; ++attempt) {
        ContourPoint cp;
        cp.theta1 = theta1;
        cp.xi_tilde = rho_nom * dir.head(model.d - 1);
        cp.k = rho_nom * dir(model.d - 1);
        const Frequency f = cp.frequency();
        try {
          for (const auto& fs : family) {
            if (beta == 1 && !std::isfinite(fs.dx_l1)) continue;
            ResolventOptions ro = opt.solver;
            ro.theta1 = theta1;
            const ResolventSolution sol =
                solve_resolvent(model, profile, f, fs, beta, ro);
            const double den = weak_norm ? (fs.l1 + fs.dx_l1) : fs.l1;
            double g2 = 1.0;
            if (glancing)
              g2 = glancing->gamma2(f.xi_tilde, f.lambda, f.rho);
            const double rr = sol.norm_lp(p) / (den * g2);
            ratio[i] = std::max(ratio[i], rr);
            rows[i].push_back({f.xi_tilde.size() ? f.xi_tilde(0) : 0.0, cp.k,
                               f.rho, f.lambda.real(), f.lambda.imag(),
                               sol.norm_lp(p), fs.l1, rr, g2});
          }
          break;
        } catch (const SplittingLost&) {
          if (attempt >= 4) throw;
          theta1 *= 0.5;  // contour too steep for the splitting margin
        }
      }
    }
  });

  rep.rho = rho_grid;
  rep.ratio = ratio;
  for (auto& r : rows)
    for (auto& line : r) rep.rows.push_back(line);
  rep.fit = fit_loglog(rep.rho, rep.ratio);
  const int alpha = cls.alpha;
  rep.predicted_exponent =
      glancing ? (beta - 1.0) : (-1.5 + (1.0 - alpha) * beta);
  rep.tolerance = opt.pass_tolerance;
  const double decades =
      std::log10(*std::max_element(rho_grid.begin(), rho_grid.end()) /
                 *std::min_element(rho_grid.begin(), rho_grid.end()));
  if (npts < 12 || decades < 1.5 - 1e-9) {
    rep.verdict = Verdict::Inconclusive;
    rep.note = "fit window: need >= 12 points over >= 1.5 decades";
  } else {
    rep.verdict = rep.fit.slope >= rep.predicted_exponent - rep.tolerance
                      ? Verdict::Pass
                      : Verdict::Fail;
  }
  return rep;
}

}  // namespace

ScanReport scaling_scan(const SystemModel& model, const ShockProfile& profile,
                        const ShockClass& cls, const std::vector<Vec>& dirs,
                        const std::vector<double>& rho_grid, int beta, double p,
                        const std::vector<ForcingSpec>& family,
                        const ScanOptions& opt) {
  return run_scaling_scan(model, profile, cls, dirs, rho_grid, beta, p, family,
                          opt, false, nullptr);
}

ScanReport scaling_scan_weak_norm(const SystemModel& model,
                                  const ShockProfile& profile,
                                  const ShockClass& cls,
                                  const std::vector<Vec>& dirs,
                                  const std::vector<double>& rho_grid, int beta,
                                  double p,
                                  const std::vector<ForcingSpec>& family,
                                  const ScanOptions& opt) {
  return run_scaling_scan(model, profile, cls, dirs, rho_grid, beta, p, family,
                          opt, true, nullptr);
}

// ---- block transform and the two-sided estimate -------------------------

BlockTransformed block_transform(const FirstOrderSymbol& sym,
                                 const Conjugator& conj,
                                 const ResolventSolution& sol) {
  const int n = sym.n();
  BlockTransformed bt;
  bt.split = FirstOrderSymbol::block_split(sym.G_doubled_limit(), 2 * n);
  Eigen::JacobiSVD<CMat> svd(bt.split.V);
  bt.cond_V =
      svd.singularValues().maxCoeff() / svd.singularValues().minCoeff();
  bt.max_phi_correction = conj.max_correction;
  const int nH = bt.split.nH, nPp = bt.split.nPp, nPm = bt.split.nPm;
  bt.x = sol.xd;
  for (size_t i = 0; i < sol.xd.size(); ++i) {
    const CMat pin = conj.inv_at(sol.xd[i]);
    const CVec z = bt.split.Vinv * (pin * sol.W[i]);
    const CVec fz = bt.split.Vinv * (pin * sol.Fd[i]);
    bt.uH.push_back(z.head(nH));
    bt.uPp.push_back(z.segment(nH, nPp));
    bt.uPm.push_back(z.tail(nPm));
    bt.fH.push_back(fz.head(nH));
    bt.fPp.push_back(fz.segment(nH, nPp));
    bt.fPm.push_back(fz.tail(nPm));
  }
  return bt;
}

namespace {

double l2sq_of(const std::vector<double>& x, const std::vector<CVec>& v) {
  std::vector<double> a(v.size());
  for (size_t i = 0; i < v.size(); ++i) a[i] = v[i].squaredNorm();
  return trapezoid(x, a);
}

double pairing_of(const std::vector<double>& x, const std::vector<CVec>& f,
                  const std::vector<CVec>& u) {
  std::vector<double> a(u.size());
  for (size_t i = 0; i < u.size(); ++i) a[i] = f[i].norm() * u[i].norm();
  return trapezoid(x, a);
}

}  // namespace

MaxEstimateReport verify_max_estimate(const SystemModel& model,
                                      const ShockProfile& profile,
                                      const std::vector<ContourPoint>& points,
                                      const std::vector<ForcingSpec>& family,
                                      const ScanOptions& opt) {
  MaxEstimateReport rep;
  rep.points = static_cast<int>(points.size());
  std::vector<std::vector<double>> rows(points.size() * family.size());
  std::vector<double> ratios(points.size() * family.size(), 0.0);

  parallel_for(static_cast<int>(points.size()), opt.jobs, [&](int ip) {
    const ContourPoint& cp = points[ip];
    const Frequency f = cp.frequency();
    FirstOrderSymbol sym(model, profile, f);
    const Conjugator conj = compute_conjugator(sym);
    for (size_t jf = 0; jf < family.size(); ++jf) {
      const ResolventSolution sol =
          solve_resolvent(model, profile, f, family[jf], 0, opt.solver);
      const BlockTransformed bt = block_transform(sym, conj, sol);
      const double rho = f.rho, gamma = f.gamma();
      const double uh2 = l2sq_of(bt.x, bt.uH);
      const double upp2 = l2sq_of(bt.x, bt.uPp);
      const double upm2 = l2sq_of(bt.x, bt.uPm);
      const double lhs = (gamma + rho * rho) * uh2 + upp2 +
                         rho * rho * upm2 + bt.uH.front().squaredNorm() +
                         bt.uPp.front().squaredNorm() +
                         rho * rho * bt.uPm.front().squaredNorm();
      const double rhs = pairing_of(bt.x, bt.fPp, bt.uPp) +
                         rho * rho * pairing_of(bt.x, bt.fPm, bt.uPm) +
                         pairing_of(bt.x, bt.fH, bt.uH);
      const size_t slot = ip * family.size() + jf;
      if (rhs > 1e-300) {
        ratios[slot] = lhs / rhs;
        rows[slot] = {f.xi_tilde.size() ? f.xi_tilde(0) : 0.0,
                      cp.k,
                      rho,
                      lhs,
                      rhs,
                      lhs / rhs};
      }
    }
  });
  for (size_t i = 0; i < ratios.size(); ++i) {
    if (rows[i].empty()) continue;
    rep.ratios.push_back(ratios[i]);
    rep.rows.push_back(rows[i]);
    rep.sup_ratio = std::max(rep.sup_ratio, ratios[i]);
    ++rep.solves;
  }
  return rep;
}

// ---- auxiliary problem ---------------------------------------------------

AuxiliaryReport auxiliary_solve(const SystemModel& model,
                                const ShockProfile& profile, double lambda0,
                                const ForcingSpec& f, double p,
                                const ResolventOptions& opt) {
  Vec xi(model.d - 1);
  xi.setZero();
  const Frequency freq(xi, Complex(lambda0, 0.0));
  const ResolventSolution sol =
      solve_resolvent(model, profile, freq, f, 1, opt);
  AuxiliaryReport rep;
  rep.lambda0 = lambda0;
  rep.c_v = sol.norm_lp(p) / (f.l1 + f.linf);
  const double fx_p = std::isinf(p) ? f.linf * 2.0 : f.dx_l1;  // coarse |f_x|_p
  rep.c_vx = sol.ux_lp(p) / (f.l1 + f.linf + fx_p);
  rep.green_ratio = (sol.norm_lp(p) + sol.ux_lp(p)) / f.l1;
  return rep;
}

ScanReport auxiliary_scan(const SystemModel& model, const ShockProfile& profile,
                          const std::vector<double>& rho_grid,
                          const ForcingSpec& f, double p, int alpha,
                          const ScanOptions& opt) {
  ScanReport rep;
  rep.name = "auxiliary";
  rep.rho = rho_grid;
  rep.ratio.assign(rho_grid.size(), 0.0);
  parallel_for(static_cast<int>(rho_grid.size()), opt.jobs, [&](int i) {
    const AuxiliaryReport ar =
        auxiliary_solve(model, profile, rho_grid[i], f, p, opt.solver);
    rep.ratio[i] = ar.green_ratio;
  });
  rep.fit = fit_loglog(rep.rho, rep.ratio);
  rep.predicted_exponent = -alpha;
  rep.tolerance = 0.1;
  rep.verdict = rep.fit.slope >= -alpha - rep.tolerance ? Verdict::Pass
                                                        : Verdict::Fail;
  return rep;
}

// ---- H5 resolvent scan ----------------------------------------------------

ScanReport h5_resolvent_scan(const SystemModel& model,
                             const ShockProfile& profile,
                             const GlancingReport& glancing, const Vec& xi_dir,
                             const std::vector<double>& rho_grid, int beta,
                             double p, const std::vector<ForcingSpec>& family,
                             const ScanOptions& opt, H5BlockChecks* blocks) {
  const ShockClass cls = ShockClass{};  // alpha unused on this route
  std::vector<Vec> dirs{xi_dir};
  ScanReport rep = run_scaling_scan(model, profile, cls, dirs, rho_grid, beta,
                                    p, family, opt, false, &glancing);
  rep.name = "h5-resolvent";

  if (blocks) {
    // per-block energy inequalities at a mid-grid point
    const double rho = rho_grid[rho_grid.size() / 2];
    ContourPoint cp;
    cp.theta1 = opt.theta1;
    cp.xi_tilde = rho * xi_dir.head(model.d - 1);
    cp.k = rho * xi_dir(model.d - 1);
    const Frequency f = cp.frequency();
    FirstOrderSymbol sym(model, profile, f);
    const Conjugator conj = compute_conjugator(sym);
    const ResolventSolution sol =
        solve_resolvent(model, profile, f, family.front(), 0, opt.solver);
    const BlockTransformed bt = block_transform(sym, conj, sol);

    // diagonal modes of the H block: theta from the mode's own decay rate
    const int nH = bt.split.nH;
    const double g1 = glancing.gamma1(f.xi_tilde, f.lambda, f.rho);
    for (int m2 = 0; m2 < nH; ++m2) {
      const Complex mu = bt.split.eig(m2);
      double theta_blk;
      const double are = std::abs(mu.real());
      if (are >= 0.3 * rho)
        theta_blk = rho;  // elliptic
      else if (model.totally_nonglancing)
        theta_blk = rho * rho;  // declared totally nonglancing
      else
        theta_blk = std::max(rho * rho, are);  // hyperbolic / glancing
      std::vector<double> comp2(bt.x.size());
      double cinf = 0.0;
      for (size_t i = 0; i < bt.x.size(); ++i) {
        const double a = std::abs(bt.uH[i](m2));
        comp2[i] = a * a;
        cinf = std::max(cinf, a);
      }
      std::vector<double> fl(bt.x.size());
      for (size_t i = 0; i < bt.x.size(); ++i) fl[i] = std::abs(bt.fH[i](m2));
      const double f1 = trapezoid(bt.x, fl);
      const double lhs = cinf * cinf + theta_blk * trapezoid(bt.x, comp2);
      const double bdry =
          (mu.real() < 0) ? std::norm(bt.uH.front()(m2)) : 0.0;
      const double c = lhs / std::max(1e-300, f1 * f1 + bdry);
      blocks->max_block_constant = std::max(blocks->max_block_constant, c);
      if (model.totally_nonglancing && are < 0.3 * rho)
        blocks->totally_nonglancing_mode_seen = true;
    }

    // combined boundary lower bound with the gamma1 weight on glancing modes
    {
      const CMat qs = invariant_frame(sym.G_doubled_limit(), true);
      const CMat gam = CMat::Identity(sym.N(), sym.N());
      CMat gmat(sym.N(), 2 * sym.N());
      gmat << gam, -gam;
      double cworst = 0.0;
      for (int trial = 0; trial < 24; ++trial) {
        CVec coef = CVec::Zero(qs.cols());
        for (int q2 = 0; q2 < coef.size(); ++q2)
          coef(q2) = Complex(std::cos(0.7 * (trial + 1) * (q2 + 1)),
                             std::sin(1.3 * (trial + 1) * (q2 + 2)));
        CVec u = qs * coef;
        u /= u.norm();
        const CVec z = bt.split.Vinv * u;
        double weighted = 0.0;
        for (int m2 = 0; m2 < 2 * sym.n(); ++m2) {
          const Complex mu = bt.split.eig(m2);
          if (mu.real() >= 0) continue;  // decaying-part components only
          const double are = std::abs(mu.real());
          const double w =
              (are >= 0.3 * f.rho) ? 1.0 : 1.0 / std::max(1.0, g1);
          weighted += w * std::abs(z(m2));
        }
        for (int m2 = 2 * sym.n(); m2 < 2 * sym.N(); ++m2) {
          if (bt.split.eig(m2).real() >= 0) continue;
          weighted += f.rho * std::abs(z(m2));
        }
        const double gu = (gmat * u).norm();
        if (weighted > 1e-12)
          cworst = std::max(cworst, weighted / std::max(gu, 1e-300));
      }
      blocks->boundary_constant = cworst;
    }
  }
  return rep;
}

}  // namespace shockspec
