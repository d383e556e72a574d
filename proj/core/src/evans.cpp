#include "shockspec/evans.hpp"

#include <cmath>

#include "shockspec/errors.hpp"
#include "shockspec/ode.hpp"
#include "shockspec/util.hpp"

namespace shockspec {

namespace {

// marches a frame along W' = G(x) W with periodic QR pulls; returns the
// orthonormalized frame at x1 and accumulates log det R (real, R diagonal
// positive by the phase fix in the QR)
CMat march_frame(const std::function<CMat(double)>& G, CMat frame, double x0,
                 double x1, const EvansOptions& opt, double* scale_log) {
  double x = x0;
  const double dir = x1 > x0 ? 1.0 : -1.0;
  auto pull = [&](CMat& y) {
    Eigen::HouseholderQR<CMat> qr(y);
    CMat q = CMat(qr.householderQ()).leftCols(y.cols());
    CMat rfac = q.adjoint() * y;
    double slog = 0.0;
    for (int i = 0; i < q.cols(); ++i) {
      const Complex rd = rfac(i, i);
      const double a = std::abs(rd);
      if (a <= 0.0 || !std::isfinite(a))
        throw StiffnessOverflow("renormalization underflow at x=" +
                                std::to_string(x));
      q.col(i) *= rd / a;
      slog += std::log(a);
    }
    y = q;
    return slog;
  };
  while (dir * (x1 - x) > 1e-14) {
    const double xn = dir > 0 ? std::min(x + opt.renorm_interval, x1)
                              : std::max(x - opt.renorm_interval, x1);
    frame = integrate_ode<CMat>(
        [&](double xx, const CMat& y) { return CMat(G(xx) * y); }, x, xn, frame,
        OdeOptions{opt.ode_rtol, opt.ode_atol, 1e-3, 1e-14});
    *scale_log += pull(frame);
    x = xn;
  }
  return frame;
}

}  // namespace

CMat carry_frame_to_zero(const FirstOrderSymbol& sym, int side,
                         const CMat& frame, const EvansOptions& opt,
                         double* scale_log) {
  auto Gfn = [&](double x) { return sym.G(x); };
  const double L = sym.profile().L;
  return march_frame(Gfn, frame, side >= 0 ? L : -L, 0.0, opt, scale_log);
}

EvansValue evans(const SystemModel& model, const ShockProfile& profile,
                 const Frequency& freq, const EvansOptions& opt,
                 const CMat* frame_plus, const CMat* frame_minus) {
  FirstOrderSymbol sym(model, profile, freq);
  CMat qp, qm;
  if (frame_plus && frame_minus) {
    qp = *frame_plus;
    qm = *frame_minus;
  } else {
    auto [sp, sm] = limiting_subspaces(sym);
    qp = sp.frame;
    qm = sm.frame;
  }
  const double L = profile.L;
  EvansValue ev;
  ev.frequency = freq;
  double slog = 0.0;
  auto Gfn = [&](double x) { return sym.G(x); };
  const CMat right = march_frame(Gfn, qp, L, 0.0, opt, &slog);
  const CMat left = march_frame(Gfn, qm, -L, 0.0, opt, &slog);
  CMat full(sym.N(), sym.N());
  full << right, left;
  ev.value = full.determinant();
  ev.scale_log = slog;
  return ev;
}

CVec tangent_w_vector(const SystemModel& model, const ShockProfile& profile,
                      const TangentFields& tf, int j, double x) {
  (void)profile;
  const int n = model.n, r = model.r;
  // interpolate phi_j and phi_j' from the tangent grid
  const auto& xs = tf.grid;
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  int i = std::clamp(static_cast<int>(it - xs.begin()) - 1, 0,
                     static_cast<int>(xs.size()) - 2);
  const double t = (x - xs[i]) / (xs[i + 1] - xs[i]);
  const Vec phi = (1 - t) * tf.phi[j].col(i) + t * tf.phi[j].col(i + 1);
  const Vec dphi = (1 - t) * tf.dphi[j].col(i) + t * tf.dphi[j].col(i + 1);
  const Vec u = profile.at(x);
  const Mat b = model.visc(0, 0, u);
  CVec w = CVec::Zero(n + r);
  w.head(n) = phi.cast<Complex>();
  w.tail(r) = (b.bottomRows(r) * dphi).cast<Complex>();
  return w;
}

EvansValue doubled_evans(const SystemModel& model, const ShockProfile& profile,
                         const Frequency& freq, const TangentFields& tf,
                         const EvansOptions& opt) {
  FirstOrderSymbol sym(model, profile, freq);
  auto [sp, sm] = limiting_subspaces(sym);
  const int N = sym.N();
  const int k = sp.dim();
  const double L = profile.L;

  // initial doubled frame [[Q+, 0], [0, Q-]] at x = L
  CMat f0 = CMat::Zero(2 * N, N);
  f0.topLeftCorner(N, k) = sp.frame;
  f0.bottomRightCorner(N, N - k) = sm.frame;

  EvansValue ev;
  ev.frequency = freq;
  double slog = 0.0;
  auto Gd = [&](double x) { return sym.G_doubled(x); };
  const CMat e_minus = march_frame(Gd, f0, L, 0.0, opt, &slog);

  // ker Gamma basis (e_j; e_j), e_1..e_l from the tangent fields at x=0,
  // completed to an orthonormal basis with det E = (-1)^{N-k}
  CMat E = CMat::Zero(N, N);
  int col = 0;
  for (int j = 0; j < tf.l && col < N; ++j, ++col) {
    CVec w = tangent_w_vector(model, profile, tf, j, 0.0);
    for (int c = 0; c < col; ++c) w -= E.col(c) * (E.col(c).adjoint() * w);
    E.col(col) = w.normalized();
  }
  for (int b = 0; b < N && col < N; ++b) {
    CVec w = CVec::Zero(N);
    w(b) = 1.0;
    for (int c = 0; c < col; ++c) w -= E.col(c) * (E.col(c).adjoint() * w);
    if (w.norm() < 1e-8) continue;
    E.col(col++) = w.normalized();
  }
  if (col != N) throw Error("doubled_evans: basis completion failed");
  {
    const Complex det = E.determinant();
    const double want = (N - k) % 2 == 0 ? 1.0 : -1.0;
    E.col(N - 1) *= want / det;  // |det E| = 1, so this is a phase fix
  }

  CMat M(2 * N, 2 * N);
  M.topLeftCorner(N, N) = E;
  M.bottomLeftCorner(N, N) = E;
  M.rightCols(N) = e_minus;
  ev.value = M.determinant();
  ev.scale_log = slog;
  return ev;
}

VanishingOrder vanishing_order(const SystemModel& model,
                               const ShockProfile& profile, const Vec& zeta_hat,
                               const std::vector<double>& rho_list,
                               const EvansOptions& opt) {
  VanishingOrder out;
  if (rho_list.size() < 2) return out;
  std::vector<double> rhos = rho_list;
  std::sort(rhos.begin(), rhos.end(), std::greater<double>());
  const int dxi = static_cast<int>(zeta_hat.size()) - 2;
  auto freq_at = [&](double rho) {
    Vec xi = rho * zeta_hat.head(dxi);
    Complex lam(rho * zeta_hat(dxi), rho * zeta_hat(dxi + 1));
    return Frequency(xi, lam);
  };

  // transported frames down the ray keep the determinant comparable
  FirstOrderSymbol sym0(model, profile, freq_at(rhos.front()));
  FrameContinuation cp(
      [&](const Frequency& f) { return sym0.with_frequency(f).G_limit(+1); },
      true, freq_at(rhos.front()));
  FrameContinuation cm(
      [&](const Frequency& f) { return sym0.with_frequency(f).G_limit(-1); },
      false, freq_at(rhos.front()));

  for (double rho : rhos) {
    const Frequency f = freq_at(rho);
    cp.step_to(f);
    cm.step_to(f);
    const CMat fp = cp.frame(), fm = cm.frame();
    const EvansValue ev = evans(model, profile, f, opt, &fp, &fm);
    out.rho.push_back(rho);
    out.absd.push_back(ev.abs_normalized());
  }
  const LinearFit fit = fit_loglog(out.rho, out.absd);
  out.slope = fit.slope;
  out.fit_residual = fit.residual;
  out.order = static_cast<int>(std::lround(fit.slope));
  const double decades =
      std::log10(rhos.front() / rhos.back());
  out.conclusive = fit.residual < 0.1 && decades >= 1.5 - 1e-9;
  return out;
}

WindingResult winding_number(const SystemModel& model,
                             const ShockProfile& profile, const Vec& xi_tilde,
                             const WindingOptions& opt) {
  // positively oriented boundary of {Re l >= 0, rho0 <= |l| <= R}:
  // outer half-circle, down the imaginary axis, inner half-circle
  // (clockwise), down the negative imaginary axis.
  const double R = opt.R, r0 = opt.rho0;
  auto lambda_at = [&](double t) -> Complex {
    // t in [0,4): one unit per segment
    t = std::fmod(t, 4.0);
    if (t < 1.0) {
      const double th = -M_PI / 2 + M_PI * t;
      return R * Complex(std::cos(th), std::sin(th));
    }
    if (t < 2.0) return Complex(0.0, R + (r0 - R) * (t - 1.0));
    if (t < 3.0) {
      const double th = M_PI / 2 - M_PI * (t - 2.0);
      return r0 * Complex(std::cos(th), std::sin(th));
    }
    return Complex(0.0, -r0 + (r0 - R) * (t - 3.0));
  };

  FirstOrderSymbol sym0(model, profile,
                        Frequency(xi_tilde, lambda_at(0.0)));
  auto limit_p = [&](const Frequency& f) {
    return sym0.with_frequency(f).G_limit(+1);
  };
  auto limit_m = [&](const Frequency& f) {
    return sym0.with_frequency(f).G_limit(-1);
  };
  const Frequency f0(xi_tilde, lambda_at(0.0));
  FrameContinuation cp(limit_p, true, f0);
  FrameContinuation cm(limit_m, false, f0);

  WindingResult res;
  res.min_abs_d = std::numeric_limits<double>::infinity();
  auto eval = [&](double t) {
    const Frequency f(xi_tilde, lambda_at(t));
    try {
      cp.step_to(f);
      cm.step_to(f);
    } catch (const SplittingLost& e) {
      throw ContourTooClose(std::string("splitting lost on the contour: ") +
                            e.what());
    }
    const CMat fp = cp.frame(), fm = cm.frame();
    const EvansValue ev = evans(model, profile, f, opt.evans, &fp, &fm);
    ++res.evaluations;
    res.min_abs_d = std::min(res.min_abs_d, ev.abs_normalized());
    if (ev.abs_normalized() < opt.floor)
      throw ContourTooClose("|D| = " + std::to_string(ev.abs_normalized()) +
                            " at lambda = (" + std::to_string(f.lambda.real()) +
                            "," + std::to_string(f.lambda.imag()) + ")");
    return ev.value;
  };

  // The raw determinant carries fast exponential phase factors, so a large
  // true increment can alias into a small apparent one.  Sample the whole
  // contour at doubling densities until every increment is below
  // max_arg_step and two consecutive levels agree on the total.
  const int max_points = 16384;
  bool have_prev_level = false;
  double prev_total = 0.0;
  for (int npts = std::max(16, opt.initial_points); npts <= max_points;
       npts *= 2) {
    double total = 0.0;
    double max_step = 0.0;
    Complex prev = eval(0.0);
    for (int i = 1; i <= npts; ++i) {
      const Complex cur = eval(4.0 * i / npts);
      const double darg = std::arg(cur / prev);
      max_step = std::max(max_step, std::abs(darg));
      total += darg;
      prev = cur;
    }
    const double w = total / (2 * M_PI);
    if (max_step <= opt.max_arg_step && have_prev_level &&
        std::abs(prev_total - total) < 0.5 &&
        std::abs(w - std::lround(w)) < 0.2) {
      res.winding = static_cast<int>(std::lround(w));
      res.closure_defect = std::abs(w - res.winding);
      return res;
    }
    have_prev_level = max_step <= opt.max_arg_step;
    prev_total = total;
  }
  throw ContourTooClose("phase increments unresolved at max refinement");
}

}  // namespace shockspec
