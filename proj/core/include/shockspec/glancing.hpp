#pragma once

#include "shockspec/model.hpp"

namespace shockspec {

struct GlancingPoint {
  Vec xi_tilde;
  double tau = 0.0;
  int multiplicity = 2;  // s_q
  double gap = 0.0;      // residual eigenvalue gap at the located point
  int curve = 0;         // index of the tracked curve
};

/// Branch structure of the interior hyperbolic symbol
///   M(tau, xi~) = (A1~)^{-1} (tau A0~ + sum_{j>=2} xi_j A^j~)
/// at one endstate: tau-locations where eigenvalues genuinely branch,
/// organised into curves tau = eta_q(xi~).
struct GlancingReport {
  int side = +1;  // +1/-1 endstate
  std::vector<GlancingPoint> points;
  int curve_count = 0;
  double coalescence_tol = 1e-8;

  bool empty() const { return points.empty(); }

  /// eta_q(xi~) for each curve, linearly interpolated from the located
  /// points; outside the sampled range the nearest slope is extrapolated.
  std::vector<double> curve_tau(const Vec& xi_tilde) const;

  /// gamma2 = 1 + sum_q [rho^{-1}|Im lambda - eta_q| + rho]^{1/s_q - 1}
  double gamma2(const Vec& xi_tilde, Complex lambda, double rho) const;

  /// gamma1 = max_q [rho^{-1}|Im lambda - eta_q| + rho]^{(1-floor((s+1)/2))/s}
  double gamma1(const Vec& xi_tilde, Complex lambda, double rho) const;
};

struct GlancingScanOptions {
  int tau_samples = 800;
  double tau_max = 6.0;
  // At a square-root branch point the gap scales like sqrt(|tau - eta|),
  // so double precision bottoms out near sqrt(eps) ~ 1e-8; the default
  // acceptance sits one order above that floor.
  double coalescence_tol = 1e-7;
  // eigenvector collapse threshold separating genuine branch points from
  // transversal crossings of distinct analytic eigenvalue branches
  double vec_collapse_tol = 1e-3;
};

/// Locates eigenvalue branch points of the interior symbol at the given
/// endstate over a grid of transverse frequencies.  An empty report is a
/// valid outcome (scalar models cannot branch).
GlancingReport glancing_scan(const SystemModel& model, const Endstates& es,
                             int side, const std::vector<Vec>& xi_grid,
                             const GlancingScanOptions& opt = {});

}  // namespace shockspec
