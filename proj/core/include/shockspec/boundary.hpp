#pragma once

#include "shockspec/evans.hpp"

namespace shockspec {

struct BoundaryEstimateOptions {
  EvansOptions evans;
  double band_lo = 1e-2, band_hi = 1e-1;  // the [delta, R] constant band
  int lemma_samples = 32;
  double exponent_tol = 0.1;
};

/// Scaling of the matching operator Gamma(W+,W-) = W+ - W- restricted to
/// the decaying-boundary-value subspaces of the doubled problem:
///  - on the paired tangent-field directions |Gamma u| ~ rho (two-sided),
///  - on a complement it stays of order one,
///  - on the full space it is bounded below by rho,
/// plus the combined lower bound delta (|u_H-| + rho |u_P-|).
struct BoundaryEstimateReport {
  std::vector<double> rho;
  std::vector<double> smin_phi, smax_phi, smin_comp, smin_eminus;
  LinearFit fit_phi, fit_comp, fit_eminus;
  double C1 = 0, C2 = 0;   // two-sided constants on the tangent pairs
  double C_R = 0;          // lower constant of |Gamma u| >= C rho on E-
  double C_band = 0;       // uniform constant on the [delta, R] band
  double lemma_delta = 0;  // combined H/P lower bound constant
  Verdict verdict_phi = Verdict::Inconclusive;
  Verdict verdict_comp = Verdict::Inconclusive;
  Verdict verdict_eminus = Verdict::Inconclusive;
};

BoundaryEstimateReport boundary_estimates(const SystemModel& model,
                                          const ShockProfile& profile,
                                          const TangentFields& tf,
                                          const Vec& zeta_hat,
                                          const std::vector<double>& rho_grid,
                                          const BoundaryEstimateOptions& opt = {});

}  // namespace shockspec
