#pragma once

#include "shockspec/resolvent.hpp"

namespace shockspec {

struct GreenKernelOptions {
  double bump_width = 0.08;  // coarsest width; halved twice for Richardson
  double theta = 0.0;        // 0 => half the profile decay rate
  double alpha_preference_factor = 3.0;
  ResolventOptions solver;
};

struct GreenKernelReport {
  double lambda0 = 0.0;
  double theta = 0.0;
  std::vector<double> xs, ys;
  // kernel[j] holds G(x_i, y_j) as n x n blocks stacked over i
  std::vector<std::vector<CMat>> kernel;
  std::vector<std::vector<CMat>> dy_kernel;
  double C_bound = 0.0;       // |G| <= C [rho^-1 e^{-th|x|} e^{-rho|y|} + e^{-rho|x-y|}]
  double C_dy_alpha0 = 0.0;   // derivative bound constants for both alphas
  double C_dy_alpha1 = 0.0;
  int preferred_alpha = 0;
  double richardson_defect = 0.0;  // relative deviation from the h^2 ratio
};

/// Kernel columns of (lambda0 - L_0) sampled with narrow-bump forcings and
/// Richardson-extrapolated in the bump width.
GreenKernelReport green_kernel_1d(const SystemModel& model,
                                  const ShockProfile& profile, double lambda0,
                                  const std::vector<double>& ys,
                                  const std::vector<double>& xs,
                                  const GreenKernelOptions& opt = {});

}  // namespace shockspec
