#pragma once

#include <optional>

#include "shockspec/subspace.hpp"

namespace shockspec {

struct EvansValue {
  Complex value;          // determinant of the orthonormalized frames at x=0
  double scale_log = 0.0; // real log of the accumulated QR scalings
  Frequency frequency;

  /// log of the unnormalized determinant (value * exp(scale_log))
  Complex log_total() const { return std::log(value) + scale_log; }
  double abs_normalized() const { return std::abs(value); }
};

struct EvansOptions {
  double renorm_interval = 1.0;  // QR pull spacing along x
  double ode_rtol = 1e-11;
  double ode_atol = 1e-13;
  double zero_floor = 1e-10;     // |D| below this counts as a zero
};

/// Evans determinant at one frequency.  If `frames` is provided (stable at
/// +inf, unstable at -inf, e.g. from a FrameContinuation along a path), the
/// value is phase-coherent with neighbouring evaluations.
EvansValue evans(const SystemModel& model, const ShockProfile& profile,
                 const Frequency& freq, const EvansOptions& opt = {},
                 const CMat* frame_plus = nullptr,
                 const CMat* frame_minus = nullptr);

/// Evans determinant of the doubled boundary problem,
/// D  = det(ker Gamma, E_-)|_{x=0}, integrated on the doubled system.
/// Satisfies D_doubled = (-1)^N D_L for the matched frame choices.
EvansValue doubled_evans(const SystemModel& model, const ShockProfile& profile,
                         const Frequency& freq, const TangentFields& tf,
                         const EvansOptions& opt = {});

/// W-coordinates (phi, (B^{11} phi')_II) of a tangent field at x.
CVec tangent_w_vector(const SystemModel& model, const ShockProfile& profile,
                      const TangentFields& tf, int j, double x);

/// Carries a frame of solutions from x = side*L to x = 0 with periodic
/// QR renormalization; the accumulated log-scale lands in scale_log.
CMat carry_frame_to_zero(const FirstOrderSymbol& sym, int side,
                         const CMat& frame, const EvansOptions& opt,
                         double* scale_log);

struct VanishingOrder {
  double slope = 0.0;      // raw log-log slope of |D| vs rho
  int order = 0;           // rounded order (valid when conclusive)
  double fit_residual = 0.0;
  bool conclusive = false;
  std::vector<double> rho, absd;
};

/// Order of the zero of D along the ray zeta = rho * zeta_hat at rho -> 0.
/// zeta_hat packs (xi_hat, Re lambda_hat, Im lambda_hat).
VanishingOrder vanishing_order(const SystemModel& model,
                               const ShockProfile& profile, const Vec& zeta_hat,
                               const std::vector<double>& rho_list,
                               const EvansOptions& opt = {});

struct WindingOptions {
  double R = 4.0;
  double rho0 = 1e-2;
  double floor = 1e-8;
  int initial_points = 64;
  double max_arg_step = 0.5;  // radians between consecutive samples
  EvansOptions evans;
};

struct WindingResult {
  int winding = 0;
  double min_abs_d = 0.0;
  int evaluations = 0;
  double closure_defect = 0.0;  // |total/2pi - winding|
};

/// Winding of arg D along the boundary of {Re l >= 0, rho0 <= |l| <= R}
/// at fixed xi~; 0 certifies absence of zeros in the region.
WindingResult winding_number(const SystemModel& model,
                             const ShockProfile& profile, const Vec& xi_tilde,
                             const WindingOptions& opt = {});

}  // namespace shockspec
