#pragma once

#include "shockspec/bvp.hpp"
#include "shockspec/conjugation.hpp"
#include "shockspec/glancing.hpp"
#include "shockspec/hypotheses.hpp"
#include "shockspec/profile.hpp"
#include "shockspec/symbol.hpp"

namespace shockspec {

/// Forcing profile with analytic derivative and precomputed norms.
struct ForcingSpec {
  std::function<Vec(double)> f;
  std::function<Vec(double)> df;
  double l1 = 0.0, linf = 0.0, dx_l1 = 0.0;
  double feature_width = 1.0;  // smallest length scale, sets probe grids
  std::string name;
  int n = 1;
};

ForcingSpec gaussian_forcing(int n, int comp, double center, double width);
ForcingSpec tophat_forcing(int n, int comp, double center, double width);
/// C-infinity bump exp(-1/(1-t^2)) scaled to unit mass.
ForcingSpec mollifier_forcing(int n, int comp, double center, double width);

/// Five bumps of varied center/width approximating the sup over
/// |f|_L1 = 1; beta=1 scans need the smooth-only variant.
std::vector<ForcingSpec> default_forcing_family(int n, bool smooth_only);

struct ResolventOptions {
  double theta1 = 0.05;
  BvpOptions bvp;
  bool check_residual = true;
  double residual_tol = 1e-6;
  double coeff_convergence_tol = 1e-6;  // TruncationTooSmall guard at x=L
};

struct ResolventSolution {
  Frequency freq;
  int beta = 0;

  std::vector<double> x;     // [-L, L]
  std::vector<CVec> U;       // n components
  std::vector<CVec> Ux;

  std::vector<double> xd;    // [0, L] doubled grid
  std::vector<CVec> W;       // 2N doubled states
  std::vector<CVec> Fd;      // doubled forcing as injected

  double norm_l2 = 0, norm_linf = 0, norm_l1 = 0;
  double ux_l2 = 0, ux_linf = 0, ux_l1 = 0;
  double f_l1 = 0, f_linf = 0, fx_l1 = 0;
  double residual = 0;
  double rcond = 1;
  double tail_l2 = 0;        // mass recovered by the analytic tail

  double norm_lp(double p) const;  // p = 2 or inf
  double ux_lp(double p) const;
};

/// Solves (L_xi - lambda) U = d_x^beta f as the doubled first-order BVP
/// with decaying boundary data.  Norms include the constant-coefficient
/// tail beyond the truncation.
ResolventSolution solve_resolvent(const SystemModel& model,
                                  const ShockProfile& profile,
                                  const Frequency& freq,
                                  const ForcingSpec& forcing, int beta,
                                  const ResolventOptions& opt = {});

/// Directions through the origin of the (xi~, k) parameter plane used to
/// place contour points at a given rho.
std::vector<Vec> default_scan_directions(int d);

struct ScanOptions {
  double theta1 = 0.05;
  int jobs = 1;
  double pass_tolerance = 0.15;
  ResolventOptions solver;
};

/// Fitted exponent of max_f |U|_Lp / |f|_L1 against rho on the contour;
/// passes when the slope clears -3/2 + (1-alpha) beta - tol.
ScanReport scaling_scan(const SystemModel& model, const ShockProfile& profile,
                        const ShockClass& cls, const std::vector<Vec>& dirs,
                        const std::vector<double>& rho_grid, int beta, double p,
                        const std::vector<ForcingSpec>& family,
                        const ScanOptions& opt = {});

/// Same scan with the weaker denominator |f|_L1 + |f_x|_L1.
ScanReport scaling_scan_weak_norm(const SystemModel& model,
                                  const ShockProfile& profile,
                                  const ShockClass& cls,
                                  const std::vector<Vec>& dirs,
                                  const std::vector<double>& rho_grid, int beta,
                                  double p,
                                  const std::vector<ForcingSpec>& family,
                                  const ScanOptions& opt = {});

// ---- block structure -------------------------------------------------

struct BlockTransformed {
  std::vector<double> x;
  std::vector<CVec> uH, uPp, uPm;
  std::vector<CVec> fH, fPp, fPm;
  double cond_V = 1.0;
  double max_phi_correction = 0.0;
  BlockSplit split;
};

/// Conjugates a doubled resolvent solution into the H / P+ / P- block
/// coordinates of the limit matrix.
BlockTransformed block_transform(const FirstOrderSymbol& sym,
                                 const Conjugator& conj,
                                 const ResolventSolution& sol);

struct MaxEstimateReport {
  double sup_ratio = 0.0;
  int points = 0, solves = 0;
  std::vector<double> ratios;
  std::vector<std::vector<double>> rows;  // xi,k,rho,lhs,rhs,ratio
};

/// Weighted two-sided energy balance on the contour: LHS collects the
/// rho-weighted block norms and boundary values, RHS the forcing pairings.
MaxEstimateReport verify_max_estimate(const SystemModel& model,
                                      const ShockProfile& profile,
                                      const std::vector<ContourPoint>& points,
                                      const std::vector<ForcingSpec>& family,
                                      const ScanOptions& opt = {});

// ---- auxiliary whole-line problem -------------------------------------

struct AuxiliaryReport {
  double lambda0 = 0.0;
  double c_v = 0.0;    // |V|_p / (|f|_L1 + |f|_Linf)
  double c_vx = 0.0;   // |V_x|_p / (|f|_L1 + |f|_Linf + |f_x|_Lp)
  double green_ratio = 0.0;  // (|V|_p + |V_x|_p) / |f|_L1
};

/// (L_0 - lambda0) V = d_x f on the whole line at xi~ = 0.
AuxiliaryReport auxiliary_solve(const SystemModel& model,
                                const ShockProfile& profile, double lambda0,
                                const ForcingSpec& f, double p,
                                const ResolventOptions& opt = {});

/// rho-scan of the auxiliary bound (|V|+|V_x|)/|f|_L1 <= C rho^-alpha.
ScanReport auxiliary_scan(const SystemModel& model, const ShockProfile& profile,
                          const std::vector<double>& rho_grid,
                          const ForcingSpec& f, double p, int alpha,
                          const ScanOptions& opt = {});

// ---- H5-case resolvent scan -------------------------------------------

struct H5BlockChecks {
  double max_block_constant = 0.0;   // Lemma-type per-block energy constant
  double boundary_constant = 0.0;    // combined gamma1-weighted lower bound
  bool totally_nonglancing_mode_seen = false;
};

ScanReport h5_resolvent_scan(const SystemModel& model,
                             const ShockProfile& profile,
                             const GlancingReport& glancing, const Vec& xi_dir,
                             const std::vector<double>& rho_grid, int beta,
                             double p, const std::vector<ForcingSpec>& family,
                             const ScanOptions& opt = {},
                             H5BlockChecks* blocks = nullptr);

}  // namespace shockspec
