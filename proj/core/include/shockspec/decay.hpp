#pragma once

#include "shockspec/evolve.hpp"
#include "shockspec/resolvent.hpp"

namespace shockspec {

/// Node of the low-frequency inversion region: transverse wave vector
/// (or radius for the radial reduction), contour parameter k, weight.
struct QuadNode {
  Vec xi_tilde;
  double k = 0.0;
  double w_xi = 0.0;  // transverse measure element (ring measure if radial)
  double w_k = 0.0;   // contour parameter element
  Complex lambda;
  double weight() const { return w_xi * w_k; }
};

struct QuadratureGrid {
  int d = 2;
  bool radial = false;  // d = 3 reduction to |xi~|
  double r_cut = 0.5;
  double theta1 = 0.05;
  std::vector<QuadNode> nodes;
  double measure = 0.0;  // sum of weights

  // node count along each axis, kept for the refinement checks
  int n_xi = 0, n_k = 0;
};

/// Tensor grid over {|xi~| <= r} x {Gamma^xi ~ |lambda| <= r} with
/// trapezoid weights; symmetric in (xi~, k) so that real data stay real.
QuadratureGrid make_quadrature_grid(int d, double r_cut, double theta1,
                                    int n_xi, int n_k, bool radial);

/// Separable forcing f(x) = g(x1) h(x~) with an analytic transverse
/// transform; the longitudinal part reuses the resolvent forcings.
struct SeparableForcing {
  ForcingSpec longitudinal;
  std::function<double(const Vec&)> transverse;      // h(x~)
  std::function<double(const Vec&)> transverse_hat;  // real, even
};

SeparableForcing gaussian_separable(int n, int d, double width_x1,
                                    double width_xt);

/// Resolvent data cached per quadrature node; evaluation in t is then a
/// weighted exponential sum.
class S1Operator {
 public:
  S1Operator(const SystemModel& model, const ShockProfile& profile,
             QuadratureGrid grid, const SeparableForcing& f,
             const ResolventOptions& solver = {}, int jobs = 1);

  /// physical field at (x1 grid) x (xt samples); real part with the
  /// conjugate-pairing residual recorded
  Mat apply(double t, const std::vector<double>& xt_samples,
            double* max_imag = nullptr, int comp = 0) const;

  /// L2 norm over the full space via the transverse Parseval identity
  double norm_l2(double t) const;
  /// sup norm sampled on a transverse window
  double norm_linf(double t, int xt_samples = 33, double xt_max = 20.0) const;

  const std::vector<double>& x1() const { return x1_; }
  const QuadratureGrid& grid() const { return grid_; }

 private:
  QuadratureGrid grid_;
  std::vector<double> x1_;
  std::vector<std::vector<CVec>> uhat_;  // per node, scalar-projected below
  std::vector<double> fhat_;             // transverse transform at nodes
  int n_ = 1, d_ = 2;
  double l_ = 0.0;
};

struct DecayReport {
  std::vector<double> times, norms;
  LinearFit fit;             // log|U| vs log(1+t)
  double theoretical = 0.0;
  double tolerance = 0.15;
  Verdict verdict = Verdict::Inconclusive;
  double t_min = 5.0;
  std::string note;
};

/// Theoretical decay exponent of |U(t)|_{L^p}: the d >= 3 route loses a
/// quarter power, the H5 route does not.
double theoretical_decay_exponent(double theorem, int d, double p);

DecayReport decay_rate_fit(const std::vector<double>& times,
                           const std::vector<double>& norms, double p,
                           double theorem, int d, double t_min = 5.0);

}  // namespace shockspec
