#pragma once

#include "shockspec/hypotheses.hpp"
#include "shockspec/model.hpp"

namespace shockspec {

struct ProfileOptions {
  double L = 0.0;          // 0 => adaptive: smallest L with endstate gap < tol
  double L_cap = 200.0;
  double endstate_tol = 1e-8;
  double ode_tol = 1e-12;
  double phase_value = std::numeric_limits<double>::quiet_NaN();
  // NaN => midpoint of the first component
};

/// Discretized standing profile Ubar(x1) with exact node derivatives.
class ShockProfile {
 public:
  std::vector<double> grid;  // increasing nodes on [-L, L]
  Mat values;                // n x m
  Mat derivative;            // n x m
  double L = 0.0;
  double decay_rate = 0.0;   // fitted exponential approach rate
  double residual = 0.0;     // max profile-equation residual over nodes
  Vec u_minus, u_plus;

  int n() const { return static_cast<int>(values.rows()); }
  int size() const { return static_cast<int>(grid.size()); }

  /// Profile state at an arbitrary x; re-integrates the profile field from
  /// the nearest node, so accuracy is the ODE tolerance, not interpolation.
  Vec at(double x) const;
  Vec derivative_at(double x) const;

  /// Constant profile (U == state everywhere); for constant-coefficient
  /// operators where no connection problem arises.
  static ShockProfile constant(const SystemModel& model, const Vec& state,
                               double L, int nodes = 33);

  /// CSV round trip: columns x,u_1..u_n,du_1..du_n.
  void write_csv(std::ostream& os) const;
  static ShockProfile read_csv(std::istream& is);

  // profile field U' = P(U) restricted to the connection manifold;
  // set by the solver and used by at()/derivative_at()
  std::function<Vec(const Vec&)> field;

 private:
  int nearest_node(double x) const;
};

/// F1(U+) - F1(U-): the jump condition residual for a standing shock.
Vec rankine_hugoniot_residual(const SystemModel& model, const Endstates& es);

/// Computes the viscous profile by integrating the reduced profile field
/// from the phase point (r = 1 reductions) or by two-sided shooting.
ShockProfile solve_profile(const SystemModel& model, const Endstates& es,
                           const ProfileOptions& opt = {});

struct TangentFields {
  int l = 0;
  std::vector<double> grid;
  std::vector<Mat> phi;   // each n x m, decaying at both ends
  std::vector<Mat> dphi;  // x-derivatives on the grid
};

/// The l independent bounded solutions of the linearized profile equation;
/// phi_1 is the translation mode Ubar'.
TangentFields tangent_fields(const SystemModel& model, const ShockProfile& prof,
                             const ShockClass& cls);

}  // namespace shockspec
