#pragma once

#include <functional>
#include <memory>
#include <string>

#include "shockspec/types.hpp"

namespace shockspec {

/// A hyperbolic-parabolic system of conservation laws
///   U_t + sum_j F^j(U)_{x_j} = sum_{jk} (B^{jk}(U) U_{x_k})_{x_j}
/// with the viscosity blocks B^{jk} = [[0,0],[b1^{jk}, b2^{jk}]]
/// (first n-r rows zero).  Models also carry the symmetric quasilinear
/// form (A0~, Aj~, b~) used by the hypothesis checks and glancing scans.
class SystemModel {
 public:
  using VecFn = std::function<Vec(const Vec&)>;
  using MatFn = std::function<Mat(const Vec&)>;

  int n = 0;  // state dimension
  int r = 0;  // parabolic rank (size of the lower-right viscosity block)
  int d = 1;  // space dimension
  std::string name;

  std::vector<VecFn> flux;       // F^j, j = 0..d-1
  std::vector<MatFn> flux_jac;   // dF^j
  // viscosity(j,k): full n x n matrix B^{jk}(U)
  std::function<Mat(int, int, const Vec&)> viscosity;
  // directional derivative of B^{jk} at U in direction w (n x n);
  // empty => finite differences are used.
  std::function<Mat(int, int, const Vec&, const Vec&)> viscosity_deriv;

  // Symmetric quasilinear form evaluated at a state: A0 (n x n, SPD),
  // A^j (n x n, symmetric at endstates), b~^{jk} (r x r positive part).
  MatFn sym_A0;
  std::function<Mat(int, const Vec&)> sym_A;
  std::function<Mat(int, int, const Vec&)> sym_b2;

  // Declared, not derived: whether variable-multiplicity modes should be
  // treated as totally nonglancing.
  bool totally_nonglancing = false;

  Mat jac(int j, const Vec& u) const;            // dF^j with domain checks
  Vec flux_at(int j, const Vec& u) const;        // F^j with domain checks
  Mat visc(int j, int k, const Vec& u) const;    // B^{jk}
  Mat visc_dir_deriv(int j, int k, const Vec& u, const Vec& w) const;

  Mat b1(int j, int k, const Vec& u) const;  // lower-left r x (n-r)
  Mat b2(int j, int k, const Vec& u) const;  // lower-right r x r

  /// Symbol sum_j xi_j dF^j(u).
  Mat flux_symbol(const Vec& xi, const Vec& u) const;
  /// Symbol sum_{jk} xi_j xi_k B^{jk}(u).
  Mat visc_symbol(const Vec& xi, const Vec& u) const;
};

struct Endstates {
  Vec u_minus;
  Vec u_plus;
  // profiles are stationary: shock speed is fixed at zero
  static constexpr double shock_speed = 0.0;
};

// ---- built-in registry ----------------------------------------------------

/// Scalar Burgers, F^j(u) = u^2/2 in every direction, unit viscosity.
SystemModel make_burgers(int d = 1);
Endstates burgers_endstates(double u_minus = 1.0, double u_plus = -1.0);

/// Isentropic gas dynamics with p(rho) = K rho^gamma and momentum
/// viscosity mu * laplace(u_i); n = d+1 conserved variables (rho, m).
SystemModel make_isentropic(int d = 1, double gamma_gas = 5.0 / 3.0,
                            double K = 1.0, double mu = 1.0);
/// Calibrates the downstream state of a standing Lax 1-shock from the
/// upstream data by solving the jump conditions.
Endstates isentropic_lax_endstates(const SystemModel& m, double rho_minus,
                                   double u_minus);

/// Synthetic 3x3 system with acoustic-type transverse symbol whose
/// characteristic roots {xi1(1+u1), +|xi|, -|xi|} have variable
/// multiplicity; stands in for physical MHD in the hypothesis scans.
SystemModel make_synthetic3x3();
Endstates synthetic3x3_endstates();

/// Rotationally coupled cubic system (d=1, n=r=2) with an overcompressive
/// standing shock, i = n+2 and a two-parameter connection.
SystemModel make_overcompressive();
Endstates overcompressive_endstates();

/// Two-component model (d=1, n=r=2) whose transverse characteristic is
/// outgoing on both sides: undercompressive, i = n.
SystemModel make_undercompressive();
Endstates undercompressive_endstates();

/// Scalar constant-coefficient advection-diffusion u_t + a u_x = b u_xx;
/// used for closed-form kernel comparisons.
SystemModel make_constant_coefficient(double a, double b);

/// Look up a registry model by id ("burgers", "isentropic", ...).
SystemModel make_builtin(const std::string& id, int d);

}  // namespace shockspec
