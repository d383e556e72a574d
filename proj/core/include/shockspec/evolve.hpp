#pragma once

#include "shockspec/profile.hpp"

namespace shockspec {

struct EvolveOptions {
  double x1_max = 0.0;     // 0 => profile.L
  int nx1 = 2001;
  double xt_max = 40.0;    // transverse half-width (periodic), d = 2
  int nxt = 128;
  double dt = 0.0;         // 0 => CFL pick
  double cfl = 0.4;
  double out_every = 0.5;  // norm recording interval
  double blowup_limit = 1e6;
};

/// State on a tensor grid; 1-D evolutions keep a single transverse node.
struct EvolutionState {
  double t = 0.0;
  std::vector<double> x1, xt;
  Mat fields;  // n x (nx1 * nxt), index i1 + nx1 * it
  Vec mass;    // per-component discrete integral
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> l2, linf, zeta;
  double mass_drift = 0.0;    // max |mass(t) - mass(0)| / (1 + |mass(0)|)
  EvolutionState final_state;
  int steps = 0;
};

using InitialData = std::function<Vec(double x1, double xt)>;

/// Linearized equations about the profile, semi-implicit in the viscous
/// flux (Crank-Nicolson) and explicit in the advective flux; divergence
/// form keeps the discrete mass.
Trajectory evolve_linearized(const SystemModel& model,
                             const ShockProfile& profile, const InitialData& u0,
                             double T, const EvolveOptions& opt = {});

/// Nonlinear evolution of Ubar + U (1-D); zeta(t) carries the dimension-
/// dependent decay weights on the perturbation norms.
Trajectory evolve_nonlinear(const SystemModel& model,
                            const ShockProfile& profile, const InitialData& u0,
                            double T, int zeta_dimension,
                            const EvolveOptions& opt = {});

}  // namespace shockspec
