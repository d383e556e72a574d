#pragma once

#include <functional>

#include "shockspec/types.hpp"

namespace shockspec {

/// Linear two-point boundary value problem
///   u' = A(x) u + g(x),  Ba u(a) = beta_a,  Bb u(b) = beta_b,
/// with rows(Ba) + rows(Bb) = dim.
struct BvpProblem {
  std::function<CMat(double)> A;
  std::function<CVec(double)> g;  // empty => homogeneous
  double a = 0.0, b = 1.0;
  CMat Ba, Bb;
  CVec beta_a, beta_b;
};

struct BvpOptions {
  double segment_length = 1.0;
  double ode_rtol = 1e-10;
  double ode_atol = 1e-12;
  double cond_limit = 1e12;     // 1/rcond of the shooting system
  int min_segments = 4;
  double output_spacing = 0.05; // dense output target spacing
};

struct BvpSolution {
  std::vector<double> x;        // dense output abscissae (increasing)
  std::vector<CVec> u;
  std::vector<CVec> du;         // A u + g at the output points
  double rcond = 1.0;

  CVec at(double xq) const;     // linear interpolation between outputs
};

/// Multiple shooting with a dense assembled system.  Throws NearSpectrum
/// when the assembled system's conditioning exceeds cond_limit.
BvpSolution solve_linear_bvp(const BvpProblem& problem,
                             const BvpOptions& opt = {});

}  // namespace shockspec
