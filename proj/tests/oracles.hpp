#pragma once

// Test-only reference computations, independent of the library's own
// numerical paths.

#include <cmath>
#include <complex>

#include "shockspec/evans.hpp"
#include "shockspec/ode.hpp"
#include "shockspec/subspace.hpp"
#include "shockspec/symbol.hpp"

namespace oracles {

using namespace shockspec;

// Burgers standing shock between +1 and -1
inline double burgers_profile(double x) { return -std::tanh(0.5 * x); }
inline double burgers_profile_deriv(double x) {
  const double c = std::cosh(0.5 * x);
  return -0.5 / (c * c);
}

// Evans determinant by continuous orthogonalization: the frame obeys
// Omega' = (I - Omega Omega^*) G Omega and the triangular factor's
// log-determinant integrates trace(Omega^* G Omega).  Same mathematical
// object as the QR-marching value, different ODEs.
struct ContOrthResult {
  Complex log_total;
};

inline ContOrthResult evans_cont_orth(const SystemModel& model,
                                      const ShockProfile& prof,
                                      const Frequency& freq) {
  FirstOrderSymbol sym(model, prof, freq);
  auto [sp, sm] = limiting_subspaces(sym);
  const int N = sym.N();
  struct Aug {
    CMat omega;
    Complex logdet;
  };
  auto run = [&](CMat q0, double from) {
    const int k = static_cast<int>(q0.cols());
    // pack (omega, logdet) into a (N+1) x k matrix: last row spreads logdet
    CMat y = CMat::Zero(N + 1, k);
    y.topRows(N) = q0;
    auto rhs = [&](double x, const CMat& yy) {
      const CMat om = yy.topRows(N);
      const CMat g = sym.G(x);
      const CMat gom = g * om;
      const CMat proj = gom - om * (om.adjoint() * gom);
      CMat out = CMat::Zero(N + 1, k);
      out.topRows(N) = proj;
      out(N, 0) = (om.adjoint() * gom).trace();
      return out;
    };
    const CMat yend =
        integrate_ode<CMat>(rhs, from, 0.0, y, OdeOptions{1e-12, 1e-14, 1e-4});
    return Aug{yend.topRows(N), yend(N, 0)};
  };
  const Aug right = run(sp.frame, prof.L);
  const Aug left = run(sm.frame, -prof.L);
  CMat full(N, N);
  full << right.omega, left.omega;
  ContOrthResult r;
  r.log_total = std::log(full.determinant()) + right.logdet + left.logdet;
  return r;
}

// scalar constant-coefficient kernel of (lambda0 - (b d^2 - a d))
inline double constcoef_green(double a, double b, double lambda0, double x,
                              double y) {
  const double disc = std::sqrt(a * a + 4 * b * lambda0);
  const double mup = (a + disc) / (2 * b);
  const double mum = (a - disc) / (2 * b);
  if (x >= y) return std::exp(mum * (x - y)) / disc;
  return std::exp(mup * (x - y)) / disc;
}

// isentropic gas: reduced profile equation rho' = -rho^2 h(rho)/(mu m0)
inline std::vector<std::pair<double, double>> gas_profile_rk4(
    double rho_minus, double rho_plus, double m0, double gammag, double K,
    double mu, double L, double h) {
  const double C = m0 * m0 / rho_minus + K * std::pow(rho_minus, gammag);
  auto f = [&](double rho) {
    const double hr = m0 * m0 / rho + K * std::pow(rho, gammag) - C;
    return -rho * rho * hr / (mu * m0);
  };
  std::vector<std::pair<double, double>> out;
  double rho = 0.5 * (rho_minus + rho_plus);
  // march both directions from x=0
  std::vector<std::pair<double, double>> fwd{{0.0, rho}}, bwd;
  double x = 0, r = rho;
  while (x < L) {
    const double k1 = f(r), k2 = f(r + 0.5 * h * k1), k3 = f(r + 0.5 * h * k2),
                 k4 = f(r + h * k3);
    r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    x += h;
    fwd.push_back({x, r});
  }
  x = 0;
  r = rho;
  while (x > -L) {
    const double k1 = f(r), k2 = f(r - 0.5 * h * k1), k3 = f(r - 0.5 * h * k2),
                 k4 = f(r - h * k3);
    r -= h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    x -= h;
    bwd.push_back({x, r});
  }
  for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) out.push_back(*it);
  for (const auto& p : fwd) out.push_back(p);
  return out;
}

// glancing curves of the 2-d gas at a subsonic state: tau = +-sqrt(c^2-u^2) xi2
inline double gas_glancing_slope(double rho, double u, double gammag, double K) {
  const double c2 = gammag * K * std::pow(rho, gammag - 1.0);
  return std::sqrt(c2 - u * u);
}

}  // namespace oracles
