#pragma once

// Test-side scalar evolution for Laplace-transform comparisons: CN in the
// diffusion, explicit AB2 central advection, hand-rolled tridiagonal solve.
// Deliberately separate from the library schemes.

#include <complex>
#include <functional>
#include <vector>

namespace oracles {

struct ScalarEvolution {
  std::vector<double> x;
  std::vector<std::complex<double>> laplace;  // int_0^T e^{-lambda t} u dt
};

// u_t = u_xx - (a(x) u)_x on [-X, X], Dirichlet 0
inline ScalarEvolution scalar_laplace_oracle(
    const std::function<double(double)>& a,
    const std::function<double(double)>& u0, double X, int nx, double T,
    double dt, std::complex<double> lambda) {
  ScalarEvolution out;
  const double h = 2 * X / (nx - 1);
  out.x.resize(nx);
  std::vector<double> u(nx), acoef(nx);
  for (int i = 0; i < nx; ++i) {
    out.x[i] = -X + i * h;
    u[i] = u0(out.x[i]);
    acoef[i] = a(out.x[i]);
  }
  out.laplace.assign(nx, 0.0);
  const double r = dt / (2 * h * h);

  // CN tridiagonal factors (constant in time)
  std::vector<double> dl(nx, -r), dd(nx, 1 + 2 * r), du(nx, -r);
  dd[0] = dd[nx - 1] = 1.0;
  du[0] = dl[nx - 1] = 0.0;
  // Thomas prefactor
  std::vector<double> cp(nx);
  cp[0] = du[0] / dd[0];
  for (int i = 1; i < nx; ++i) cp[i] = du[i] / (dd[i] - dl[i] * cp[i - 1]);

  auto adv = [&](const std::vector<double>& v, std::vector<double>& g) {
    g[0] = g[nx - 1] = 0.0;
    for (int i = 1; i + 1 < nx; ++i)
      g[i] = -(acoef[i + 1] * v[i + 1] - acoef[i - 1] * v[i - 1]) / (2 * h);
  };

  std::vector<double> gprev(nx), gcur(nx), rhs(nx), unew(nx);
  adv(u, gprev);
  bool first = true;
  double t = 0.0;
  auto accumulate = [&](double w) {
    for (int i = 0; i < nx; ++i)
      out.laplace[i] += w * dt * std::exp(-lambda * t) * u[i];
  };
  accumulate(0.5);
  while (t < T - 1e-12) {
    adv(u, gcur);
    for (int i = 1; i + 1 < nx; ++i) {
      const double diff = r * (u[i + 1] - 2 * u[i] + u[i - 1]);
      const double advt = first ? dt * gcur[i]
                                : dt * (1.5 * gcur[i] - 0.5 * gprev[i]);
      rhs[i] = u[i] + diff + advt;
    }
    rhs[0] = rhs[nx - 1] = 0.0;
    first = false;
    gprev = gcur;
    // Thomas solve
    unew[0] = rhs[0] / dd[0];
    for (int i = 1; i < nx; ++i)
      unew[i] = (rhs[i] - dl[i] * unew[i - 1]) / (dd[i] - dl[i] * cp[i - 1]);
    for (int i = nx - 2; i >= 0; --i) unew[i] -= cp[i] * unew[i + 1];
    u = unew;
    t += dt;
    accumulate(t >= T - 1e-12 ? 0.5 : 1.0);
  }
  return out;
}

}  // namespace oracles
