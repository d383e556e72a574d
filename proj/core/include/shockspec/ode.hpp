#pragma once

#include <cmath>
#include <functional>

#include "shockspec/errors.hpp"
#include "shockspec/types.hpp"

namespace shockspec {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_min = 1e-13;
  long max_steps = 2'000'000;
};

/// Adaptive Dormand-Prince 5(4) for dy/dx = f(x, y); State is any Eigen
/// vector or matrix type.  Integrates from x0 to x1 (either direction) and
/// optionally reports accepted steps through `observer`.
template <class State, class Rhs>
State integrate_ode(const Rhs& f, double x0, double x1, State y,
                    const OdeOptions& opt = {},
                    const std::function<void(double, const State&)>& observer = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = (x1 >= x0) ? 1.0 : -1.0;
  double x = x0;
  double h = dir * std::min(opt.h_init, std::abs(x1 - x0));
  if (h == 0.0) return y;
  State k1 = f(x, y);
  long steps = 0;
  if (observer) observer(x, y);
  while (dir * (x1 - x) > 0) {
    if (++steps > opt.max_steps)
      throw StiffnessOverflow("ODE step budget exhausted at x=" + std::to_string(x));
    if (dir * (x + h - x1) > 0) h = x1 - x;
    const State k2 = f(x + c2 * h, (y + h * (a21 * k1)).eval());
    const State k3 = f(x + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    const State k4 =
        f(x + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const State k5 = f(
        x + c5 * h,
        (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 =
        f(x + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                           a65 * k5))
                     .eval());
    const State ynew =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = f(x + h, ynew);
    const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                           e7 * k7);
    const double sc =
        opt.atol + opt.rtol * std::max(y.matrix().norm(), ynew.matrix().norm());
    const double enorm = err.matrix().norm() / sc;
    if (enorm <= 1.0) {
      x += h;
      y = ynew;
      k1 = k7;
      if (observer) observer(x, y);
    }
    const double fac =
        std::clamp(0.9 * std::pow(std::max(enorm, 1e-10), -0.2), 0.2, 5.0);
    h *= fac;
    if (std::abs(h) < opt.h_min)
      throw StiffnessOverflow("ODE step underflow at x=" + std::to_string(x));
  }
  return y;
}

}  // namespace shockspec
