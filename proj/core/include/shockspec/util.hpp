#pragma once

#include <functional>
#include <string>
#include <vector>

#include "shockspec/types.hpp"

namespace shockspec {

/// Least-squares line through (x_i, y_i); residual is the rms misfit.
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Fit of log(y) vs log(x), skipping nonpositive entries.
LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> log_grid(double lo, double hi, int n);
std::vector<double> linear_grid(double lo, double hi, int n);

/// Deterministic quasi-uniform points on the unit sphere in R^dim
/// (Fibonacci-type lattice; dim 1 gives {+1,-1}).
std::vector<Vec> sphere_grid(int dim, int n);

double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Deterministic parallel map: fn(i) for i in [0, n), results keyed by index.
/// jobs <= 1 runs inline; any jobs value yields identical results.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

/// FNV-1a over a string, used for config hashes.
std::uint64_t fnv1a(const std::string& s);

std::string format_double(double v);  // shortest round-trip representation

namespace quad {
/// Trapezoid integral of |u|^2 over a (possibly nonuniform) grid.
double l2sq(const std::vector<double>& x, const std::vector<double>& absval_sq);
}  // namespace quad

}  // namespace shockspec
