#include "shockspec/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

namespace shockspec {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "PASS";
    case Verdict::Fail: return "FAIL";
    default: return "INCONCLUSIVE";
  }
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LinearFit f;
  const int n = static_cast<int>(std::min(x.size(), y.size()));
  f.npoints = n;
  if (n < 2) return f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) return f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double rss = 0;
  for (int i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    rss += r * r;
  }
  f.residual = std::sqrt(rss / n);
  return f;
}

LinearFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  return fit_line(lx, ly);
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    const double t = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
    g[i] = lo * std::pow(hi / lo, t);
  }
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    const double t = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
    g[i] = lo + (hi - lo) * t;
  }
  return g;
}

std::vector<Vec> sphere_grid(int dim, int n) {
  std::vector<Vec> pts;
  if (dim <= 0) return pts;
  if (dim == 1) {
    Vec p(1);
    p(0) = 1.0;
    pts.push_back(p);
    p(0) = -1.0;
    pts.push_back(p);
    return pts;
  }
  if (dim == 2) {
    for (int i = 0; i < n; ++i) {
      const double th = 2.0 * M_PI * i / n;
      Vec p(2);
      p << std::cos(th), std::sin(th);
      pts.push_back(p);
    }
    return pts;
  }
  // Fibonacci lattice on S^2; higher dims fall back to normalized
  // Halton-like axes plus the lattice on the leading three coordinates.
  const double ga = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double th = ga * i;
    Vec p = Vec::Zero(dim);
    p(0) = r * std::cos(th);
    p(1) = r * std::sin(th);
    p(2) = z;
    if (dim > 3) {
      // spread remaining coordinates deterministically and renormalize
      for (int d = 3; d < dim; ++d)
        p(d) = 0.3 * std::sin(ga * (i + 1) * (d + 1));
      p.normalize();
    }
    pts.push_back(p);
  }
  return pts;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0;
  for (size_t i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  const int nthreads = std::min(jobs, n);
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errs(nthreads);
  for (int t = 0; t < nthreads; ++t) {
    workers.emplace_back([&, t]() {
      try {
        for (int i = t; i < n; i += nthreads) fn(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back = std::strtod(buf, nullptr);
  if (back == v) {
    for (int prec = 1; prec <= 16; ++prec) {
      char b2[40];
      std::snprintf(b2, sizeof(b2), "%.*g", prec, v);
      if (std::strtod(b2, nullptr) == v) return b2;
    }
  }
  return buf;
}

namespace quad {
double l2sq(const std::vector<double>& x, const std::vector<double>& v) {
  return trapezoid(x, v);
}
}  // namespace quad

}  // namespace shockspec
