#include "shockspec/glancing.hpp"

#include <algorithm>
#include <cmath>

#include "shockspec/errors.hpp"

namespace shockspec {

namespace {

// interior symbol M(tau, xi~) at a fixed state (real matrix)
Mat interior_symbol(const SystemModel& m, const Vec& u, double tau,
                    const Vec& xi_tilde) {
  Mat rhs = tau * m.sym_A0(u);
  for (int j = 1; j < m.d; ++j) rhs += xi_tilde(j - 1) * m.sym_A(j, u);
  return m.sym_A(0, u).partialPivLu().solve(rhs);
}

struct GapInfo {
  double gap = 0.0;       // min eigenvalue distance
  double vec_angle = 1.0; // min principal angle between the closest pair's eigvecs
  int cluster = 1;        // size of the closest cluster at gap scale
};

GapInfo eigen_gap(const Mat& M, double cluster_scale) {
  Eigen::EigenSolver<Mat> es(M);
  const CVec ev = es.eigenvalues();
  const CMat V = es.eigenvectors();
  GapInfo gi;
  gi.gap = std::numeric_limits<double>::infinity();
  int bi = 0, bj = 1;
  const int n = static_cast<int>(ev.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double g = std::abs(ev(i) - ev(j));
      if (g < gi.gap) {
        gi.gap = g;
        bi = i;
        bj = j;
      }
    }
  if (n < 2) {
    gi.gap = std::numeric_limits<double>::infinity();
    return gi;
  }
  const CVec vi = V.col(bi).normalized(), vj = V.col(bj).normalized();
  const double overlap = std::abs(vi.dot(vj.conjugate()))
                             ? std::abs((vi.adjoint() * vj)(0, 0))
                             : 0.0;
  gi.vec_angle = std::sqrt(std::max(0.0, 1.0 - overlap * overlap));
  int cl = 0;
  for (int k = 0; k < n; ++k)
    if (std::abs(ev(k) - ev(bi)) <= cluster_scale) ++cl;
  gi.cluster = std::max(2, cl);
  return gi;
}

}  // namespace

GlancingReport glancing_scan(const SystemModel& model, const Endstates& es,
                             int side, const std::vector<Vec>& xi_grid,
                             const GlancingScanOptions& opt) {
  if (model.d < 2)
    return GlancingReport{side, {}, 0, opt.coalescence_tol};
  const Vec& u = side >= 0 ? es.u_plus : es.u_minus;
  GlancingReport rep;
  rep.side = side >= 0 ? +1 : -1;
  rep.coalescence_tol = opt.coalescence_tol;

  for (const Vec& xi : xi_grid) {
    if (xi.norm() < 1e-12) continue;
    auto gap_at = [&](double tau) {
      return eigen_gap(interior_symbol(model, u, tau, xi), 1e-4).gap;
    };
    // coarse scan for local minima of the gap, then golden-section refine
    const int ns = opt.tau_samples;
    std::vector<double> taus(ns), gaps(ns);
    for (int i = 0; i < ns; ++i) {
      taus[i] = -opt.tau_max + 2.0 * opt.tau_max * i / (ns - 1);
      gaps[i] = gap_at(taus[i]);
    }
    for (int i = 1; i + 1 < ns; ++i) {
      if (!(gaps[i] <= gaps[i - 1] && gaps[i] <= gaps[i + 1])) continue;
      if (gaps[i] > 0.2) continue;  // not heading to a coalescence
      double a = taus[i - 1], b = taus[i + 1];
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      double f1 = gap_at(x1), f2 = gap_at(x2);
      for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - gr * (b - a);
          f1 = gap_at(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + gr * (b - a);
          f2 = gap_at(x2);
        }
      }
      // gap^2(tau) ~ m |tau - eta| near a branch point: two straddling
      // samples give eta = tau0 + w (gl - gr)/(gl + gr); iterate with a
      // shrinking probe width
      double tau_star = 0.5 * (a + b);
      for (double w = std::max(1e-6, 10 * (b - a)); w > 1e-13; w *= 1e-3) {
        const double gl = std::pow(gap_at(tau_star - w), 2);
        const double grr = std::pow(gap_at(tau_star + w), 2);
        if (gl + grr <= 0) break;
        const double eta = tau_star + w * (gl - grr) / (gl + grr);
        if (gap_at(eta) < gap_at(tau_star)) tau_star = eta;
      }
      const GapInfo gi =
          eigen_gap(interior_symbol(model, u, tau_star, xi), 1e-4);
      if (gi.gap > opt.coalescence_tol * std::max(1.0, interior_symbol(model, u, tau_star, xi).norm())) continue;
      // transversal crossings keep distinct eigenvectors; genuine branch
      // points collapse them
      if (gi.vec_angle > opt.vec_collapse_tol) continue;
      GlancingPoint p;
      p.xi_tilde = xi;
      p.tau = tau_star;
      p.multiplicity = std::max(2, gi.cluster);
      p.gap = gi.gap;
      rep.points.push_back(p);
    }
  }

  // organise points into curves by continuity in (|xi|, tau/|xi|) slope
  std::vector<std::pair<double, int>> order;  // slope -> index
  std::vector<int> assigned(rep.points.size(), -1);
  std::vector<double> curve_slopes;
  for (size_t i = 0; i < rep.points.size(); ++i) {
    const double nx = rep.points[i].xi_tilde.norm();
    const double slope = rep.points[i].tau / nx;
    int best = -1;
    double bestd = 0.05 * (1.0 + std::abs(slope));
    for (size_t c = 0; c < curve_slopes.size(); ++c) {
      const double dd = std::abs(curve_slopes[c] - slope);
      if (dd < bestd) {
        bestd = dd;
        best = static_cast<int>(c);
      }
    }
    if (best < 0) {
      best = static_cast<int>(curve_slopes.size());
      curve_slopes.push_back(slope);
    } else {
      curve_slopes[best] = 0.5 * (curve_slopes[best] + slope);
    }
    rep.points[i].curve = best;
  }
  rep.curve_count = static_cast<int>(curve_slopes.size());
  return rep;
}

std::vector<double> GlancingReport::curve_tau(const Vec& xi_tilde) const {
  std::vector<double> out;
  for (int c = 0; c < curve_count; ++c) {
    // nearest sampled point of the curve by |xi|; curves through the origin
    // are well approximated by their slope
    double best = std::numeric_limits<double>::infinity();
    double tau = 0.0;
    bool found = false;
    for (const auto& p : points) {
      if (p.curve != c) continue;
      const double nd = (p.xi_tilde - xi_tilde).norm();
      if (nd < best) {
        best = nd;
        const double s = p.tau / p.xi_tilde.norm();
        tau = s * xi_tilde.norm() *
              ((p.xi_tilde.dot(xi_tilde) >= 0) ? 1.0 : -1.0);
        found = true;
      }
    }
    if (found) out.push_back(tau);
  }
  return out;
}

double GlancingReport::gamma2(const Vec& xi_tilde, Complex lambda,
                              double rho) const {
  double g = 1.0;
  if (rho <= 0.0) return g;
  const auto etas = curve_tau(xi_tilde);
  int ci = 0;
  for (double eta : etas) {
    int s = 2;
    for (const auto& p : points)
      if (p.curve == ci) {
        s = p.multiplicity;
        break;
      }
    const double q = std::abs(lambda.imag() - eta) / rho + rho;
    g += std::pow(q, 1.0 / s - 1.0);
    ++ci;
  }
  return g;
}

double GlancingReport::gamma1(const Vec& xi_tilde, Complex lambda,
                              double rho) const {
  double g = 0.0;
  if (rho <= 0.0) return 1.0;
  const auto etas = curve_tau(xi_tilde);
  int ci = 0;
  for (double eta : etas) {
    int nu = 2;
    for (const auto& p : points)
      if (p.curve == ci) {
        nu = p.multiplicity;
        break;
      }
    const double q = std::abs(lambda.imag() - eta) / rho + rho;
    const double expo = (1.0 - std::floor((nu + 1) / 2.0)) / nu;
    g = std::max(g, std::pow(q, expo));
    ++ci;
  }
  return etas.empty() ? 1.0 : std::max(g, 1.0);
}

}  // namespace shockspec
