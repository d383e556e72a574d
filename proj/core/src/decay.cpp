#include "shockspec/decay.hpp"

#include <cmath>
#include <map>

#include "shockspec/errors.hpp"
#include "shockspec/util.hpp"

namespace shockspec {

QuadratureGrid make_quadrature_grid(int d, double r_cut, double theta1,
                                    int n_xi, int n_k, bool radial) {
  QuadratureGrid g;
  g.d = d;
  g.radial = radial;
  g.r_cut = r_cut;
  g.theta1 = theta1;
  g.n_xi = n_xi;
  g.n_k = n_k;

  auto kmax_at = [&](double xin) {
    // largest k with |ik - theta1 (k^2 + xin^2)| <= r_cut
    double lo = 0.0, hi = r_cut;
    auto ok = [&](double k) {
      const Complex lam(-theta1 * (k * k + xin * xin), k);
      return std::abs(lam) <= r_cut;
    };
    if (!ok(0.0)) return -1.0;
    while (ok(hi)) hi *= 1.2;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? lo : hi) = mid;
    }
    return lo;
  };

  std::vector<std::pair<double, double>> xi_nodes;  // (|xi| or xi, weight)
  if (d == 1) {
    xi_nodes.push_back({0.0, 1.0});
  } else if (radial) {
    // measure 2 pi s ds on [0, r]
    for (int i = 0; i < n_xi; ++i) {
      const double s = r_cut * (i + 0.5) / n_xi;
      xi_nodes.push_back({s, 2 * M_PI * s * (r_cut / n_xi)});
    }
  } else {
    // symmetric trapezoid on [-r, r]
    const double h = 2 * r_cut / (n_xi - 1);
    for (int i = 0; i < n_xi; ++i) {
      const double s = -r_cut + i * h;
      const double w = (i == 0 || i == n_xi - 1) ? h / 2 : h;
      xi_nodes.push_back({s, w});
    }
  }

  for (const auto& [s, wxi] : xi_nodes) {
    const double km = kmax_at(std::abs(s));
    if (km <= 0) continue;
    const double hk = 2 * km / (n_k - 1);
    for (int j = 0; j < n_k; ++j) {
      QuadNode node;
      node.k = -km + j * hk;
      node.w_k = (j == 0 || j == n_k - 1) ? hk / 2 : hk;
      node.w_xi = wxi;
      node.xi_tilde = (d >= 2) ? Vec::Constant(1, s) : Vec(0);
      if (d > 2 && !radial)
        throw Error("tensor quadrature only for d <= 2; use radial for d = 3");
      node.lambda = Complex(-theta1 * (node.k * node.k + s * s), node.k);
      g.nodes.push_back(node);
      g.measure += node.weight();
    }
  }
  return g;
}

SeparableForcing gaussian_separable(int n, int d, double w1, double wt) {
  SeparableForcing f;
  f.longitudinal = gaussian_forcing(n, 0, 0.0, w1);
  f.transverse = [wt](const Vec& xt) {
    return std::exp(-0.5 * xt.squaredNorm() / (wt * wt));
  };
  const int dt = d - 1;
  f.transverse_hat = [wt, dt](const Vec& xi) {
    const double c = std::pow(wt * std::sqrt(2 * M_PI), dt);
    return c * std::exp(-0.5 * wt * wt * xi.squaredNorm());
  };
  return f;
}

S1Operator::S1Operator(const SystemModel& model, const ShockProfile& profile,
                       QuadratureGrid grid, const SeparableForcing& f,
                       const ResolventOptions& solver, int jobs)
    : grid_(std::move(grid)), n_(model.n), d_(grid_.d), l_(profile.L) {
  // shared output grid
  const int m = 801;
  x1_ = linear_grid(-profile.L, profile.L, m);
  uhat_.resize(grid_.nodes.size());
  fhat_.resize(grid_.nodes.size());
  std::vector<std::string> errs(grid_.nodes.size());
  parallel_for(static_cast<int>(grid_.nodes.size()), jobs, [&](int i) {
    const QuadNode& node = grid_.nodes[i];
    Vec xi_full;
    if (model.d - 1 == node.xi_tilde.size())
      xi_full = node.xi_tilde;
    else {
      // radial reduction: the model's transverse symbol is isotropic, so a
      // single direction represents the ring
      xi_full = Vec::Zero(model.d - 1);
      if (node.xi_tilde.size() > 0) xi_full(0) = node.xi_tilde(0);
    }
    const Frequency fr(xi_full, node.lambda);
    ResolventOptions ro = solver;
    ro.check_residual = false;
    const ResolventSolution sol =
        solve_resolvent(model, profile, fr, f.longitudinal, 0, ro);
    auto& store = uhat_[i];
    store.reserve(x1_.size());
    for (double x : x1_) {
      const auto it = std::upper_bound(sol.x.begin(), sol.x.end(), x);
      int q = std::clamp(static_cast<int>(it - sol.x.begin()) - 1, 0,
                         static_cast<int>(sol.x.size()) - 2);
      const double t = (x - sol.x[q]) / (sol.x[q + 1] - sol.x[q]);
      store.push_back((1 - t) * sol.U[q] + t * sol.U[q + 1]);
    }
    fhat_[i] = f.transverse_hat(node.xi_tilde);
  });
}

Mat S1Operator::apply(double t, const std::vector<double>& xt_samples,
                      double* max_imag, int comp) const {
  const int mx = static_cast<int>(x1_.size());
  const int mt = static_cast<int>(xt_samples.size());
  Mat out = Mat::Zero(mx, mt);
  double imag_worst = 0.0;
  const double tfac = (d_ == 1) ? 1.0 : std::pow(2 * M_PI, -(d_ - 1));
  for (int it = 0; it < mt; ++it) {
    const double xt = xt_samples[it];
    CVec acc = CVec::Zero(mx);
    for (size_t q = 0; q < grid_.nodes.size(); ++q) {
      const QuadNode& node = grid_.nodes[q];
      const Complex dldk(-2 * grid_.theta1 * node.k, 1.0);
      Complex osc = 1.0;
      if (grid_.radial)
        osc = std::cyl_bessel_j(0, node.xi_tilde(0) * std::abs(xt));
      else if (d_ >= 2)
        osc = std::exp(Complex(0, node.xi_tilde(0) * xt));
      const Complex phase =
          std::exp(node.lambda * t) * dldk * osc * fhat_[q] * node.weight();
      for (int ix = 0; ix < mx; ++ix) acc(ix) += phase * uhat_[q][ix](comp);
    }
    acc *= tfac / Complex(0, 2 * M_PI);
    for (int ix = 0; ix < mx; ++ix) {
      out(ix, it) = acc(ix).real();
      imag_worst = std::max(imag_worst, std::abs(acc(ix).imag()));
    }
  }
  if (max_imag) *max_imag = imag_worst;
  return out;
}

double S1Operator::norm_l2(double t) const {
  // Parseval in x~: |U|_L2^2 = (2 pi)^{-(d-1)} int |V(xi, .)|_L2^2 dxi
  // with V = hhat(xi)/(2 pi i) * contour integral of e^{lt} uhat dlambda.
  std::map<double, std::pair<CMat, double>> groups;  // xi -> (V, w_xi)
  const int mx = static_cast<int>(x1_.size());
  for (size_t q = 0; q < grid_.nodes.size(); ++q) {
    const QuadNode& node = grid_.nodes[q];
    const double key = node.xi_tilde.size() ? node.xi_tilde(0) : 0.0;
    auto [it, fresh] = groups.try_emplace(
        key, std::make_pair(CMat::Zero(mx, n_), node.w_xi));
    (void)fresh;
    const Complex dldk(-2 * grid_.theta1 * node.k, 1.0);
    const Complex phase = std::exp(node.lambda * t) * dldk * fhat_[q] * node.w_k;
    for (int ix = 0; ix < mx; ++ix)
      it->second.first.row(ix) += phase * uhat_[q][ix].transpose();
  }
  double total = 0.0;
  const double hx = x1_[1] - x1_[0];
  const double tfac = (d_ == 1) ? 1.0 : std::pow(2 * M_PI, -(d_ - 1));
  for (auto& [key, vw] : groups) {
    auto& [v, wxi] = vw;
    const double l2sq = v.squaredNorm() * hx / std::pow(2 * M_PI, 2);
    total += tfac * wxi * l2sq;
  }
  return std::sqrt(total);
}

double S1Operator::norm_linf(double t, int nxt, double xt_max) const {
  std::vector<double> xts = linear_grid(-xt_max, xt_max, nxt);
  if (grid_.radial) xts = linear_grid(0.0, xt_max, nxt);
  double worst = 0.0;
  for (int c = 0; c < n_; ++c)
    worst = std::max(worst, apply(t, xts, nullptr, c).cwiseAbs().maxCoeff());
  return worst;
}

double theoretical_decay_exponent(double theorem, int d, double p) {
  const double pinf = std::isinf(p) ? 1.0 : 1.0 / p;
  if (theorem >= 1.65 && theorem <= 1.75)  // H5 route
    return 0.5 * (d - 1) * (1.0 - pinf);
  return 0.5 * (d - 1) * (1.0 - pinf) - 0.25;
}

DecayReport decay_rate_fit(const std::vector<double>& times,
                           const std::vector<double>& norms, double p,
                           double theorem, int d, double t_min) {
  DecayReport rep;
  rep.t_min = t_min;
  rep.theoretical = theoretical_decay_exponent(theorem, d, p);
  std::vector<double> lx, ly;
  for (size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || norms[i] <= 0) continue;
    rep.times.push_back(times[i]);
    rep.norms.push_back(norms[i]);
    lx.push_back(std::log(1.0 + times[i]));
    ly.push_back(std::log(norms[i]));
  }
  if (rep.times.size() < 4 ||
      rep.times.back() / std::max(rep.times.front(), 1e-12) < 10.0)
    throw WindowTooShort("decay fit needs a decade of t beyond the transient");
  // >= 8 points per decade
  const double decades = std::log10(rep.times.back() / rep.times.front());
  if (static_cast<double>(rep.times.size()) < 8.0 * decades) {
    rep.note = "sparse sampling";
  }
  rep.fit = fit_line(lx, ly);
  const double e_meas = -rep.fit.slope;
  rep.verdict = (e_meas >= rep.theoretical - rep.tolerance) ? Verdict::Pass
                                                            : Verdict::Fail;
  return rep;
}

}  // namespace shockspec
