#include "shockspec/evolve.hpp"

#include <Eigen/Sparse>
#include <cmath>

#include "shockspec/errors.hpp"
#include "shockspec/symbol.hpp"
#include "shockspec/util.hpp"

namespace shockspec {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Trip = Eigen::Triplet<double>;

struct ZetaWeights {
  double e2, einf;
};

ZetaWeights zeta_weights(int d) {
  if (d >= 3) return {(d - 2) / 4.0, (d - 1) / 2.0 - 0.25};
  return {(d - 1) / 4.0, (d - 1) / 2.0};
}

struct GridInfo {
  std::vector<double> x1, xt;
  double h1, ht;
  int n, nx1, nxt;
  int idx(int c, int i1, int it) const { return c + n * (i1 + nx1 * it); }
};

// linearized viscous operator in divergence form, Dirichlet-0 in x1,
// periodic in xt; coefficients depend on x1 only
SpMat assemble_viscous(const SystemModel& model, const FirstOrderSymbol& sym,
                       const GridInfo& g) {
  std::vector<Trip> trips;
  const int d = model.d;
  auto B = [&](int j, int k, double x) { return sym.coeffs_at(x).B[j][k]; };
  for (int it = 0; it < g.nxt; ++it) {
    const int itm = (it + g.nxt - 1) % g.nxt, itp = (it + 1) % g.nxt;
    for (int i1 = 0; i1 < g.nx1; ++i1) {
      // (B11 U_x1)_x1
      for (int side = 0; side < 2; ++side) {
        const int in = i1 + (side ? 1 : -1);
        if (in < 0 || in >= g.nx1) continue;  // ghost value 0
        const double xf = 0.5 * (g.x1[i1] + g.x1[in]);
        const Mat b = B(0, 0, xf) / (g.h1 * g.h1);
        for (int a = 0; a < g.n; ++a)
          for (int bcol = 0; bcol < g.n; ++bcol) {
            if (b(a, bcol) == 0.0) continue;
            trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, in, it),
                               b(a, bcol));
            trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, i1, it),
                               -b(a, bcol));
          }
      }
      if (d >= 2) {
        // (B22 U_xt)_xt, periodic
        const Mat b = B(1, 1, g.x1[i1]) / (g.ht * g.ht);
        for (int a = 0; a < g.n; ++a)
          for (int bcol = 0; bcol < g.n; ++bcol) {
            if (b(a, bcol) == 0.0) continue;
            trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, i1, itp),
                               b(a, bcol));
            trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, i1, itm),
                               b(a, bcol));
            trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, i1, it),
                               -2 * b(a, bcol));
          }
        // cross blocks: d1(B12 U_xt) + dt(B21 U_x1), centered
        for (int s1 = -1; s1 <= 1; s1 += 2) {
          const int in = i1 + s1;
          if (in < 0 || in >= g.nx1) continue;
          const double xf = 0.5 * (g.x1[i1] + g.x1[in]);
          const Mat b12 = B(0, 1, xf) * (s1 / (2.0 * g.h1 * g.ht));
          for (int a = 0; a < g.n; ++a)
            for (int bcol = 0; bcol < g.n; ++bcol) {
              if (b12(a, bcol) == 0.0) continue;
              // U_xt at the neighbour column, centered
              trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, in, itp),
                                 0.5 * b12(a, bcol));
              trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, in, itm),
                                 -0.5 * b12(a, bcol));
              trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, i1, itp),
                                 0.5 * b12(a, bcol));
              trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, i1, itm),
                                 -0.5 * b12(a, bcol));
            }
        }
        for (int st = -1; st <= 1; st += 2) {
          const int itn = st > 0 ? itp : itm;
          const Mat b21 = B(1, 0, g.x1[i1]) * (st / (2.0 * g.h1 * g.ht));
          for (int a = 0; a < g.n; ++a)
            for (int bcol = 0; bcol < g.n; ++bcol) {
              if (b21(a, bcol) == 0.0) continue;
              for (int s1 = -1; s1 <= 1; s1 += 2) {
                const int in = i1 + s1;
                if (in < 0 || in >= g.nx1) continue;
                trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, in, itn),
                                   0.5 * s1 * b21(a, bcol));
                trips.emplace_back(g.idx(a, i1, it), g.idx(bcol, in, it),
                                   0.5 * s1 * b21(a, bcol));
              }
            }
        }
      }
    }
  }
  SpMat D(g.n * g.nx1 * g.nxt, g.n * g.nx1 * g.nxt);
  D.setFromTriplets(trips.begin(), trips.end());
  return D;
}

// advective part -sum_j d_j (A^j U), central flux differences
struct AdvOp {
  const GridInfo* g;
  std::vector<Mat> a1_face;  // at x1 faces i+1/2, size nx1+1
  std::vector<Mat> at_cell;  // A^2 at cells
  int d;

  void apply(const Vec& q, Vec& out) const {
    const auto& gr = *g;
    out.setZero();
    for (int it = 0; it < gr.nxt; ++it) {
      const int itm = (it + gr.nxt - 1) % gr.nxt, itp = (it + 1) % gr.nxt;
      for (int i1 = 0; i1 < gr.nx1; ++i1) {
        Vec ui(gr.n), flux(gr.n);
        // x1 faces, ghost 0 outside
        for (int a = 0; a < gr.n; ++a) ui(a) = q(gr.idx(a, i1, it));
        Vec fl = Vec::Zero(gr.n), fr = Vec::Zero(gr.n);
        if (i1 > 0) {
          Vec um(gr.n);
          for (int a = 0; a < gr.n; ++a) um(a) = q(gr.idx(a, i1 - 1, it));
          fl = a1_face[i1] * (0.5 * (um + ui));
        } else {
          fl = a1_face[i1] * (0.5 * ui);
        }
        if (i1 + 1 < gr.nx1) {
          Vec up(gr.n);
          for (int a = 0; a < gr.n; ++a) up(a) = q(gr.idx(a, i1 + 1, it));
          fr = a1_face[i1 + 1] * (0.5 * (ui + up));
        } else {
          fr = a1_face[i1 + 1] * (0.5 * ui);
        }
        Vec adv = -(fr - fl) / gr.h1;
        if (d >= 2) {
          Vec um(gr.n), up(gr.n);
          for (int a = 0; a < gr.n; ++a) {
            um(a) = q(gr.idx(a, i1, itm));
            up(a) = q(gr.idx(a, i1, itp));
          }
          adv -= at_cell[i1] * ((up - um) / (2 * gr.ht));
        }
        for (int a = 0; a < gr.n; ++a) out(gr.idx(a, i1, it)) = adv(a);
      }
    }
  }
};

double grid_norm_l2(const GridInfo& g, const Vec& q) {
  return q.norm() * std::sqrt(g.h1 * (g.nxt > 1 ? g.ht : 1.0));
}

Vec grid_mass(const GridInfo& g, const Vec& q) {
  Vec m = Vec::Zero(g.n);
  for (int it = 0; it < g.nxt; ++it)
    for (int i1 = 0; i1 < g.nx1; ++i1)
      for (int a = 0; a < g.n; ++a) m(a) += q(g.idx(a, i1, it));
  return m * g.h1 * (g.nxt > 1 ? g.ht : 1.0);
}

}  // namespace

Trajectory evolve_linearized(const SystemModel& model,
                             const ShockProfile& profile, const InitialData& u0,
                             double T, const EvolveOptions& opt) {
  GridInfo g;
  g.n = model.n;
  g.nx1 = opt.nx1;
  g.nxt = model.d >= 2 ? opt.nxt : 1;
  const double X = opt.x1_max > 0 ? opt.x1_max : profile.L;
  g.x1 = linear_grid(-X, X, g.nx1);
  g.h1 = g.x1[1] - g.x1[0];
  if (g.nxt > 1) {
    g.xt.resize(g.nxt);
    g.ht = 2.0 * opt.xt_max / g.nxt;
    for (int i = 0; i < g.nxt; ++i) g.xt[i] = -opt.xt_max + i * g.ht;
  } else {
    g.xt = {0.0};
    g.ht = 1.0;
  }

  Frequency f0(Vec::Zero(model.d - 1), Complex(0, 0));
  FirstOrderSymbol sym(model, profile, f0);

  // coefficient tables
  AdvOp adv;
  adv.g = &g;
  adv.d = model.d;
  adv.a1_face.resize(g.nx1 + 1);
  for (int i = 0; i <= g.nx1; ++i) {
    const double xf = (i == 0) ? g.x1[0] - 0.5 * g.h1
                               : (i == g.nx1 ? g.x1.back() + 0.5 * g.h1
                                             : 0.5 * (g.x1[i - 1] + g.x1[i]));
    adv.a1_face[i] = sym.coeffs_at(std::clamp(xf, -X, X)).A1;
  }
  if (model.d >= 2) {
    adv.at_cell.resize(g.nx1);
    for (int i = 0; i < g.nx1; ++i)
      adv.at_cell[i] = sym.coeffs_at(g.x1[i]).Aj[0];
  }

  double amax = 1e-12;
  for (const Mat& a : adv.a1_face)
    amax = std::max(amax, a.cwiseAbs().maxCoeff() * std::sqrt((double)g.n));
  double dt = opt.dt > 0 ? opt.dt : opt.cfl * std::min(g.h1, g.ht) / amax;
  if (opt.dt > 0 && opt.dt > 1.01 * std::min(g.h1, g.ht) / amax)
    throw CFLViolation("dt " + std::to_string(opt.dt) + " above the CFL bound");

  const SpMat D = assemble_viscous(model, sym, g);
  SpMat lhs(D.rows(), D.cols()), rhsm(D.rows(), D.cols());
  {
    SpMat I(D.rows(), D.cols());
    I.setIdentity();
    lhs = I - (dt / 2) * D;
    rhsm = I + (dt / 2) * D;
  }
  Eigen::SparseLU<SpMat> solver;
  solver.compute(lhs);
  if (solver.info() != Eigen::Success)
    throw Error("viscous factorization failed");

  // initial data
  Vec q(g.n * g.nx1 * g.nxt);
  for (int it = 0; it < g.nxt; ++it)
    for (int i1 = 0; i1 < g.nx1; ++i1) {
      const Vec v = u0(g.x1[i1], g.xt[it]);
      for (int a = 0; a < g.n; ++a) q(g.idx(a, i1, it)) = v(a);
    }

  Trajectory traj;
  const Vec mass0 = grid_mass(g, q);
  const ZetaWeights zw = zeta_weights(model.d);
  Vec adv_prev(q.size()), adv_cur(q.size());
  adv.apply(q, adv_prev);
  double t = 0.0;
  double next_out = 0.0;
  auto record = [&](double tt) {
    traj.times.push_back(tt);
    traj.l2.push_back(grid_norm_l2(g, q));
    traj.linf.push_back(q.cwiseAbs().maxCoeff());
    const double z = std::pow(1 + tt, zw.e2) * traj.l2.back() +
                     std::pow(1 + tt, zw.einf) * traj.linf.back();
    traj.zeta.push_back(traj.zeta.empty() ? z : std::max(traj.zeta.back(), z));
    const Vec m = grid_mass(g, q);
    traj.mass_drift = std::max(traj.mass_drift,
                               (m - mass0).norm() / (1 + mass0.norm()));
  };
  record(0.0);
  next_out = opt.out_every;
  bool first = true;
  while (t < T - 1e-12) {
    const double step = std::min(dt, T - t);
    adv.apply(q, adv_cur);
    Vec rhs = rhsm * q;
    if (first) {
      rhs += step * adv_cur;
      first = false;
    } else {
      rhs += step * (1.5 * adv_cur - 0.5 * adv_prev);
    }
    adv_prev = adv_cur;
    q = solver.solve(rhs);
    t += step;
    ++traj.steps;
    if (q.cwiseAbs().maxCoeff() > opt.blowup_limit)
      throw BlowupDetected("|U| exceeded " + std::to_string(opt.blowup_limit) +
                           " at t=" + std::to_string(t));
    if (t >= next_out - 1e-12 || t >= T - 1e-12) {
      record(t);
      next_out += opt.out_every;
    }
  }
  traj.final_state.t = t;
  traj.final_state.x1 = g.x1;
  traj.final_state.xt = g.xt;
  traj.final_state.fields.resize(g.n, g.nx1 * g.nxt);
  for (int it = 0; it < g.nxt; ++it)
    for (int i1 = 0; i1 < g.nx1; ++i1)
      for (int a = 0; a < g.n; ++a)
        traj.final_state.fields(a, i1 + g.nx1 * it) = q(g.idx(a, i1, it));
  traj.final_state.mass = grid_mass(g, q);
  return traj;
}

Trajectory evolve_nonlinear(const SystemModel& model,
                            const ShockProfile& profile, const InitialData& u0,
                            double T, int zeta_dimension,
                            const EvolveOptions& opt) {
  if (model.d != 1)
    throw Error("nonlinear evolution is one-dimensional");
  GridInfo g;
  g.n = model.n;
  g.nx1 = opt.nx1;
  g.nxt = 1;
  const double X = opt.x1_max > 0 ? opt.x1_max : profile.L;
  g.x1 = linear_grid(-X, X, g.nx1);
  g.h1 = g.x1[1] - g.x1[0];
  g.xt = {0.0};
  g.ht = 1.0;

  // background and initial total state
  Mat base(g.n, g.nx1);
  for (int i = 0; i < g.nx1; ++i) base.col(i) = profile.at(g.x1[i]);
  Vec q(g.n * g.nx1);
  for (int i = 0; i < g.nx1; ++i) {
    const Vec v = base.col(i) + u0(g.x1[i], 0.0);
    for (int a = 0; a < g.n; ++a) q(g.idx(a, i, 0)) = v(a);
  }

  double amax = 1e-12;
  for (int i = 0; i < g.nx1; ++i) {
    Eigen::EigenSolver<Mat> es(model.jac(0, base.col(i)));
    amax = std::max(amax, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  const double dt = opt.dt > 0 ? opt.dt : opt.cfl * g.h1 / (1.5 * amax);

  Trajectory traj;
  const ZetaWeights zw = zeta_weights(zeta_dimension);
  auto perturbation = [&](const Vec& qq) {
    Mat u(g.n, g.nx1);
    for (int i = 0; i < g.nx1; ++i)
      for (int a = 0; a < g.n; ++a) u(a, i) = qq(g.idx(a, i, 0)) - base(a, i);
    return u;
  };
  const Vec mass0 = grid_mass(g, q);
  auto record = [&](double tt) {
    const Mat u = perturbation(q);
    traj.times.push_back(tt);
    traj.l2.push_back(u.norm() * std::sqrt(g.h1));
    traj.linf.push_back(u.cwiseAbs().maxCoeff());
    const double z = std::pow(1 + tt, zw.e2) * traj.l2.back() +
                     std::pow(1 + tt, zw.einf) * traj.linf.back();
    traj.zeta.push_back(traj.zeta.empty() ? z : std::max(traj.zeta.back(), z));
    const Vec m = grid_mass(g, q);
    traj.mass_drift = std::max(traj.mass_drift,
                               (m - mass0).norm() / (1 + mass0.norm()));
  };
  record(0.0);

  // face flux of the nonlinear viscous term, coefficients lagged
  auto visc_matrix = [&](const Vec& qq) {
    std::vector<Trip> trips;
    for (int i = 0; i < g.nx1; ++i) {
      for (int s = -1; s <= 1; s += 2) {
        const int in = i + s;
        if (in < 0 || in >= g.nx1) continue;
        Vec uf(g.n);
        for (int a = 0; a < g.n; ++a)
          uf(a) = 0.5 * (qq(g.idx(a, i, 0)) + qq(g.idx(a, in, 0)));
        const Mat b = model.visc(0, 0, uf) / (g.h1 * g.h1);
        for (int a = 0; a < g.n; ++a)
          for (int c = 0; c < g.n; ++c) {
            if (b(a, c) == 0.0) continue;
            trips.emplace_back(g.idx(a, i, 0), g.idx(c, in, 0), b(a, c));
            trips.emplace_back(g.idx(a, i, 0), g.idx(c, i, 0), -b(a, c));
          }
      }
    }
    SpMat D(g.n * g.nx1, g.n * g.nx1);
    D.setFromTriplets(trips.begin(), trips.end());
    return D;
  };
  auto flux_div = [&](const Vec& qq) {
    Vec out = Vec::Zero(qq.size());
    std::vector<Vec> fvals(g.nx1);
    for (int i = 0; i < g.nx1; ++i) {
      Vec ui(g.n);
      for (int a = 0; a < g.n; ++a) ui(a) = qq(g.idx(a, i, 0));
      fvals[i] = model.flux_at(0, ui);
    }
    for (int i = 0; i < g.nx1; ++i) {
      const Vec& fm = fvals[std::max(0, i - 1)];
      const Vec& fp = fvals[std::min(g.nx1 - 1, i + 1)];
      const Vec dflux = (fp - fm) / (2 * g.h1);
      for (int a = 0; a < g.n; ++a) out(g.idx(a, i, 0)) = -dflux(a);
    }
    return out;
  };

  double t = 0.0;
  double next_out = opt.out_every;
  Vec adv_prev = flux_div(q);
  bool first = true;
  SpMat I(q.size(), q.size());
  I.setIdentity();
  while (t < T - 1e-12) {
    const double step = std::min(dt, T - t);
    const SpMat D = visc_matrix(q);
    Eigen::SparseLU<SpMat> solver;
    solver.compute(SpMat(I - (step / 2) * D));
    if (solver.info() != Eigen::Success)
      throw Error("viscous factorization failed");
    const Vec adv_cur = flux_div(q);
    Vec rhs = (I + (step / 2) * D) * q;
    if (first)
      rhs += step * adv_cur;
    else
      rhs += step * (1.5 * adv_cur - 0.5 * adv_prev);
    first = false;
    adv_prev = adv_cur;
    // boundary rows pinned to the endstates
    q = solver.solve(rhs);
    for (int a = 0; a < g.n; ++a) {
      q(g.idx(a, 0, 0)) = base(a, 0);
      q(g.idx(a, g.nx1 - 1, 0)) = base(a, g.nx1 - 1);
    }
    t += step;
    ++traj.steps;
    if (q.cwiseAbs().maxCoeff() > opt.blowup_limit)
      throw BlowupDetected("nonlinear blowup at t=" + std::to_string(t));
    if (t >= next_out - 1e-12 || t >= T - 1e-12) {
      record(t);
      next_out += opt.out_every;
    }
  }
  traj.final_state.t = t;
  traj.final_state.x1 = g.x1;
  traj.final_state.xt = g.xt;
  traj.final_state.fields = perturbation(q);
  traj.final_state.mass = grid_mass(g, q);
  return traj;
}

}  // namespace shockspec
