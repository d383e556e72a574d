#include "shockspec/profile.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "shockspec/errors.hpp"
#include "shockspec/ode.hpp"
#include "shockspec/util.hpp"

namespace shockspec {

namespace {

// Reduced profile field on the connection manifold {F1_I(U) = F1_I(U-)}:
//   U' = Z(U) y,   [b1 b2] Z y = g_II(U),   g(U) = F1(U) - F1(U-),
// where Z spans ker(dF1_I).  For r = n this is U' = B11(U)^{-1} g(U).
std::function<Vec(const Vec&)> make_profile_field(const SystemModel& model,
                                                  const Endstates& es) {
  const int r = model.r, p = model.n - model.r;
  const Vec f_minus = model.flux_at(0, es.u_minus);
  Vec orient = es.u_plus - es.u_minus;
  if (orient.norm() < 1e-12) orient = Vec::Ones(model.n);
  return [&model, f_minus, orient, r, p](const Vec& u) -> Vec {
    const Vec g = model.flux_at(0, u) - f_minus;
    const Mat b = model.visc(0, 0, u);
    if (p == 0) {
      return b.partialPivLu().solve(g);
    }
    const Mat c = model.jac(0, u).topRows(p);  // d g_I
    Eigen::JacobiSVD<Mat> svd(c, Eigen::ComputeFullV);
    Mat z = svd.matrixV().rightCols(r);
    // orient the kernel frame consistently along the connection
    if (r == 1 && z.col(0).dot(orient) < 0) z = -z;
    const Mat bz = b.bottomRows(r) * z;  // r x r
    const Vec y = bz.partialPivLu().solve(g.tail(r));
    return z * y;
  };
}

struct OrbitPoint {
  double x;
  Vec u;
};

// integrate the field collecting dense output until a fixed x
std::vector<OrbitPoint> sweep(const std::function<Vec(const Vec&)>& field,
                              const Vec& u0, double x0, double x1, double tol) {
  std::vector<OrbitPoint> pts;
  OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol;
  opt.h_init = 1e-4;
  integrate_ode<Vec>(
      [&](double, const Vec& u) { return field(u); }, x0, x1, u0, opt,
      [&](double x, const Vec& u) { pts.push_back({x, u}); });
  return pts;
}

// first x >= x0 where component `comp` crosses `value`
double find_section(const std::function<Vec(const Vec&)>& field, const Vec& u0,
                    int comp, double value, double direction, double max_x,
                    Vec* state_out) {
  const auto pts = sweep(field, u0, 0.0, direction * max_x, 1e-12);
  for (size_t i = 1; i < pts.size(); ++i) {
    const double a = pts[i - 1].u(comp) - value, b = pts[i].u(comp) - value;
    if (a == 0.0 || a * b < 0) {
      // secant refinement from the bracketing node
      double xa = pts[i - 1].x, xb = pts[i].x;
      Vec ua = pts[i - 1].u;
      for (int it = 0; it < 60; ++it) {
        const double xm = 0.5 * (xa + xb);
        Vec um = integrate_ode<Vec>(
            [&](double, const Vec& u) { return field(u); }, xa, xm, ua);
        if ((um(comp) - value) * a >= 0) {
          xa = xm;
          ua = um;
        } else {
          xb = xm;
        }
        if (std::abs(xb - xa) < 1e-13 * (1 + std::abs(xa))) break;
      }
      if (state_out) *state_out = ua;
      return xa;
    }
  }
  throw NoConnection("orbit never reaches the phase section");
}

}  // namespace

Vec rankine_hugoniot_residual(const SystemModel& model, const Endstates& es) {
  return model.flux_at(0, es.u_plus) - model.flux_at(0, es.u_minus);
}

Vec ShockProfile::at(double x) const {
  if (grid.empty()) throw Error("profile: empty grid");
  if (x <= grid.front()) return values.col(0);
  if (x >= grid.back()) return values.col(size() - 1);
  const int i = nearest_node(x);
  const double x0 = grid[i], x1 = grid[i + 1], h = x1 - x0;
  const double t = (x - x0) / h;
  // cubic Hermite with the exact node derivatives
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * values.col(i) + h10 * h * derivative.col(i) +
         h01 * values.col(i + 1) + h11 * h * derivative.col(i + 1);
}

Vec ShockProfile::derivative_at(double x) const {
  if (field) return field(at(x));
  if (x <= grid.front()) return derivative.col(0);
  if (x >= grid.back()) return derivative.col(size() - 1);
  const int i = nearest_node(x);
  const double x0 = grid[i], x1 = grid[i + 1], h = x1 - x0;
  const double t = (x - x0) / h;
  const double d00 = (6 * t * t - 6 * t) / h;
  const double d10 = 3 * t * t - 4 * t + 1;
  const double d01 = (6 * t - 6 * t * t) / h;
  const double d11 = 3 * t * t - 2 * t;
  return d00 * values.col(i) + d10 * derivative.col(i) + d01 * values.col(i + 1) +
         d11 * derivative.col(i + 1);
}

int ShockProfile::nearest_node(double x) const {
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  int i = static_cast<int>(it - grid.begin()) - 1;
  return std::clamp(i, 0, size() - 2);
}

ShockProfile ShockProfile::constant(const SystemModel& model, const Vec& state,
                                    double L, int nodes) {
  ShockProfile p;
  p.L = L;
  p.grid = linear_grid(-L, L, nodes);
  p.values = state.replicate(1, nodes);
  p.derivative = Mat::Zero(model.n, nodes);
  p.u_minus = state;
  p.u_plus = state;
  p.decay_rate = 1.0;
  p.residual = 0.0;
  p.field = [nst = model.n](const Vec&) { return Vec::Zero(nst); };
  return p;
}

void ShockProfile::write_csv(std::ostream& os) const {
  const int nn = n();
  os << "x";
  for (int i = 1; i <= nn; ++i) os << ",u_" << i;
  for (int i = 1; i <= nn; ++i) os << ",du_" << i;
  os << "\n";
  for (int j = 0; j < size(); ++j) {
    os << format_double(grid[j]);
    for (int i = 0; i < nn; ++i) os << "," << format_double(values(i, j));
    for (int i = 0; i < nn; ++i) os << "," << format_double(derivative(i, j));
    os << "\n";
  }
}

ShockProfile ShockProfile::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("profile csv: empty");
  const int ncols = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  const int n = (ncols - 1) / 2;
  std::vector<double> xs;
  std::vector<Vec> us, dus;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (static_cast<int>(row.size()) != ncols)
      throw ParseError("profile csv: bad row width");
    xs.push_back(row[0]);
    Vec u(n), du(n);
    for (int i = 0; i < n; ++i) u(i) = row[1 + i];
    for (int i = 0; i < n; ++i) du(i) = row[1 + n + i];
    us.push_back(u);
    dus.push_back(du);
  }
  ShockProfile p;
  p.grid = xs;
  p.values.resize(n, xs.size());
  p.derivative.resize(n, xs.size());
  for (size_t j = 0; j < xs.size(); ++j) {
    p.values.col(j) = us[j];
    p.derivative.col(j) = dus[j];
  }
  p.L = std::max(std::abs(xs.front()), std::abs(xs.back()));
  p.u_minus = us.front();
  p.u_plus = us.back();
  return p;
}

ShockProfile solve_profile(const SystemModel& model, const Endstates& es,
                           const ProfileOptions& opt) {
  const int n = model.n, r = model.r, p = n - r;
  const Vec rh = rankine_hugoniot_residual(model, es);
  const double rh_scale = std::max(1.0, model.flux_at(0, es.u_minus).norm());
  if (rh.norm() > 1e-8 * rh_scale)
    throw RHViolated("jump residual " + std::to_string(rh.norm()));
  classify_shock(model, es);  // precondition; throws on degeneracy

  auto field = make_profile_field(model, es);
  const double phase =
      std::isnan(opt.phase_value) ? 0.5 * (es.u_minus(0) + es.u_plus(0))
                                  : opt.phase_value;

  // locate the state W0 on the connection with u_1(0) = phase
  Vec w0;
  if (r == 1 || n == 1) {
    // Newton on {g_I(U) = 0, u_1 = phase}
    w0 = 0.5 * (es.u_minus + es.u_plus);
    const Vec f_minus = model.flux_at(0, es.u_minus);
    for (int it = 0; it < 100; ++it) {
      Vec res(n);
      Mat jac(n, n);
      if (p > 0) {
        res.head(p) = (model.flux_at(0, w0) - f_minus).head(p);
        jac.topRows(p) = model.jac(0, w0).topRows(p);
      }
      res(p) = w0(0) - phase;
      jac.row(p).setZero();
      jac(p, 0) = 1.0;
      if (res.norm() < 1e-13) break;
      w0 -= jac.partialPivLu().solve(res);
    }
  } else if (p == 0) {
    // two-sided shooting: leave U- along its unstable directions, U+ along
    // its stable ones, match on the section u_1 = phase
    auto eig_dirs = [&](const Vec& u, bool unstable) {
      const Mat j = model.visc(0, 0, u).partialPivLu().solve(model.jac(0, u));
      Eigen::EigenSolver<Mat> esv(j);
      std::vector<Vec> dirs;
      for (int i = 0; i < n; ++i) {
        const double re = esv.eigenvalues()(i).real();
        if ((unstable && re > 1e-10) || (!unstable && re < -1e-10)) {
          Vec v = esv.eigenvectors().col(i).real();
          if (v.norm() < 1e-12) v = esv.eigenvectors().col(i).imag();
          dirs.push_back(v.normalized());
        }
      }
      return dirs;
    };
    const auto um_dirs = eig_dirs(es.u_minus, true);
    const auto up_dirs = eig_dirs(es.u_plus, false);
    if (um_dirs.empty() || up_dirs.empty())
      throw NoConnection("no exit/entry directions at the endstates");
    const Vec axis = (es.u_plus - es.u_minus).normalized();
    auto pick_base = [&](const std::vector<Vec>& ds, double sgn) {
      Vec best = ds[0];
      double bd = -2;
      for (const Vec& v : ds) {
        const double dd = sgn * v.dot(axis);
        if (std::abs(dd) > bd) {
          bd = std::abs(dd);
          best = dd >= 0 ? v : Vec(-v);
        }
      }
      return best;
    };
    const double eps = 1e-7 * (es.u_plus - es.u_minus).norm();
    auto section_state = [&](const Vec& base, double sgn, const Vec& coeffs,
                             const std::vector<Vec>& ds) {
      Vec dir = pick_base(ds, sgn);
      int ci = 0;
      for (const Vec& v : ds)
        if ((v - dir).norm() > 1e-9 && (v + dir).norm() > 1e-9 && ci < coeffs.size())
          dir += coeffs(ci++) * v;
      dir.normalize();
      Vec out(n);
      auto f2 = field;
      if (sgn < 0) f2 = [field](const Vec& u) { return Vec(-field(u)); };
      find_section(f2, base + eps * dir, 0, phase, +1.0, 4.0 * opt.L_cap, &out);
      return out;
    };
    const int nm = static_cast<int>(um_dirs.size()) - 1;
    const int np2 = static_cast<int>(up_dirs.size()) - 1;
    Vec a = Vec::Zero(nm + np2);
    Vec left, right;
    for (int it = 0; it < 30; ++it) {
      left = section_state(es.u_minus, +1.0, a.head(nm), um_dirs);
      right = section_state(es.u_plus, -1.0, a.tail(np2), up_dirs);
      Vec mis = (left - right).tail(n - 1);
      if (mis.norm() < 1e-9) break;
      if (a.size() == 0)
        throw NoConnection("section mismatch " + std::to_string(mis.norm()) +
                           " with no shooting freedom");
      // Gauss-Newton on the shooting coefficients
      Mat J(n - 1, a.size());
      const double h = 1e-6;
      for (int c = 0; c < a.size(); ++c) {
        Vec ap = a;
        ap(c) += h;
        const Vec lp = section_state(es.u_minus, +1.0, ap.head(nm), um_dirs);
        const Vec rp = section_state(es.u_plus, -1.0, ap.tail(np2), up_dirs);
        J.col(c) = ((lp - rp).tail(n - 1) - mis) / h;
      }
      const Mat JtJ = J.transpose() * J + 1e-12 * Mat::Identity(a.size(), a.size());
      a -= JtJ.ldlt().solve(J.transpose() * mis);
      if (it == 29) throw NoConnection("shooting iteration did not converge");
    }
    w0 = left;
  } else {
    // planar profiles of the multi-d gas reduce to the d=1 system
    if (model.name == "isentropic") {
      SystemModel m1 = make_isentropic(1);
      Endstates e1;
      e1.u_minus = Vec(2);
      e1.u_minus << es.u_minus(0), es.u_minus(1);
      e1.u_plus = Vec(2);
      e1.u_plus << es.u_plus(0), es.u_plus(1);
      ShockProfile p1 = solve_profile(m1, e1, opt);
      ShockProfile out;
      out.grid = p1.grid;
      out.L = p1.L;
      out.decay_rate = p1.decay_rate;
      out.residual = p1.residual;
      out.u_minus = es.u_minus;
      out.u_plus = es.u_plus;
      const int m = p1.size();
      out.values = Mat::Zero(n, m);
      out.derivative = Mat::Zero(n, m);
      out.values.topRows(2) = p1.values;
      out.derivative.topRows(2) = p1.derivative;
      out.field = [f1 = p1.field, n](const Vec& u) {
        Vec u1(2);
        u1 << u(0), u(1);
        Vec g = Vec::Zero(n);
        g.head(2) = f1(u1);
        return g;
      };
      return out;
    }
    throw NoConnection("unsupported reduction: n-r > 0 with r > 1");
  }

  // integrate from W0 both ways until the endstate gap closes
  auto reach = [&](double sgn, const Vec& target) {
    std::vector<OrbitPoint> all{{0.0, w0}};
    double x = 0.0;
    Vec u = w0;
    double L = opt.L > 0 ? opt.L : opt.L_cap;
    while (std::abs(x) < L) {
      const double step = std::min(0.5, L - std::abs(x));
      auto seg = sweep(field, u, x, x + sgn * step, opt.ode_tol);
      all.insert(all.end(), seg.begin() + 1, seg.end());
      x = all.back().x;
      u = all.back().u;
      if (opt.L == 0 && (u - target).norm() < opt.endstate_tol) break;
      if ((u - target).norm() >
          2.0 * (w0 - target).norm() + 1.0)
        throw NoConnection("orbit diverges from the endstate");
    }
    return all;
  };
  auto right = reach(+1.0, es.u_plus);
  auto left = reach(-1.0, es.u_minus);
  double L = std::max(std::abs(left.back().x), std::abs(right.back().x));
  if (opt.L > 0) L = opt.L;
  L = std::min(L, opt.L_cap);

  if ((right.back().u - es.u_plus).norm() > 10 * opt.endstate_tol &&
      std::abs(right.back().x) >= opt.L_cap - 0.51)
    throw NoConnection("endstate gap " +
                       std::to_string((right.back().u - es.u_plus).norm()) +
                       " at the cap length");

  // resample on a uniform fine grid (exact derivatives from the field)
  ShockProfile prof;
  prof.L = L;
  const double h = 0.005;
  const int m = 2 * static_cast<int>(std::ceil(L / h)) + 1;
  prof.grid = linear_grid(-L, L, m);
  prof.values.resize(n, m);
  prof.derivative.resize(n, m);
  prof.field = field;
  prof.u_minus = es.u_minus;
  prof.u_plus = es.u_plus;
  // march once through the sorted nodes in each direction
  {
    const int mid = (m - 1) / 2;
    Vec u = w0;
    prof.values.col(mid) = u;
    for (int i = mid + 1; i < m; ++i) {
      u = integrate_ode<Vec>([&](double, const Vec& v) { return field(v); },
                             prof.grid[i - 1], prof.grid[i], u,
                             OdeOptions{opt.ode_tol, opt.ode_tol, 1e-4, 1e-14});
      prof.values.col(i) = u;
    }
    u = w0;
    for (int i = mid - 1; i >= 0; --i) {
      u = integrate_ode<Vec>([&](double, const Vec& v) { return field(v); },
                             prof.grid[i + 1], prof.grid[i], u,
                             OdeOptions{opt.ode_tol, opt.ode_tol, 1e-4, 1e-14});
      prof.values.col(i) = u;
    }
    for (int i = 0; i < m; ++i)
      prof.derivative.col(i) = field(prof.values.col(i));
  }

  // exponential approach rate from the outer quarters
  {
    std::vector<double> xs, ys;
    for (int i = 0; i < m; ++i) {
      const double x = prof.grid[i];
      if (std::abs(x) < 0.5 * L || std::abs(x) > 0.95 * L) continue;
      const Vec& target = x > 0 ? es.u_plus : es.u_minus;
      const double gap = (prof.values.col(i) - target).norm();
      if (gap > 1e-280) {
        xs.push_back(std::abs(x));
        ys.push_back(std::log(gap));
      }
    }
    const LinearFit f = fit_line(xs, ys);
    prof.decay_rate = -f.slope;
    if (!(prof.decay_rate > 0))
      throw NoConnection("fitted decay rate not positive");
  }

  // residual of the unreduced integrated profile equation
  {
    const Vec f_minus = model.flux_at(0, es.u_minus);
    double worst = 0.0;
    for (int i = 0; i < m; i += 7) {
      const Vec u = prof.values.col(i);
      const Vec res = model.visc(0, 0, u) * prof.derivative.col(i) -
                      (model.flux_at(0, u) - f_minus);
      worst = std::max(worst, res.norm());
    }
    prof.residual = worst;
  }
  return prof;
}

TangentFields tangent_fields(const SystemModel& model, const ShockProfile& prof,
                             const ShockClass& cls) {
  const int n = model.n, r = model.r, p = n - r;
  TangentFields tf;
  tf.l = cls.l;

  // coefficient of the linearized profile equation phi' = M(x) phi:
  //   rows I:  d/dx [C(x) phi] = 0 with C = (dF1)_I,
  //   rows II: [b1 b2] phi' = (dF1 phi)_II - ([dB11 phi] Ubar')_II
  auto coeff = [&](double x) {
    const Vec u = prof.at(x);
    const Vec du = prof.derivative_at(x);
    const Mat a = model.jac(0, u);
    Mat lhs(n, n), rhs(n, n);
    if (p > 0) {
      lhs.topRows(p) = a.topRows(p);
      // C'(x) phi: directional derivative of dF1 rows I along the profile
      const double h = 1e-6 * std::max(1.0, u.norm());
      const Mat ap = model.jac(0, u + h * du / std::max(1e-30, du.norm()));
      const Mat am = model.jac(0, u - h * du / std::max(1e-30, du.norm()));
      const Mat cp = (ap - am).topRows(p) / (2 * h) * std::max(1e-30, du.norm());
      rhs.topRows(p) = -cp;
    }
    lhs.bottomRows(r) = model.visc(0, 0, u).bottomRows(r);
    Mat low = a.bottomRows(r);
    for (int b = 0; b < n; ++b) {
      Vec e = Vec::Zero(n);
      e(b) = 1.0;
      low.col(b) -= (model.visc_dir_deriv(0, 0, u, e) * du).tail(r);
    }
    rhs.bottomRows(r) = low;
    return Mat(lhs.partialPivLu().solve(rhs));
  };

  const double L = prof.L;
  const int m = 801;
  tf.grid = linear_grid(-L, L, m);

  // frames of decaying solutions from each side, QR-renormalized, to x=0
  auto limit_frame = [&](double x, bool stable) {
    const Mat M = coeff(x);
    Eigen::EigenSolver<Mat> es(M);
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      const double re = es.eigenvalues()(i).real();
      if ((stable && re < -1e-9) || (!stable && re > 1e-9)) idx.push_back(i);
    }
    CMat f(n, idx.size());
    for (size_t c = 0; c < idx.size(); ++c) f.col(c) = es.eigenvectors().col(idx[c]);
    // collapse complex pairs to a real orthonormal frame
    Mat fr(n, 2 * idx.size());
    for (size_t c = 0; c < idx.size(); ++c) {
      fr.col(2 * c) = f.col(c).real();
      fr.col(2 * c + 1) = f.col(c).imag();
    }
    Eigen::ColPivHouseholderQR<Mat> qr(fr);
    qr.setThreshold(1e-9);
    const int rank = static_cast<int>(qr.rank());
    Mat q = qr.householderQ();
    return Mat(q.leftCols(rank));
  };

  auto march = [&](Mat y, double from, double to) {
    // integrate in unit segments, renormalizing the frame by QR
    const bool fwd = to > from;
    double x = from;
    while ((fwd && x < to - 1e-12) || (!fwd && x > to + 1e-12)) {
      const double xn = fwd ? std::min(x + 1.0, to) : std::max(x - 1.0, to);
      y = integrate_ode<Mat>(
          [&](double xx, const Mat& v) { return Mat(coeff(xx) * v); }, x, xn, y,
          OdeOptions{1e-11, 1e-13, 1e-3, 1e-14});
      Eigen::HouseholderQR<Mat> qr(y);
      y = Mat(qr.householderQ()).leftCols(y.cols());
      x = xn;
    }
    return y;
  };

  const Mat fplus = limit_frame(L, true);
  const Mat fminus = limit_frame(-L, false);
  const Mat sp0 = march(fplus, L, 0.0);
  const Mat sm0 = march(fminus, -L, 0.0);

  // bounded solutions = intersection of the two spans at x=0
  Mat join(n, sp0.cols() + sm0.cols());
  join << sp0, -sm0;
  Eigen::JacobiSVD<Mat> svd(join, Eigen::ComputeFullV);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) >= 1e-7) ++rank;
  const int nullity = static_cast<int>(join.cols()) - rank;
  if (nullity != cls.l)
    throw DimensionMismatch("bounded linearized solutions: found " +
                            std::to_string(nullity) + ", expected " +
                            std::to_string(cls.l));

  // build the fields: translation mode first, then the remaining null
  // directions re-integrated from matched initial data at x=0
  tf.phi.clear();
  {
    Mat phi1(n, m), dphi1(n, m);
    for (int i = 0; i < m; ++i) {
      phi1.col(i) = prof.derivative_at(tf.grid[i]);
      dphi1.col(i) = coeff(tf.grid[i]) * phi1.col(i);
    }
    tf.phi.push_back(phi1);
    tf.dphi.push_back(dphi1);
  }
  for (int k = 0; k < cls.l - 1; ++k) {
    const Vec nv = svd.matrixV().col(svd.matrixV().cols() - 1 - k);
    Vec init = sp0 * nv.head(sp0.cols());
    // orthogonalize against the translation mode at x=0
    const Vec tr0 = prof.derivative_at(0.0);
    init -= tr0 * (tr0.dot(init) / tr0.squaredNorm());
    if (init.norm() < 1e-10) continue;
    init.normalize();
    // re-integrate toward both ends; decaying by construction
    Mat phi(n, m), dphi(n, m);
    Vec u = init;
    const int mid = (m - 1) / 2;
    phi.col(mid) = u;
    double scale_log = 0.0;
    for (int i = mid + 1; i < m; ++i) {
      u = integrate_ode<Vec>(
          [&](double xx, const Vec& v) { return Vec(coeff(xx) * v); },
          tf.grid[i - 1], tf.grid[i], u, OdeOptions{1e-11, 1e-14, 1e-3, 1e-15});
      phi.col(i) = u * std::exp(scale_log);
      if (u.norm() < 1e-4) {
        scale_log += std::log(u.norm());
        u /= u.norm();
      }
    }
    u = init;
    scale_log = 0.0;
    for (int i = mid - 1; i >= 0; --i) {
      u = integrate_ode<Vec>(
          [&](double xx, const Vec& v) { return Vec(coeff(xx) * v); },
          tf.grid[i + 1], tf.grid[i], u, OdeOptions{1e-11, 1e-14, 1e-3, 1e-15});
      phi.col(i) = u * std::exp(scale_log);
      if (u.norm() < 1e-4) {
        scale_log += std::log(u.norm());
        u /= u.norm();
      }
    }
    for (int i = 0; i < m; ++i) dphi.col(i) = coeff(tf.grid[i]) * phi.col(i);
    tf.phi.push_back(phi);
    tf.dphi.push_back(dphi);
  }
  tf.l = static_cast<int>(tf.phi.size());
  if (tf.l != cls.l)
    throw DimensionMismatch("constructed " + std::to_string(tf.l) +
                            " tangent fields, expected " + std::to_string(cls.l));
  return tf;
}

}  // namespace shockspec
