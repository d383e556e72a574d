#include "shockspec/bvp.hpp"

#include <cmath>

#include "shockspec/errors.hpp"
#include "shockspec/ode.hpp"

namespace shockspec {

CVec BvpSolution::at(double xq) const {
  if (x.empty()) throw Error("bvp: empty solution");
  if (xq <= x.front()) return u.front();
  if (xq >= x.back()) return u.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const int i = static_cast<int>(it - x.begin()) - 1;
  const double h = x[i + 1] - x[i];
  const double t = (xq - x[i]) / h;
  // cubic Hermite from stored derivatives
  const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
  const double h10 = t * (1 - t) * (1 - t);
  const double h01 = t * t * (3 - 2 * t);
  const double h11 = t * t * (t - 1);
  return h00 * u[i] + (h10 * h) * du[i] + h01 * u[i + 1] + (h11 * h) * du[i + 1];
}

BvpSolution solve_linear_bvp(const BvpProblem& pb, const BvpOptions& opt) {
  const int s = static_cast<int>(pb.Ba.cols());
  if (pb.Ba.rows() + pb.Bb.rows() != s)
    throw Error("bvp: boundary row count mismatch");
  const double len = pb.b - pb.a;
  const int m = std::max(opt.min_segments,
                         static_cast<int>(std::ceil(len / opt.segment_length)));
  const double h = len / m;

  // per-segment fundamental matrix and particular solution
  std::vector<CMat> T(m);
  std::vector<CVec> r(m);
  for (int i = 0; i < m; ++i) {
    const double x0 = pb.a + i * h, x1 = x0 + h;
    CMat aug = CMat::Zero(s, s + 1);
    aug.leftCols(s).setIdentity();
    aug = integrate_ode<CMat>(
        [&](double x, const CMat& y) {
          const CMat ax = pb.A(x);
          CMat out(s, s + 1);
          out.leftCols(s) = ax * y.leftCols(s);
          out.col(s) = ax * y.col(s);
          if (pb.g) out.col(s) += pb.g(x);
          return out;
        },
        x0, x1, aug, OdeOptions{opt.ode_rtol, opt.ode_atol, 1e-3, 1e-14});
    T[i] = aug.leftCols(s);
    r[i] = aug.col(s);
  }

  // assemble: unknowns (u_0 .. u_m)
  const int nun = s * (m + 1);
  CMat A = CMat::Zero(nun, nun);
  CVec rhs = CVec::Zero(nun);
  int row = 0;
  A.block(0, 0, pb.Ba.rows(), s) = pb.Ba;
  rhs.head(pb.Ba.rows()) = pb.beta_a;
  row += static_cast<int>(pb.Ba.rows());
  for (int i = 0; i < m; ++i) {
    A.block(row, s * i, s, s) = -T[i];
    A.block(row, s * (i + 1), s, s) = CMat::Identity(s, s);
    rhs.segment(row, s) = r[i];
    row += s;
  }
  A.block(row, s * m, pb.Bb.rows(), s) = pb.Bb;
  rhs.segment(row, pb.Bb.rows()) = pb.beta_b;

  Eigen::PartialPivLU<CMat> lu(A);
  const double rc = lu.rcond();
  if (!(rc > 1.0 / opt.cond_limit))
    throw NearSpectrum("shooting system 1/rcond = " + std::to_string(1.0 / rc));
  const CVec sol = lu.solve(rhs);

  // dense output by re-integration from the node values
  BvpSolution out;
  out.rcond = rc;
  const int per = std::max(2, static_cast<int>(std::ceil(h / opt.output_spacing)));
  for (int i = 0; i < m; ++i) {
    const double x0 = pb.a + i * h;
    CVec u = sol.segment(s * i, s);
    for (int q = 0; q < per; ++q) {
      const double xa = x0 + h * q / per, xb = x0 + h * (q + 1) / per;
      out.x.push_back(xa);
      out.u.push_back(u);
      CVec d = pb.A(xa) * u;
      if (pb.g) d += pb.g(xa);
      out.du.push_back(d);
      u = integrate_ode<CVec>(
          [&](double x, const CVec& y) {
            CVec d2 = pb.A(x) * y;
            if (pb.g) d2 += pb.g(x);
            return d2;
          },
          xa, xb, u, OdeOptions{opt.ode_rtol, opt.ode_atol, 1e-3, 1e-14});
    }
  }
  out.x.push_back(pb.b);
  out.u.push_back(sol.tail(s));
  CVec d = pb.A(pb.b) * sol.tail(s);
  if (pb.g) d += pb.g(pb.b);
  out.du.push_back(d);
  return out;
}

}  // namespace shockspec
