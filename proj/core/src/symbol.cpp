#include "shockspec/symbol.hpp"

#include <cmath>

#include "shockspec/errors.hpp"

namespace shockspec {

namespace {

// directional derivative of the flux Jacobian dF^j at u along w
Mat jac_dir_deriv(const SystemModel& m, int j, const Vec& u, const Vec& w) {
  const double wn = w.norm();
  if (wn < 1e-300) return Mat::Zero(m.n, m.n);
  const double h = 1e-6 * std::max(1.0, u.norm());
  const Vec what = w / wn;
  return (m.jac(j, u + h * what) - m.jac(j, u - h * what)) / (2 * h) * wn;
}

// T^j(u, du): column b equals (dB^{j1}/dU_b) du
Mat transport_term(const SystemModel& m, int j, const Vec& u, const Vec& du) {
  Mat t = Mat::Zero(m.n, m.n);
  if (du.norm() < 1e-300) return t;
  for (int b = 0; b < m.n; ++b) {
    Vec e = Vec::Zero(m.n);
    e(b) = 1.0;
    t.col(b) = m.visc_dir_deriv(j, 0, u, e) * du;
  }
  return t;
}

}  // namespace

FirstOrderSymbol::FirstOrderSymbol(const SystemModel& model,
                                   const ShockProfile& profile, Frequency freq)
    : model_(&model), profile_(&profile), freq_(std::move(freq)) {
  if (freq_.xi_tilde.size() != model.d - 1)
    throw EvaluatorDomain("frequency dimension mismatch");
  // endstate limits: Ubar' = 0 kills every derivative coefficient
  auto limit_coeffs = [&](const Vec& u) {
    Coeffs c;
    c.A1 = model.jac(0, u);
    for (int j = 1; j < model.d; ++j) c.Aj.push_back(model.jac(j, u));
    c.B.assign(model.d, std::vector<Mat>(model.d));
    for (int j = 0; j < model.d; ++j)
      for (int k = 0; k < model.d; ++k) c.B[j][k] = model.visc(j, k, u);
    c.dA1 = Mat::Zero(model.n, model.n);
    for (int k = 1; k < model.d; ++k)
      c.dB1k.push_back(Mat::Zero(model.n, model.n));
    return c;
  };
  Coeffs cp = limit_coeffs(profile.u_plus);
  Coeffs cm = limit_coeffs(profile.u_minus);
  g_plus_ = assemble(cp, &s_plus_);
  g_minus_ = assemble(cm, &s_minus_);
}

FirstOrderSymbol::Coeffs FirstOrderSymbol::coeffs_at(double x) const {
  const SystemModel& m = *model_;
  const Vec u = profile_->at(x);
  const Vec du = profile_->derivative_at(x);
  // Ubar'' from the profile field Jacobian
  Vec ddu = Vec::Zero(m.n);
  if (profile_->field && du.norm() > 1e-300) {
    const double h = 1e-6 * std::max(1.0, u.norm()) / du.norm();
    ddu = (profile_->field(u + h * du) - profile_->field(u - h * du)) / (2 * h);
  }

  Coeffs c;
  c.A1 = m.jac(0, u) - transport_term(m, 0, u, du);
  for (int j = 1; j < m.d; ++j)
    c.Aj.push_back(m.jac(j, u) - transport_term(m, j, u, du));
  c.B.assign(m.d, std::vector<Mat>(m.d));
  for (int j = 0; j < m.d; ++j)
    for (int k = 0; k < m.d; ++k) c.B[j][k] = m.visc(j, k, u);

  // d/dx A1 = (d^2F1 . du) - d/dx T1;  the T1 derivative splits into the
  // second viscosity derivative along du and the ddu replacement
  Mat dT1 = transport_term(m, 0, u, ddu);
  {
    const double wn = du.norm();
    if (wn > 1e-300) {
      const double h = 1e-6 * std::max(1.0, u.norm());
      const Vec what = du / wn;
      for (int b = 0; b < m.n; ++b) {
        Vec e = Vec::Zero(m.n);
        e(b) = 1.0;
        const Vec col = (m.visc_dir_deriv(0, 0, u + h * what, e) -
                         m.visc_dir_deriv(0, 0, u - h * what, e)) /
                        (2 * h) * wn * du;
        dT1.col(b) += col;
      }
    }
  }
  c.dA1 = jac_dir_deriv(m, 0, u, du) - dT1;
  for (int k = 1; k < m.d; ++k) c.dB1k.push_back(m.visc_dir_deriv(0, k, u, du));
  return c;
}

CMat FirstOrderSymbol::assemble(const Coeffs& c, CMat* forcing) const {
  const int n = model_->n, r = model_->r, p = n - r, N = n + r;
  const int d = model_->d;
  const Complex I(0.0, 1.0);
  const Complex lam = freq_.lambda;
  const Vec& xi = freq_.xi_tilde;

  const Mat b1 = c.B[0][0].bottomLeftCorner(r, p);
  const Mat b2 = c.B[0][0].bottomRightCorner(r, r);
  const Eigen::PartialPivLU<Mat> b2lu(b2);

  // row block 1: u_I' = R_I W + S_I f
  CMat R_I = CMat::Zero(p, N), S_I = CMat::Zero(p, n);
  if (p > 0) {
    const Mat A11 = c.A1.topLeftCorner(p, p);
    const Mat A12 = c.A1.topRightCorner(p, r);
    const Mat Astar = A11 - A12 * b2lu.solve(b1);
    Eigen::JacobiSVD<Mat> svd(Astar);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin < 1e-10 * std::max(1.0, smax))
      throw SingularAstar("A* singular to tolerance at a profile point");
    const Eigen::PartialPivLU<Mat> alu(Astar);

    CMat rhs_u = CMat::Zero(p, n);
    rhs_u -= c.dA1.topRows(p).cast<Complex>();
    for (int j = 1; j < d; ++j)
      rhs_u -= I * xi(j - 1) * c.Aj[j - 1].topRows(p).cast<Complex>();
    rhs_u.leftCols(p) -= lam * CMat::Identity(p, p);
    R_I.leftCols(n) = alu.solve(rhs_u.real()) +
                      Complex(0, 1) * alu.solve(rhs_u.imag());
    const Mat a12b2 = A12 * b2lu.solve(Mat::Identity(r, r));
    R_I.rightCols(r) = -alu.solve(a12b2).cast<Complex>();
    S_I.leftCols(p) = -alu.solve(Mat::Identity(p, p)).cast<Complex>();
  }

  // row block 2: u_II' = b2^{-1} z - b2^{-1} b1 u_I'
  CMat R_II = CMat::Zero(r, N), S_II = CMat::Zero(r, n);
  {
    const Mat b2inv = b2lu.solve(Mat::Identity(r, r));
    R_II.rightCols(r) = b2inv.cast<Complex>();
    if (p > 0) {
      const Mat b2b1 = b2lu.solve(b1);
      R_II -= b2b1.cast<Complex>() * R_I;
      S_II -= b2b1.cast<Complex>() * S_I;
    }
  }

  // U' = R_U W + S_U f
  CMat R_U(n, N), S_U(n, n);
  R_U << R_I, R_II;
  S_U << S_I, S_II;

  // row block 3: z'
  CMat R_z = CMat::Zero(r, N), S_z = CMat::Zero(r, n);
  {
    CMat on_u = c.dA1.bottomRows(r).cast<Complex>();
    for (int j = 1; j < d; ++j)
      on_u += I * xi(j - 1) * c.Aj[j - 1].bottomRows(r).cast<Complex>();
    for (int j = 1; j < d; ++j)
      for (int k = 1; k < d; ++k)
        on_u += xi(j - 1) * xi(k - 1) * c.B[j][k].bottomRows(r).cast<Complex>();
    for (int k = 1; k < d; ++k)
      on_u -= I * xi(k - 1) * c.dB1k[k - 1].bottomRows(r).cast<Complex>();
    on_u.rightCols(r) += lam * CMat::Identity(r, r);
    R_z.leftCols(n) += on_u;

    CMat on_uprime = c.A1.bottomRows(r).cast<Complex>();
    for (int j = 1; j < d; ++j)
      on_uprime -= I * xi(j - 1) * c.B[j][0].bottomRows(r).cast<Complex>();
    for (int k = 1; k < d; ++k)
      on_uprime -= I * xi(k - 1) * c.B[0][k].bottomRows(r).cast<Complex>();
    R_z += on_uprime * R_U;
    S_z = on_uprime * S_U;
    S_z.rightCols(r) += CMat::Identity(r, r);
  }

  CMat G(N, N);
  G << R_U, R_z;
  if (forcing) {
    forcing->resize(N, n);
    *forcing << S_U, S_z;
  }
  return G;
}

CMat FirstOrderSymbol::G(double x) const {
  return assemble(coeffs_at(x), nullptr);
}

CMat FirstOrderSymbol::forcing_map(double x) const {
  CMat s;
  assemble(coeffs_at(x), &s);
  return s;
}

CMat FirstOrderSymbol::G_limit(int side) const {
  return side >= 0 ? g_plus_ : g_minus_;
}

CMat FirstOrderSymbol::G_doubled(double x) const {
  const int N2 = N();
  CMat g = CMat::Zero(2 * N2, 2 * N2);
  g.topLeftCorner(N2, N2) = G(x);
  g.bottomRightCorner(N2, N2) = -G(-x);
  return g;
}

CMat FirstOrderSymbol::G_doubled_limit() const {
  const int N2 = N();
  CMat g = CMat::Zero(2 * N2, 2 * N2);
  g.topLeftCorner(N2, N2) = g_plus_;
  g.bottomRightCorner(N2, N2) = -g_minus_;
  return g;
}

BlockSplit FirstOrderSymbol::block_split(const CMat& limit, int n_slow) {
  Eigen::ComplexEigenSolver<CMat> es(limit);
  const int N = static_cast<int>(limit.rows());
  std::vector<int> order(N);
  for (int i = 0; i < N; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(es.eigenvalues()(a)) < std::abs(es.eigenvalues()(b));
  });
  BlockSplit bs;
  bs.nH = n_slow;
  std::vector<int> grouped(order.begin(), order.begin() + n_slow);
  std::vector<int> pp, pm;
  for (int i = n_slow; i < N; ++i) {
    if (es.eigenvalues()(order[i]).real() >= 0)
      pp.push_back(order[i]);
    else
      pm.push_back(order[i]);
  }
  bs.nPp = static_cast<int>(pp.size());
  bs.nPm = static_cast<int>(pm.size());
  grouped.insert(grouped.end(), pp.begin(), pp.end());
  grouped.insert(grouped.end(), pm.begin(), pm.end());
  bs.V.resize(N, N);
  bs.eig.resize(N);
  for (int i = 0; i < N; ++i) {
    bs.V.col(i) = es.eigenvectors().col(grouped[i]).normalized();
    bs.eig(i) = es.eigenvalues()(grouped[i]);
  }
  bs.Vinv = bs.V.partialPivLu().solve(CMat::Identity(N, N));
  double slow_max = 0.0, fast_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_slow; ++i) slow_max = std::max(slow_max, std::abs(bs.eig(i)));
  for (int i = n_slow; i < N; ++i)
    fast_min = std::min(fast_min, std::abs(bs.eig(i).real()));
  bs.fast_slow_gap = fast_min / std::max(slow_max, 1e-300);
  return bs;
}

CMat FirstOrderSymbol::slow_block(int side) const {
  const CMat lim = G_limit(side);
  const BlockSplit bs = block_split(lim, model_->n);
  // represent the slow invariant subspace as a graph over the U-coordinates
  const int n = model_->n;
  const CMat K = bs.V.leftCols(n);
  const CMat KU = K.topRows(n);
  const CMat lamd = bs.eig.head(n).asDiagonal();
  return KU * lamd * KU.partialPivLu().solve(CMat::Identity(n, n));
}

CMat FirstOrderSymbol::slow_symbol_limit(int side) const {
  const Vec& u = side >= 0 ? profile_->u_plus : profile_->u_minus;
  const int n = model_->n;
  CMat rhs = freq_.lambda * CMat::Identity(n, n);
  for (int j = 1; j < model_->d; ++j)
    rhs += Complex(0, 1) * freq_.xi_tilde(j - 1) *
           model_->jac(j, u).cast<Complex>();
  const Mat a1 = model_->jac(0, u);
  return -a1.cast<Complex>().partialPivLu().solve(rhs);
}

}  // namespace shockspec
