#include "shockspec/boundary.hpp"

#include <cmath>

#include "shockspec/conjugation.hpp"
#include "shockspec/errors.hpp"
#include "shockspec/subspace.hpp"
#include "shockspec/util.hpp"

namespace shockspec {

namespace {

CMat orth_cols(const CMat& A, double rank_tol = 1e-10) {
  Eigen::ColPivHouseholderQR<CMat> qr(A);
  qr.setThreshold(rank_tol);
  const int rank = static_cast<int>(qr.rank());
  return CMat(qr.householderQ()).leftCols(rank);
}

}  // namespace

BoundaryEstimateReport boundary_estimates(const SystemModel& model,
                                          const ShockProfile& profile,
                                          const TangentFields& tf,
                                          const Vec& zeta_hat,
                                          const std::vector<double>& rho_grid,
                                          const BoundaryEstimateOptions& opt) {
  BoundaryEstimateReport rep;
  const int dxi = static_cast<int>(zeta_hat.size()) - 2;
  auto freq_at = [&](double rho) {
    Vec xi = rho * zeta_hat.head(dxi);
    return Frequency(xi, rho * Complex(zeta_hat(dxi), zeta_hat(dxi + 1)));
  };
  const int l = tf.l;

  rep.C1 = std::numeric_limits<double>::infinity();
  rep.C_R = std::numeric_limits<double>::infinity();
  rep.C_band = std::numeric_limits<double>::infinity();
  rep.lemma_delta = std::numeric_limits<double>::infinity();

  for (double rho : rho_grid) {
    const Frequency f = freq_at(rho);
    FirstOrderSymbol sym(model, profile, f);
    auto [sp, sm] = limiting_subspaces(sym);
    const int N = sym.N(), k = sp.dim();
    double slog = 0.0;
    const CMat r0 = carry_frame_to_zero(sym, +1, sp.frame, opt.evans, &slog);
    const CMat l0 = carry_frame_to_zero(sym, -1, sm.frame, opt.evans, &slog);

    // E- : boundary values of decaying doubled solutions
    CMat eminus = CMat::Zero(2 * N, N);
    eminus.topLeftCorner(N, k) = r0;
    eminus.bottomRightCorner(N, N - k) = l0;

    // paired tangent directions inside E-
    CMat ephi(2 * N, l);
    for (int j = 0; j < l; ++j) {
      const CVec w = tangent_w_vector(model, profile, tf, j, 0.0);
      ephi.col(j).head(N) = r0 * (r0.adjoint() * w);
      ephi.col(j).tail(N) = l0 * (l0.adjoint() * w);
    }
    const CMat qphi = orth_cols(ephi);

    // orthogonal complement of the tangent pairs within E-
    CMat comp = eminus - qphi * (qphi.adjoint() * eminus);
    const CMat qcomp = orth_cols(comp, 1e-8);

    CMat gamma(N, 2 * N);
    gamma << CMat::Identity(N, N), -CMat::Identity(N, N);

    auto smin_smax = [&](const CMat& q, double* smax) {
      Eigen::JacobiSVD<CMat> svd(gamma * q);
      if (smax) *smax = svd.singularValues().maxCoeff();
      return svd.singularValues().minCoeff();
    };
    double smax_phi = 0.0;
    const double sphi = smin_smax(qphi, &smax_phi);
    const double scomp = qcomp.cols() ? smin_smax(qcomp, nullptr) : 1.0;
    const double sall = smin_smax(orth_cols(eminus), nullptr);
    if (sall < 1e-13)
      throw ConditionDViolated("Gamma collapses on E- at rho=" +
                               std::to_string(rho));

    rep.rho.push_back(rho);
    rep.smin_phi.push_back(sphi);
    rep.smax_phi.push_back(smax_phi);
    rep.smin_comp.push_back(scomp);
    rep.smin_eminus.push_back(sall);
    rep.C1 = std::min(rep.C1, sphi / rho);
    rep.C2 = std::max(rep.C2, smax_phi / rho);
    rep.C_R = std::min(rep.C_R, sall / rho);
    if (rho >= opt.band_lo && rho <= opt.band_hi)
      rep.C_band = std::min(rep.C_band, sall);

    // combined lower bound |Gamma u| >= delta (|u_H-| + rho |u_P-|), the
    // components taken in the conjugated limit coordinates
    {
      const Conjugator conj = compute_conjugator(sym);
      const BlockSplit split =
          FirstOrderSymbol::block_split(sym.G_doubled_limit(), 2 * model.n);
      const CMat phi0inv = conj.inv_at(0.0);
      const CMat qall = orth_cols(eminus);
      for (int trial = 0; trial < opt.lemma_samples; ++trial) {
        CVec c = CVec::Zero(qall.cols());
        if (trial < qall.cols()) {
          c(trial) = 1.0;
        } else {
          for (int q2 = 0; q2 < c.size(); ++q2)
            c(q2) = Complex(std::cos(0.9 * trial * (q2 + 1)),
                            std::sin(1.7 * trial + 0.3 * q2));
          c /= c.norm();
        }
        const CVec u = qall * c;
        const CVec z = split.Vinv * (phi0inv * u);
        double hnorm = 0.0, pnorm = 0.0;
        for (int m2 = 0; m2 < 2 * sym.N(); ++m2) {
          if (split.eig(m2).real() >= 0) continue;  // decaying part only
          if (m2 < split.nH)
            hnorm += std::norm(z(m2));
          else
            pnorm += std::norm(z(m2));
        }
        const double denom = std::sqrt(hnorm) + rho * std::sqrt(pnorm);
        const double gu = (gamma * u).norm();
        if (denom > 1e-12)
          rep.lemma_delta = std::min(rep.lemma_delta, gu / denom);
      }
    }
  }

  rep.fit_phi = fit_loglog(rep.rho, rep.smin_phi);
  rep.fit_comp = fit_loglog(rep.rho, rep.smin_comp);
  rep.fit_eminus = fit_loglog(rep.rho, rep.smin_eminus);
  rep.verdict_phi = std::abs(rep.fit_phi.slope - 1.0) <= opt.exponent_tol
                        ? Verdict::Pass
                        : Verdict::Fail;
  rep.verdict_comp =
      std::abs(rep.fit_comp.slope) <= opt.exponent_tol ? Verdict::Pass
                                                       : Verdict::Fail;
  rep.verdict_eminus = rep.fit_eminus.slope <= 1.0 + opt.exponent_tol
                           ? Verdict::Pass
                           : Verdict::Fail;
  return rep;
}

}  // namespace shockspec
