#include "shockspec/conjugation.hpp"

#include <cmath>

#include "shockspec/bvp.hpp"
#include "shockspec/errors.hpp"

namespace shockspec {

CMat Conjugator::at(double xq) const {
  if (x.empty()) throw Error("conjugator: empty");
  if (xq <= x.front()) return phi.front();
  if (xq >= x.back()) return phi.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const int i = static_cast<int>(it - x.begin()) - 1;
  const double t = (xq - x[i]) / (x[i + 1] - x[i]);
  return (1 - t) * phi[i] + t * phi[i + 1];
}

CMat Conjugator::inv_at(double xq) const {
  if (xq <= x.front()) return phi_inv.front();
  if (xq >= x.back()) return phi_inv.back();
  const auto it = std::upper_bound(x.begin(), x.end(), xq);
  const int i = static_cast<int>(it - x.begin()) - 1;
  const double t = (xq - x[i]) / (x[i + 1] - x[i]);
  return (1 - t) * phi_inv[i] + t * phi_inv[i + 1];
}

Conjugator compute_conjugator(const FirstOrderSymbol& sym,
                              const ConjugatorOptions& opt) {
  const int M = 2 * sym.N();
  const double L = sym.profile().L;
  const CMat Ginf = sym.G_doubled_limit();
  Eigen::ComplexEigenSolver<CMat> es(Ginf);
  const CMat V = es.eigenvectors();
  const CVec d = es.eigenvalues();
  Eigen::JacobiSVD<CMat> vsvd(V);
  const double vcond = vsvd.singularValues().maxCoeff() /
                       vsvd.singularValues().minCoeff();
  if (vcond > opt.basis_cond_limit)
    throw ConjugationDiverged("limit eigenbasis condition " +
                              std::to_string(vcond));
  const CMat Vinv = V.partialPivLu().solve(CMat::Identity(M, M));

  auto delta_tilde = [&](double x) -> CMat {
    return Vinv * (sym.G_doubled(x) - Ginf) * V;
  };

  // Psi~ column j solves psi' = (D - d_j I + Delta~(x)) psi + Delta~ e_j
  // with growing/neutral rows pinned at x=L and decaying rows at x=0.
  std::vector<double> xs;
  {
    const int nout = static_cast<int>(std::ceil(L / 0.05)) + 1;
    for (int i = 0; i < nout; ++i) xs.push_back(L * i / (nout - 1));
  }
  std::vector<CMat> psis(xs.size(), CMat::Zero(M, M));

  for (int j = 0; j < M; ++j) {
    std::vector<int> atL, at0;
    for (int i = 0; i < M; ++i) {
      if ((d(i) - d(j)).real() >= -1e-9)
        atL.push_back(i);
      else
        at0.push_back(i);
    }
    BvpProblem pb;
    pb.a = 0.0;
    pb.b = L;
    pb.A = [&, j](double x) -> CMat {
      CMat a = delta_tilde(x);
      for (int i = 0; i < M; ++i) a(i, i) += d(i) - d(j);
      return a;
    };
    pb.g = [&, j](double x) -> CVec { return delta_tilde(x).col(j); };
    pb.Ba = CMat::Zero(at0.size(), M);
    pb.beta_a = CVec::Zero(at0.size());
    for (size_t q = 0; q < at0.size(); ++q) pb.Ba(q, at0[q]) = 1.0;
    pb.Bb = CMat::Zero(atL.size(), M);
    pb.beta_b = CVec::Zero(atL.size());
    for (size_t q = 0; q < atL.size(); ++q) pb.Bb(q, atL[q]) = 1.0;

    BvpOptions bo;
    bo.segment_length = opt.segment_length;
    bo.cond_limit = 1e14;
    BvpSolution sol;
    try {
      sol = solve_linear_bvp(pb, bo);
    } catch (const NearSpectrum& e) {
      throw ConjugationDiverged(std::string("column solve failed: ") + e.what());
    }
    for (size_t q = 0; q < xs.size(); ++q) psis[q].col(j) = sol.at(xs[q]);
  }

  Conjugator c;
  c.x = xs;
  for (size_t q = 0; q < xs.size(); ++q) {
    const CMat psi = V * psis[q] * Vinv;
    const CMat ph = CMat::Identity(M, M) + psi;
    c.max_correction = std::max(c.max_correction, psi.norm());
    if (!(psi.norm() < opt.bound_limit))
      throw ConjugationDiverged("||Phi - I|| = " + std::to_string(psi.norm()));
    c.phi.push_back(ph);
    c.phi_inv.push_back(ph.partialPivLu().solve(CMat::Identity(M, M)));
  }

  // sampled residual of Phi' = Gd Phi - Phi Gd(inf), fourth-order stencil
  double worst = 0.0;
  for (size_t q = 2; q + 2 < xs.size(); q += 7) {
    const double h = xs[q + 1] - xs[q];
    const CMat dphi = (-c.phi[q + 2] + 8.0 * c.phi[q + 1] - 8.0 * c.phi[q - 1] +
                       c.phi[q - 2]) *
                      (1.0 / (12 * h));
    const CMat want = sym.G_doubled(xs[q]) * c.phi[q] - c.phi[q] * Ginf;
    worst = std::max(worst, (dphi - want).norm() /
                                std::max(1.0, c.phi[q].norm() * Ginf.norm()));
  }
  c.residual = worst;
  return c;
}

}  // namespace shockspec
