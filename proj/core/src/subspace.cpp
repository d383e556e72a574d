#include "shockspec/subspace.hpp"

#include <cmath>

#include "shockspec/errors.hpp"

namespace shockspec {

namespace {

// Eigenvalues within `margin` of the imaginary axis belong to neither
// group; dimension checks downstream catch genuine splitting loss.
CMat raw_frame(const Eigen::ComplexEigenSolver<CMat>& es, bool stable,
               double margin) {
  const int N = static_cast<int>(es.eigenvalues().size());
  std::vector<int> idx;
  for (int i = 0; i < N; ++i) {
    const double re = es.eigenvalues()(i).real();
    if (stable ? re < -margin : re > margin) idx.push_back(i);
  }
  CMat f(N, idx.size());
  for (size_t c = 0; c < idx.size(); ++c) f.col(c) = es.eigenvectors().col(idx[c]);
  return f;
}

// orthonormalize with positive-real diagonal R; returns Q
CMat orth(const CMat& A) {
  Eigen::HouseholderQR<CMat> qr(A);
  CMat q = CMat(qr.householderQ()).leftCols(A.cols());
  CMat r = q.adjoint() * A;
  for (int i = 0; i < q.cols(); ++i) {
    const Complex rd = r(i, i);
    if (std::abs(rd) > 0) q.col(i) *= rd / std::abs(rd);
  }
  return q;
}

}  // namespace

CMat group_projector(const CMat& M, bool stable, double margin) {
  Eigen::ComplexEigenSolver<CMat> es(M);
  const int N = static_cast<int>(M.rows());
  CVec sel(N);
  for (int i = 0; i < N; ++i) {
    const double re = es.eigenvalues()(i).real();
    sel(i) = (stable ? re < -margin : re > margin) ? 1.0 : 0.0;
  }
  const CMat V = es.eigenvectors();
  return V * sel.asDiagonal() * V.partialPivLu().solve(CMat::Identity(N, N));
}

CMat invariant_frame(const CMat& M, bool stable, double margin) {
  Eigen::ComplexEigenSolver<CMat> es(M);
  return orth(raw_frame(es, stable, margin));
}

int stable_dimension(const CMat& M, double margin) {
  Eigen::ComplexEigenSolver<CMat> es(M);
  int k = 0;
  for (int i = 0; i < M.rows(); ++i)
    if (es.eigenvalues()(i).real() < -margin) ++k;
  return k;
}

double subspace_angle(const CMat& A, const CMat& B) {
  const CMat qa = orth(A), qb = orth(B);
  Eigen::JacobiSVD<CMat> svd(qa.adjoint() * qb);
  const double smin = svd.singularValues().minCoeff();
  return std::acos(std::clamp(smin, 0.0, 1.0));
}

double invariance_residual(const CMat& M, const CMat& F) {
  return (M * F - F * (F.adjoint() * M * F)).norm();
}

FrameContinuation::FrameContinuation(LimitFn limit, bool stable,
                                     const Frequency& start)
    : limit_(std::move(limit)), stable_(stable), at_(start) {
  frame_ = invariant_frame(limit_(start), stable_);
  path_.push_back(start);
}

void FrameContinuation::step_to(const Frequency& next) {
  const int k = dim();
  Frequency cur = at_;
  double t = 0.0;
  double dt = 1.0;
  auto lerp = [&](double s) {
    Vec xi = cur.xi_tilde + s * (next.xi_tilde - cur.xi_tilde);
    Complex lam = cur.lambda + s * (next.lambda - cur.lambda);
    return Frequency(xi, lam);
  };
  CMat P_prev = group_projector(limit_(cur), stable_);
  int guard = 0;
  while (t < 1.0) {
    if (++guard > 10000) throw SplittingLost("projector path did not converge");
    const double tn = std::min(1.0, t + dt);
    const Frequency f = lerp(tn);
    CMat M;
    try {
      M = limit_(f);
    } catch (const Error&) {
      throw SplittingLost("limit matrix evaluation failed along the path");
    }
    // a mode entering the margin band collapses the group dimension
    {
      Eigen::ComplexEigenSolver<CMat> es(M);
      int dim = 0;
      for (int i = 0; i < M.rows(); ++i) {
        const double re = es.eigenvalues()(i).real();
        if (stable_ ? re < -1e-11 : re > 1e-11) ++dim;
      }
      if (dim != k)
        throw SplittingLost("group crossing near t=" + std::to_string(tn) +
                            " on the segment (dim " + std::to_string(dim) +
                            " vs " + std::to_string(k) + ")");
    }
    const CMat P = group_projector(M, stable_);
    const double move = (P - P_prev).norm();
    if (move > max_projector_step && dt > 1e-6) {
      dt *= 0.5;
      continue;
    }
    CMat cand = P * frame_;
    Eigen::JacobiSVD<CMat> svd(cand);
    if (svd.singularValues().minCoeff() < 1e-8) {
      const int kd = stable_dimension(M);
      throw SplittingLost("frame rank lost at t=" + std::to_string(tn) +
                          " (stable dim " + std::to_string(kd) + " vs " +
                          std::to_string(stable_ ? k : (int)M.rows() - k) + ")");
    }
    frame_ = orth(cand);
    P_prev = P;
    t = tn;
    dt = std::min(1.0 - t + 1e-16, dt * 1.7);
  }
  at_ = next;
  path_.push_back(next);
}

std::pair<SubspaceBasis, SubspaceBasis> limiting_subspaces(
    const FirstOrderSymbol& symbol) {
  SubspaceBasis sp, sm;
  sp.side = +1;
  sp.stable = true;
  sp.frame = invariant_frame(symbol.G_limit(+1), true);
  sp.continuation_path = {symbol.freq()};
  sm.side = -1;
  sm.stable = false;
  sm.frame = invariant_frame(symbol.G_limit(-1), false);
  sm.continuation_path = {symbol.freq()};
  const int N = symbol.N();
  if (sp.dim() + sm.dim() != N)
    throw SplittingLost("stable(+) dim " + std::to_string(sp.dim()) +
                        " + unstable(-) dim " + std::to_string(sm.dim()) +
                        " != " + std::to_string(N));
  return {sp, sm};
}

}  // namespace shockspec
