#pragma once

#include <functional>

#include "shockspec/symbol.hpp"

namespace shockspec {

struct SubspaceBasis {
  int side = +1;                 // +1: x -> +inf limit, -1: x -> -inf
  bool stable = true;            // stable (Re mu < 0) or unstable group
  CMat frame;                    // N x k, orthonormal columns
  std::vector<Frequency> continuation_path;

  int dim() const { return static_cast<int>(frame.cols()); }
};

/// Spectral projector onto the stable (Re < 0) or unstable group of M.
/// Throws SplittingLost when an eigenvalue sits on the axis within tol.
CMat group_projector(const CMat& M, bool stable, double margin = 1e-11);

/// Orthonormal frame of the stable/unstable invariant subspace.
CMat invariant_frame(const CMat& M, bool stable, double margin = 1e-11);

int stable_dimension(const CMat& M, double margin = 1e-11);

/// Largest principal angle between the column spans of two frames.
double subspace_angle(const CMat& A, const CMat& B);

/// Residual ||M F - F (F^* M F)|| measuring how invariant span(F) is.
double invariance_residual(const CMat& M, const CMat& F);

/// Continuation of an invariant frame along a frequency path.  Frames are
/// transported by the spectral projector of the target matrix (projector
/// transport), sub-stepping so that no step moves the projector by more
/// than `max_projector_step`; this keeps the gauge consistent, which is
/// what makes Evans values comparable along a path.
class FrameContinuation {
 public:
  using LimitFn = std::function<CMat(const Frequency&)>;

  FrameContinuation(LimitFn limit, bool stable, const Frequency& start);

  /// Moves to `next` along the straight segment in (xi~, lambda).
  /// Throws SplittingLost (with the crossing location in the message)
  /// if the group dimension changes on the way.
  void step_to(const Frequency& next);

  const CMat& frame() const { return frame_; }
  const Frequency& at() const { return at_; }
  const std::vector<Frequency>& path() const { return path_; }
  int dim() const { return static_cast<int>(frame_.cols()); }

  double max_projector_step = 0.1;

 private:
  LimitFn limit_;
  bool stable_;
  CMat frame_;
  Frequency at_;
  std::vector<Frequency> path_;
};

/// Stable frame at +inf and unstable frame at -inf for the given symbol,
/// by direct eigen-construction at its frequency (no continuation).
std::pair<SubspaceBasis, SubspaceBasis> limiting_subspaces(
    const FirstOrderSymbol& symbol);

}  // namespace shockspec
