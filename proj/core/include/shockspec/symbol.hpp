#pragma once

#include "shockspec/model.hpp"
#include "shockspec/profile.hpp"

namespace shockspec {

/// Grouped eigen-decomposition of a limit matrix: slow (hyperbolic) modes
/// first, then the fast viscous modes split by the sign of Re mu.
struct BlockSplit {
  CMat V;      // columns ordered [H | P+ | P-]
  CMat Vinv;
  CVec eig;    // same order
  int nH = 0, nPp = 0, nPm = 0;
  double fast_slow_gap = 0.0;  // min fast |Re| / max slow |mu|
};

/// The frequency-domain eigenvalue equation written as a first-order
/// system W' = G(x) W + S(x) f in W = (u_I, u_II, z),
/// z = b1^{11} u_I' + b2^{11} u_II'.
class FirstOrderSymbol {
 public:
  FirstOrderSymbol(const SystemModel& model, const ShockProfile& profile,
                   Frequency freq);

  int N() const { return model_->n + model_->r; }
  int n() const { return model_->n; }
  const Frequency& freq() const { return freq_; }
  const SystemModel& model() const { return *model_; }
  const ShockProfile& profile() const { return *profile_; }

  CMat G(double x) const;
  CMat forcing_map(double x) const;  // S(x): C^n -> C^N
  CMat G_limit(int side) const;      // exact endstate limit, side = +-1

  /// Doubled half-line system on x >= 0: diag(G(x), -G(-x)), size 2N.
  CMat G_doubled(double x) const;
  /// Doubled limit diag(G(+inf), -G(-inf)).
  CMat G_doubled_limit() const;

  /// Same symbol at a different frequency (shares the profile data).
  FirstOrderSymbol with_frequency(const Frequency& f) const {
    return FirstOrderSymbol(*model_, *profile_, f);
  }

  /// Slow/fast split of a limit matrix; nH = n slow modes for the one-sided
  /// limits, 2n for the doubled limit.
  static BlockSplit block_split(const CMat& limit, int n_slow);

  /// Slow dynamics of the one-sided limit expressed in U-coordinates.
  CMat slow_block(int side) const;
  /// Constant-coefficient slow symbol -(dF1)^{-1}(lambda I + i sum xi_j dF^j)
  /// that the slow block approaches to O(rho^2).
  CMat slow_symbol_limit(int side) const;

  struct Coeffs {
    Mat A1;                   // dF1(Ubar) - [dB^{11} .] Ubar'
    std::vector<Mat> Aj;      // j = 2..d analogues
    std::vector<std::vector<Mat>> B;  // B[j][k]
    Mat dA1;                  // d/dx A1
    std::vector<Mat> dB1k;    // d/dx B^{1k}, k = 2..d
  };
  Coeffs coeffs_at(double x) const;

 private:
  CMat assemble(const Coeffs& c, CMat* forcing) const;

  const SystemModel* model_;
  const ShockProfile* profile_;
  Frequency freq_;
  CMat g_plus_, g_minus_, s_plus_, s_minus_;
};

}  // namespace shockspec
