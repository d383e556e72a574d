#pragma once

#include "shockspec/symbol.hpp"

namespace shockspec {

/// Bounded conjugator Phi(x) = I + Psi(x) with
///   Phi' = Gd(x) Phi - Phi Gd(inf),  Phi -> I as x -> inf,
/// reducing the doubled variable-coefficient system to its limit.
struct Conjugator {
  std::vector<double> x;
  std::vector<CMat> phi;
  std::vector<CMat> phi_inv;
  double max_correction = 0.0;   // sup ||Phi - I||
  double residual = 0.0;         // sampled conjugation-identity residual

  CMat at(double xq) const;
  CMat inv_at(double xq) const;
};

struct ConjugatorOptions {
  double bound_limit = 1e3;      // ConjugationDiverged beyond this
  double basis_cond_limit = 1e8; // eigenbasis conditioning guard
  double segment_length = 1.0;
};

/// Solves the conjugation equation column-by-column in the eigenbasis of
/// the doubled limit matrix (each column is an independent small BVP).
Conjugator compute_conjugator(const FirstOrderSymbol& sym,
                              const ConjugatorOptions& opt = {});

}  // namespace shockspec
