#pragma once

#include <map>
#include <optional>
#include <string>

#include "shockspec/model.hpp"

namespace shockspec {

enum class HypVerdict { Holds, Fails, Undetermined };

struct HypothesisWitness {
  Vec point;        // sampled direction / state where the margin is attained
  double margin = 0.0;
  std::string note;
};

struct HypothesisRecord {
  std::string id;   // A1, A2, A3, H0, H1, H2, H4, H4var, H5
  HypVerdict verdict = HypVerdict::Undetermined;
  HypothesisWitness witness;
};

struct HypothesisReport {
  std::vector<HypothesisRecord> records;
  const HypothesisRecord* find(const std::string& id) const;
  bool all_hold() const;
};

struct CheckOptions {
  int samples = 256;            // sphere sample budget
  double eig_gap_tol = 1e-8;    // eigenvalue gap tolerance
  double margin_tol = 1e-10;    // margin tolerance for strict inequalities
  double jac_fd_rel_tol = 1e-6; // Jacobian vs centered differences
};

/// Numeric evaluation of the structural hypotheses at the endstates.
/// Throws NonParabolic if the ellipticity margin is not positive and
/// EvaluatorDomain if the model cannot be evaluated at an endstate.
HypothesisReport check_hypotheses(const SystemModel& model,
                                  const Endstates& es, int samples);
HypothesisReport check_hypotheses(const SystemModel& model,
                                  const Endstates& es,
                                  const CheckOptions& opt);

// ---- shock classification ---------------------------------------------

enum class ShockKind { Lax, Undercompressive, Overcompressive };

struct ShockClass {
  int i_plus = 0;   // dim stable subspace of dF1(U+)
  int i_minus = 0;  // dim unstable subspace of dF1(U-)
  int i = 0;
  ShockKind kind = ShockKind::Lax;
  int l = 1;        // compressibility index of the maximally transverse connection
  int alpha = 0;    // 1 only in the undercompressive case
};

ShockClass classify_shock(const SystemModel& model, const Endstates& es,
                          double degeneracy_tol = 1e-8);

// ---- multiplicity scan --------------------------------------------------

struct MultiplicityScan {
  bool constant = true;
  std::vector<int> pattern;        // sorted multiplicity signature
  Vec witness;                     // direction where the pattern changes
  double gap_tol_used = 1e-8;
  std::string note;
};

/// Eigenvalue-multiplicity pattern of sum_j xi_j dF^j(state) over a
/// quasi-uniform sphere grid of at least `samples` directions.
MultiplicityScan multiplicity_scan(const SystemModel& model, const Vec& state,
                                   int samples);

const char* to_string(HypVerdict v);
const char* to_string(ShockKind k);

}  // namespace shockspec
