#include "shockspec/hypotheses.hpp"

#include <algorithm>
#include <cmath>

#include "shockspec/errors.hpp"
#include "shockspec/util.hpp"

namespace shockspec {

const char* to_string(HypVerdict v) {
  switch (v) {
    case HypVerdict::Holds: return "holds";
    case HypVerdict::Fails: return "fails";
    default: return "undetermined";
  }
}

const char* to_string(ShockKind k) {
  switch (k) {
    case ShockKind::Lax: return "Lax";
    case ShockKind::Undercompressive: return "undercompressive";
    default: return "overcompressive";
  }
}

const HypothesisRecord* HypothesisReport::find(const std::string& id) const {
  for (const auto& r : records)
    if (r.id == id) return &r;
  return nullptr;
}

bool HypothesisReport::all_hold() const {
  return std::all_of(records.begin(), records.end(), [](const auto& r) {
    return r.verdict == HypVerdict::Holds;
  });
}

namespace {

double sym_min_eig(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff();
}

// multiplicity signature of a real spectrum with a gap tolerance
std::vector<int> multiplicity_pattern(Vec eigs, double gap) {
  std::sort(eigs.begin(), eigs.end());
  std::vector<int> pat;
  int run = 1;
  for (int i = 1; i < eigs.size(); ++i) {
    if (eigs(i) - eigs(i - 1) <= gap) {
      ++run;
    } else {
      pat.push_back(run);
      run = 1;
    }
  }
  if (eigs.size() > 0) pat.push_back(run);
  std::sort(pat.begin(), pat.end());
  return pat;
}

}  // namespace

HypothesisReport check_hypotheses(const SystemModel& model, const Endstates& es,
                                  int samples) {
  CheckOptions opt;
  opt.samples = std::max(1, samples);
  return check_hypotheses(model, es, opt);
}

HypothesisReport check_hypotheses(const SystemModel& model, const Endstates& es,
                                  const CheckOptions& opt) {
  HypothesisReport rep;
  const int n = model.n, r = model.r, d = model.d;
  const std::vector<Vec> states = {es.u_minus, es.u_plus};
  const auto dirs = sphere_grid(d, std::max(opt.samples, 8));

  // evaluability at both endstates (throws EvaluatorDomain on failure)
  for (const Vec& u : states)
    for (int j = 0; j < d; ++j) model.flux_at(j, u);

  // H0: smoothness proxy; analytic Jacobians against centered differences
  {
    HypothesisRecord rec;
    rec.id = "H0";
    double worst = 0.0;
    Vec worst_state;
    for (const Vec& u : states) {
      for (int j = 0; j < d; ++j) {
        const Mat a = model.jac(j, u);
        Mat fd(n, n);
        const double scale = std::max(1.0, u.norm());
        for (int b = 0; b < n; ++b) {
          const double h = 1e-6 * scale;
          Vec e = Vec::Zero(n);
          e(b) = h;
          fd.col(b) = (model.flux_at(j, u + e) - model.flux_at(j, u - e)) / (2 * h);
        }
        const double rel = (a - fd).norm() / std::max(1.0, a.norm());
        if (rel > worst) {
          worst = rel;
          worst_state = u;
        }
      }
    }
    rec.witness.point = worst_state;
    rec.witness.margin = worst;
    rec.witness.note = "max relative Jacobian/finite-difference mismatch";
    rec.verdict = worst <= opt.jac_fd_rel_tol ? HypVerdict::Holds : HypVerdict::Fails;
    rep.records.push_back(rec);
  }

  // A1: symmetry of the provided symmetric form at the endstates, A0 > 0
  {
    HypothesisRecord rec;
    rec.id = "A1";
    double worst_asym = 0.0;
    double theta0 = std::numeric_limits<double>::infinity();
    Vec wpt = states[0];
    for (const Vec& u : states) {
      const Mat a0 = model.sym_A0(u);
      worst_asym = std::max(worst_asym, (a0 - a0.transpose()).norm());
      theta0 = std::min(theta0, sym_min_eig(a0));
      for (int j = 0; j < d; ++j) {
        const Mat aj = model.sym_A(j, u);
        const double asym = (aj - aj.transpose()).norm();
        if (asym > worst_asym) {
          worst_asym = asym;
          wpt = u;
        }
      }
      // A1 also asks the (1,1) hyperbolic sub-block of A1~ to be symmetric,
      // automatic once the full matrix is.
    }
    rec.witness.point = wpt;
    rec.witness.margin = theta0;
    rec.witness.note = "theta0 = min eig A0~; asymmetry " + std::to_string(worst_asym);
    rec.verdict = (worst_asym <= 1e-10 && theta0 > opt.margin_tol)
                      ? HypVerdict::Holds
                      : HypVerdict::Fails;
    rep.records.push_back(rec);
  }

  // A3: ellipticity of the parabolic block, min eig of the symmetric part
  // of sum xi_j xi_k b2^{jk} over sphere samples
  {
    HypothesisRecord rec;
    rec.id = "A3";
    double theta = std::numeric_limits<double>::infinity();
    Vec wdir;
    for (const Vec& u : states) {
      for (const Vec& xi : dirs) {
        Mat blk = Mat::Zero(r, r);
        for (int j = 0; j < d; ++j)
          for (int k = 0; k < d; ++k)
            blk += xi(j) * xi(k) * model.visc(j, k, u).bottomRightCorner(r, r);
        const double m = sym_min_eig(blk);
        if (m < theta) {
          theta = m;
          wdir = xi;
        }
      }
    }
    rec.witness.point = wdir;
    rec.witness.margin = theta;
    rec.witness.note = "min eig sym(sum xi_j xi_k b2^{jk})";
    if (theta <= opt.margin_tol)
      throw NonParabolic("ellipticity margin " + std::to_string(theta) +
                         " at a sphere sample");
    rec.verdict = HypVerdict::Holds;
    rep.records.push_back(rec);

    // zero upper rows of the viscosity blocks (block-form invariant)
    for (const Vec& u : states)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
          if (model.visc(j, k, u).topRows(n - r).norm() > 1e-12)
            throw EvaluatorDomain("viscosity upper rows not zero");
  }

  // H1: eigenvalues of the hyperbolic sub-block A1~_{11} nonzero, common sign
  {
    HypothesisRecord rec;
    rec.id = "H1";
    rec.verdict = HypVerdict::Holds;
    double margin = std::numeric_limits<double>::infinity();
    if (n - r == 0) {
      rec.witness.note = "vacuous, no hyperbolic sub-block";
      rec.witness.margin = 0.0;
    } else {
      int sign = 0;
      std::vector<Vec> probes = states;
      for (double t : {0.25, 0.5, 0.75})
        probes.push_back(es.u_minus + t * (es.u_plus - es.u_minus));
      for (const Vec& u : probes) {
        const Mat a11 = model.sym_A(0, u).topLeftCorner(n - r, n - r);
        Eigen::EigenSolver<Mat> esv(a11);
        for (int i = 0; i < n - r; ++i) {
          const double re = esv.eigenvalues()(i).real();
          margin = std::min(margin, std::abs(re));
          const int s = re > 0 ? 1 : -1;
          if (sign == 0) sign = s;
          if (s != sign || std::abs(re) <= opt.eig_gap_tol) {
            rec.verdict = HypVerdict::Fails;
            rec.witness.point = u;
          }
        }
      }
      rec.witness.margin = margin;
      rec.witness.note = "min |eig A1~_11| along the connecting segment";
    }
    rep.records.push_back(rec);
  }

  // H2: det dF1 nonzero at the endstates
  {
    HypothesisRecord rec;
    rec.id = "H2";
    double margin = std::numeric_limits<double>::infinity();
    Vec wpt = states[0];
    for (const Vec& u : states) {
      const double dd = std::abs(model.jac(0, u).determinant());
      if (dd < margin) {
        margin = dd;
        wpt = u;
      }
    }
    rec.witness.point = wpt;
    rec.witness.margin = margin;
    rec.witness.note = "min |det dF1(U+-)|";
    rec.verdict = margin > opt.eig_gap_tol ? HypVerdict::Holds : HypVerdict::Fails;
    rep.records.push_back(rec);
  }

  // A2: genuine coupling; no eigenvector of the flux symbol may be
  // annihilated by the viscosity symbol
  {
    HypothesisRecord rec;
    rec.id = "A2";
    rec.verdict = HypVerdict::Holds;
    double margin = std::numeric_limits<double>::infinity();
    Vec wdir;
    for (const Vec& u : states) {
      const Mat a0inv = model.sym_A0(u).inverse();
      for (const Vec& xi : dirs) {
        Mat asym = Mat::Zero(n, n);
        for (int j = 0; j < d; ++j) asym += xi(j) * model.sym_A(j, u);
        asym = asym * a0inv;
        Mat bsym = model.visc_symbol(xi, u) * a0inv;
        Eigen::EigenSolver<Mat> esv(asym);
        // cluster eigenvalues, then test sigma_min(B * V_cluster)
        const CVec ev = esv.eigenvalues();
        const CMat V = esv.eigenvectors();
        std::vector<bool> used(n, false);
        for (int i = 0; i < n; ++i) {
          if (used[i]) continue;
          std::vector<int> cluster{i};
          used[i] = true;
          for (int k2 = i + 1; k2 < n; ++k2)
            if (!used[k2] && std::abs(ev(i) - ev(k2)) < 1e-7) {
              cluster.push_back(k2);
              used[k2] = true;
            }
          CMat vc(n, cluster.size());
          for (size_t c = 0; c < cluster.size(); ++c)
            vc.col(c) = V.col(cluster[c]).normalized();
          Eigen::JacobiSVD<CMat> svd(bsym.cast<Complex>() * vc);
          const double smin = svd.singularValues().minCoeff();
          if (smin < margin) {
            margin = smin;
            wdir = xi;
          }
        }
      }
    }
    rec.witness.point = wdir;
    rec.witness.margin = margin;
    rec.witness.note = "min over samples of sigma_min(visc symbol * eigvecs)";
    if (margin <= opt.eig_gap_tol) rec.verdict = HypVerdict::Fails;
    rep.records.push_back(rec);
  }

  // H4 / H4': constant multiplicity of the flux symbol at the endstates,
  // or declared totally nonglancing
  {
    HypothesisRecord h4;
    h4.id = "H4";
    h4.verdict = HypVerdict::Holds;
    HypothesisRecord h4v;
    h4v.id = "H4var";
    for (const Vec& u : states) {
      const MultiplicityScan ms =
          multiplicity_scan(model, u, std::max(64, opt.samples));
      if (!ms.constant) {
        h4.verdict = HypVerdict::Fails;
        h4.witness.point = ms.witness;
        h4.witness.note = "variable multiplicity at an endstate";
      }
    }
    h4v.verdict = (h4.verdict == HypVerdict::Holds || model.totally_nonglancing)
                      ? HypVerdict::Holds
                      : HypVerdict::Undetermined;
    h4v.witness.note = model.totally_nonglancing
                           ? "variable modes declared totally nonglancing"
                           : "follows H4";
    h4v.witness.margin = 0.0;
    h4.witness.margin = 0.0;
    if (h4.witness.point.size() == 0) h4.witness.point = Vec::Zero(d);
    h4v.witness.point = h4.witness.point;
    rep.records.push_back(h4);
    rep.records.push_back(h4v);
  }

  return rep;
}

ShockClass classify_shock(const SystemModel& model, const Endstates& es,
                          double tol) {
  if ((es.u_plus - es.u_minus).norm() < tol)
    throw EqualEndstates("endstates coincide");
  auto count_signed = [&](const Vec& u, int want_negative) {
    Eigen::EigenSolver<Mat> esv(model.jac(0, u));
    int cnt = 0;
    const double scale = std::max(1.0, model.jac(0, u).norm());
    for (int i = 0; i < model.n; ++i) {
      const double re = esv.eigenvalues()(i).real();
      if (std::abs(re) < tol * scale)
        throw DegenerateShock("characteristic speed within tolerance of 0");
      if ((want_negative && re < 0) || (!want_negative && re > 0)) ++cnt;
    }
    return cnt;
  };
  ShockClass sc;
  sc.i_plus = count_signed(es.u_plus, 1);
  sc.i_minus = count_signed(es.u_minus, 0);
  sc.i = sc.i_plus + sc.i_minus;
  const int n = model.n;
  if (sc.i == n + 1)
    sc.kind = ShockKind::Lax;
  else if (sc.i <= n)
    sc.kind = ShockKind::Undercompressive;
  else
    sc.kind = ShockKind::Overcompressive;
  sc.l = (sc.kind == ShockKind::Overcompressive) ? sc.i - n : 1;
  sc.alpha = (sc.kind == ShockKind::Undercompressive) ? 1 : 0;
  return sc;
}

MultiplicityScan multiplicity_scan(const SystemModel& model, const Vec& state,
                                   int samples) {
  MultiplicityScan out;
  samples = std::max(samples, 8);
  double gap = 1e-8;
  // widen the gap tolerance if patterns are ambiguous near the tolerance
  for (int attempt = 0; attempt < 3; ++attempt, gap *= 100) {
    out = MultiplicityScan{};
    out.gap_tol_used = gap;
    bool ambiguous = false;
    const auto dirs = sphere_grid(model.d, samples);
    std::vector<int> ref;
    for (const Vec& xi : dirs) {
      const Mat sym = model.flux_symbol(xi, state);
      Eigen::EigenSolver<Mat> esv(sym);
      Vec re(model.n);
      for (int i = 0; i < model.n; ++i) re(i) = esv.eigenvalues()(i).real();
      // near-tolerance gaps make the pattern unstable
      Vec sorted = re;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 1; i < sorted.size(); ++i) {
        const double g = sorted(i) - sorted(i - 1);
        if (g > gap && g < 10 * gap) ambiguous = true;
      }
      const auto pat = multiplicity_pattern(re, gap);
      if (ref.empty()) {
        ref = pat;
        out.pattern = pat;
      } else if (pat != ref) {
        out.constant = false;
        out.witness = xi;
      }
    }
    if (!ambiguous) return out;
    out.note = "gap tolerance widened";
  }
  return out;
}

}  // namespace shockspec
