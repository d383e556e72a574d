#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace shockspec {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// Spectral parameter (xi_tilde, lambda) together with its polar data.
struct Frequency {
  Vec xi_tilde;   // transverse wave vector, size d-1
  Complex lambda = 0.0;

  double rho = 0.0;      // |(xi_tilde, lambda)|
  Vec zeta_hat;          // unit vector (xi_tilde, Re lambda, Im lambda)/rho

  Frequency() = default;
  Frequency(Vec xi, Complex lam) : xi_tilde(std::move(xi)), lambda(lam) {
    recompute_polar();
  }
  static Frequency scalar(Complex lam) { return Frequency(Vec(0), lam); }

  double gamma() const { return lambda.real(); }
  double tau() const { return lambda.imag(); }

  void recompute_polar() {
    double s = xi_tilde.squaredNorm() + std::norm(lambda);
    rho = std::sqrt(s);
    zeta_hat.resize(xi_tilde.size() + 2);
    if (rho > 0.0) {
      zeta_hat.head(xi_tilde.size()) = xi_tilde / rho;
      zeta_hat(xi_tilde.size()) = lambda.real() / rho;
      zeta_hat(xi_tilde.size() + 1) = lambda.imag() / rho;
    } else {
      zeta_hat.setZero();
    }
  }

  /// gamma >= -theta (tau^2 + |xi|^2), the region where the frame
  /// construction stays valid.
  bool admissible(double theta) const {
    return gamma() >= -theta * (tau() * tau() + xi_tilde.squaredNorm()) - 1e-14;
  }
};

/// Point of the parabolic contour Re(lambda) = -theta1 (k^2 + |xi|^2).
struct ContourPoint {
  Vec xi_tilde;
  double k = 0.0;
  double theta1 = 0.05;

  Complex lambda() const {
    return Complex(-theta1 * (k * k + xi_tilde.squaredNorm()), k);
  }
  Frequency frequency() const { return Frequency(xi_tilde, lambda()); }
  double rho() const { return frequency().rho; }
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // rms residual of the fit
  int npoints = 0;
};

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);

/// Grid scan outcome: per-point ratios plus the fitted exponent and the
/// comparison against a predicted exponent.
struct ScanReport {
  std::string name;
  std::vector<double> rho;
  std::vector<double> ratio;
  LinearFit fit;              // log(ratio) vs log(rho)
  double predicted_exponent = 0.0;
  double tolerance = 0.15;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
  std::vector<std::vector<double>> rows;  // optional raw CSV rows
};

}  // namespace shockspec
