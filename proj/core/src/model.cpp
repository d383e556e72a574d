#include "shockspec/model.hpp"

#include <cmath>

#include "shockspec/errors.hpp"

namespace shockspec {

namespace {

void check_state(const Vec& u, int n, const std::string& who) {
  if (u.size() != n)
    throw EvaluatorDomain(who + ": state size " + std::to_string(u.size()) +
                          " != n=" + std::to_string(n));
  if (!u.allFinite()) throw EvaluatorDomain(who + ": non-finite state");
}

}  // namespace

Vec SystemModel::flux_at(int j, const Vec& u) const {
  check_state(u, n, name + ".flux");
  Vec f = flux.at(j)(u);
  if (!f.allFinite()) throw EvaluatorDomain(name + ": flux returned non-finite");
  return f;
}

Mat SystemModel::jac(int j, const Vec& u) const {
  check_state(u, n, name + ".jac");
  return flux_jac.at(j)(u);
}

Mat SystemModel::visc(int j, int k, const Vec& u) const {
  check_state(u, n, name + ".visc");
  return viscosity(j, k, u);
}

Mat SystemModel::visc_dir_deriv(int j, int k, const Vec& u, const Vec& w) const {
  if (viscosity_deriv) return viscosity_deriv(j, k, u, w);
  // central difference along w
  const double h = 1e-6 * std::max(1.0, u.norm()) / std::max(1e-30, w.norm());
  return (visc(j, k, u + h * w) - visc(j, k, u - h * w)) / (2 * h);
}

Mat SystemModel::b1(int j, int k, const Vec& u) const {
  return visc(j, k, u).bottomLeftCorner(r, n - r);
}

Mat SystemModel::b2(int j, int k, const Vec& u) const {
  return visc(j, k, u).bottomRightCorner(r, r);
}

Mat SystemModel::flux_symbol(const Vec& xi, const Vec& u) const {
  Mat s = Mat::Zero(n, n);
  for (int j = 0; j < d; ++j) s += xi(j) * jac(j, u);
  return s;
}

Mat SystemModel::visc_symbol(const Vec& xi, const Vec& u) const {
  Mat s = Mat::Zero(n, n);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) s += xi(j) * xi(k) * visc(j, k, u);
  return s;
}

// ---- Burgers ---------------------------------------------------------------

SystemModel make_burgers(int d) {
  SystemModel m;
  m.n = 1;
  m.r = 1;
  m.d = d;
  m.name = "burgers";
  for (int j = 0; j < d; ++j) {
    m.flux.push_back([](const Vec& u) {
      Vec f(1);
      f(0) = 0.5 * u(0) * u(0);
      return f;
    });
    m.flux_jac.push_back([](const Vec& u) {
      Mat a(1, 1);
      a(0, 0) = u(0);
      return a;
    });
  }
  m.viscosity = [](int j, int k, const Vec&) {
    Mat b = Mat::Zero(1, 1);
    if (j == k) b(0, 0) = 1.0;
    return b;
  };
  m.viscosity_deriv = [](int, int, const Vec&, const Vec&) {
    return Mat::Zero(1, 1);
  };
  m.sym_A0 = [](const Vec&) { return Mat::Identity(1, 1); };
  m.sym_A = [](int, const Vec& u) {
    Mat a(1, 1);
    a(0, 0) = u(0);
    return a;
  };
  m.sym_b2 = [](int j, int k, const Vec&) {
    Mat b = Mat::Zero(1, 1);
    if (j == k) b(0, 0) = 1.0;
    return b;
  };
  return m;
}

Endstates burgers_endstates(double um, double up) {
  Endstates e;
  e.u_minus = Vec::Constant(1, um);
  e.u_plus = Vec::Constant(1, up);
  return e;
}

// ---- isentropic gas --------------------------------------------------------
//
// Conserved variables (rho, m_1, ..., m_d); pressure p = K rho^gamma;
// viscosity mu on each velocity component.  Velocities u_i = m_i / rho.

namespace {

struct GasParams {
  int d;
  double gamma, K, mu;
  double p(double rho) const { return K * std::pow(rho, gamma); }
  double c2(double rho) const { return gamma * K * std::pow(rho, gamma - 1.0); }
};

}  // namespace

SystemModel make_isentropic(int d, double gamma_gas, double K, double mu) {
  GasParams gp{d, gamma_gas, K, mu};
  const int n = d + 1;
  SystemModel m;
  m.n = n;
  m.r = d;
  m.d = d;
  m.name = "isentropic";

  auto check_rho = [n](const Vec& u) {
    if (u(0) <= 0.0) throw EvaluatorDomain("isentropic: rho <= 0");
    (void)n;
  };

  for (int j = 0; j < d; ++j) {
    m.flux.push_back([gp, j, check_rho](const Vec& u) {
      check_rho(u);
      const double rho = u(0);
      Vec f = Vec::Zero(gp.d + 1);
      const double uj = u(1 + j) / rho;
      f(0) = u(1 + j);
      for (int i = 0; i < gp.d; ++i) f(1 + i) = u(1 + i) * uj;
      f(1 + j) += gp.p(rho);
      return f;
    });
    m.flux_jac.push_back([gp, j, check_rho](const Vec& u) {
      check_rho(u);
      const double rho = u(0);
      const double uj = u(1 + j) / rho;
      Mat a = Mat::Zero(gp.d + 1, gp.d + 1);
      a(0, 1 + j) = 1.0;
      for (int i = 0; i < gp.d; ++i) {
        const double ui = u(1 + i) / rho;
        // d/drho (m_i m_j / rho) = -u_i u_j ; d/dm_i, d/dm_j
        a(1 + i, 0) = -ui * uj;
        a(1 + i, 1 + i) += uj;
        a(1 + i, 1 + j) += ui;
      }
      a(1 + j, 0) += gp.c2(rho);
      return a;
    });
  }

  m.viscosity = [gp](int j, int k, const Vec& u) {
    Mat b = Mat::Zero(gp.d + 1, gp.d + 1);
    if (j != k) return b;
    const double rho = u(0);
    for (int i = 0; i < gp.d; ++i) {
      // mu * d(u_i) = mu * (dm_i - u_i drho)/rho
      b(1 + i, 0) = -gp.mu * u(1 + i) / (rho * rho);
      b(1 + i, 1 + i) = gp.mu / rho;
    }
    return b;
  };
  m.viscosity_deriv = [gp](int j, int k, const Vec& u, const Vec& w) {
    Mat db = Mat::Zero(gp.d + 1, gp.d + 1);
    if (j != k) return db;
    const double rho = u(0);
    for (int i = 0; i < gp.d; ++i) {
      db(1 + i, 0) = -gp.mu * (w(1 + i) * rho - 2.0 * u(1 + i) * w(0)) /
                     (rho * rho * rho);
      db(1 + i, 1 + i) = -gp.mu * w(0) / (rho * rho);
    }
    return db;
  };

  // symmetric variables (sigma(rho), u_1 .. u_d), sigma' = c/rho
  m.sym_A0 = [n](const Vec&) { return Mat::Identity(n, n); };
  m.sym_A = [gp](int j, const Vec& u) {
    const double rho = u(0);
    const double c = std::sqrt(gp.c2(rho));
    const double uj = u(1 + j) / rho;
    Mat a = Mat::Zero(gp.d + 1, gp.d + 1);
    for (int i = 0; i < gp.d + 1; ++i) a(i, i) = uj;
    a(0, 1 + j) = c;
    a(1 + j, 0) = c;
    return a;
  };
  m.sym_b2 = [gp](int j, int k, const Vec& u) {
    Mat b = Mat::Zero(gp.d, gp.d);
    if (j == k)
      for (int i = 0; i < gp.d; ++i) b(i, i) = gp.mu / u(0);
    return b;
  };
  return m;
}

Endstates isentropic_lax_endstates(const SystemModel& m, double rho_minus,
                                   double u_minus) {
  // momentum flux balance: m0^2/rho + p(rho) equal at both states
  const double m0 = rho_minus * u_minus;
  Vec probe = Vec::Zero(m.n);
  probe(0) = rho_minus;
  // infer K, gamma from the model's sound speed: c2 = gamma K rho^(gamma-1)
  // (solve h(rho) = 0 by bisection + Newton using flux evaluations only)
  auto h = [&](double rho) {
    Vec u = Vec::Zero(m.n);
    u(0) = rho;
    u(1) = m0;
    Vec f = m.flux_at(0, u);
    Vec ul = Vec::Zero(m.n);
    ul(0) = rho_minus;
    ul(1) = m0;
    Vec fl = m.flux_at(0, ul);
    return f(1) - fl(1);
  };
  double lo = rho_minus * (1.0 + 1e-8), hi = rho_minus;
  // expand until sign change (compressive branch rho+ > rho-)
  double hlo = h(lo);
  for (hi = rho_minus * 1.5; hi < rho_minus * 50; hi *= 1.5) {
    if (h(hi) * hlo < 0) break;
  }
  if (h(hi) * hlo >= 0)
    throw NoConnection("isentropic_lax_endstates: no downstream root");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if (hm == 0.0) {
      lo = hi = mid;
      break;
    }
    (hm * hlo < 0 ? hi : lo) = mid;
    if (hi - lo < 1e-15 * hi) break;
  }
  const double rho_plus = 0.5 * (lo + hi);
  Endstates e;
  e.u_minus = Vec::Zero(m.n);
  e.u_minus(0) = rho_minus;
  e.u_minus(1) = m0;
  e.u_plus = Vec::Zero(m.n);
  e.u_plus(0) = rho_plus;
  e.u_plus(1) = m0;
  return e;
}

// ---- synthetic 3x3 ---------------------------------------------------------
//
// F1(U) = (u1 + u1^2/2, u2, -u3), F2(U) = (0, u3, u2), unit viscosity.
// Characteristic roots of the full symbol at u1=0: {xi1, +|xi|, -|xi|},
// coalescing on the rays xi2 = 0.

SystemModel make_synthetic3x3() {
  SystemModel m;
  m.n = 3;
  m.r = 3;
  m.d = 2;
  m.name = "synthetic3x3";
  m.totally_nonglancing = true;  // declared, used by the h5 scan paths
  m.flux.push_back([](const Vec& u) {
    Vec f(3);
    f << u(0) + 0.5 * u(0) * u(0), u(1), -u(2);
    return f;
  });
  m.flux_jac.push_back([](const Vec& u) {
    Mat a = Mat::Zero(3, 3);
    a(0, 0) = 1.0 + u(0);
    a(1, 1) = 1.0;
    a(2, 2) = -1.0;
    return a;
  });
  m.flux.push_back([](const Vec& u) {
    Vec f(3);
    f << 0.0, u(2), u(1);
    return f;
  });
  m.flux_jac.push_back([](const Vec&) {
    Mat a = Mat::Zero(3, 3);
    a(1, 2) = 1.0;
    a(2, 1) = 1.0;
    return a;
  });
  m.viscosity = [](int j, int k, const Vec&) {
    return (j == k) ? Mat::Identity(3, 3).eval() : Mat::Zero(3, 3).eval();
  };
  m.viscosity_deriv = [](int, int, const Vec&, const Vec&) {
    return Mat::Zero(3, 3);
  };
  m.sym_A0 = [](const Vec&) { return Mat::Identity(3, 3); };
  m.sym_A = [&](int j, const Vec& u) {
    if (j == 0) {
      Mat a = Mat::Zero(3, 3);
      a(0, 0) = 1.0 + u(0);
      a(1, 1) = 1.0;
      a(2, 2) = -1.0;
      return a;
    }
    Mat a = Mat::Zero(3, 3);
    a(1, 2) = 1.0;
    a(2, 1) = 1.0;
    return a;
  };
  m.sym_b2 = [](int j, int k, const Vec&) {
    return (j == k) ? Mat::Identity(3, 3).eval() : Mat::Zero(3, 3).eval();
  };
  return m;
}

Endstates synthetic3x3_endstates() {
  Endstates e;
  e.u_minus = Vec::Zero(3);
  e.u_minus(0) = 1.0;
  e.u_plus = Vec::Zero(3);
  e.u_plus(0) = -3.0;
  return e;
}

// ---- overcompressive cubic model -------------------------------------------
//
// F(U) = (|U|^2 - s) U in the frame of a shock moving with speed
// s = rp^2 + rp*rm + rm^2;  endstates (rm, 0), (rp, 0) colinear.

namespace {
constexpr double kOcRm = 1.0;
constexpr double kOcRp = -0.4;
constexpr double kOcS = kOcRp * kOcRp + kOcRp * kOcRm + kOcRm * kOcRm;  // 0.76
}  // namespace

SystemModel make_overcompressive() {
  SystemModel m;
  m.n = 2;
  m.r = 2;
  m.d = 1;
  m.name = "overcompressive";
  m.flux.push_back([](const Vec& u) {
    const double q = u.squaredNorm() - kOcS;
    return Vec(q * u);
  });
  m.flux_jac.push_back([](const Vec& u) {
    const double q = u.squaredNorm() - kOcS;
    Mat a = q * Mat::Identity(2, 2) + 2.0 * u * u.transpose();
    return a;
  });
  m.viscosity = [](int, int, const Vec&) { return Mat::Identity(2, 2); };
  m.viscosity_deriv = [](int, int, const Vec&, const Vec&) {
    return Mat::Zero(2, 2);
  };
  m.sym_A0 = [](const Vec&) { return Mat::Identity(2, 2); };
  m.sym_A = [m](int, const Vec& u) {
    const double q = u.squaredNorm() - kOcS;
    return Mat(q * Mat::Identity(2, 2) + 2.0 * u * u.transpose());
  };
  m.sym_b2 = [](int, int, const Vec&) { return Mat::Identity(2, 2); };
  return m;
}

Endstates overcompressive_endstates() {
  Endstates e;
  e.u_minus = Vec::Zero(2);
  e.u_minus(0) = kOcRm;
  e.u_plus = Vec::Zero(2);
  e.u_plus(0) = kOcRp;
  return e;
}

// ---- undercompressive model ------------------------------------------------
//
// u_t + (u^2/2)_x = u_xx,  v_t + (-u v)_x = v_xx.  Along the Burgers
// profile the v-characteristic -ubar(x) is outgoing on both sides.

SystemModel make_undercompressive() {
  SystemModel m;
  m.n = 2;
  m.r = 2;
  m.d = 1;
  m.name = "undercompressive";
  m.flux.push_back([](const Vec& u) {
    Vec f(2);
    f << 0.5 * u(0) * u(0), -u(0) * u(1);
    return f;
  });
  m.flux_jac.push_back([](const Vec& u) {
    Mat a(2, 2);
    a << u(0), 0.0, -u(1), -u(0);
    return a;
  });
  m.viscosity = [](int, int, const Vec&) { return Mat::Identity(2, 2); };
  m.viscosity_deriv = [](int, int, const Vec&, const Vec&) {
    return Mat::Zero(2, 2);
  };
  m.sym_A0 = [](const Vec&) { return Mat::Identity(2, 2); };
  m.sym_A = [](int, const Vec& u) {
    Mat a(2, 2);
    a << u(0), 0.0, -u(1), -u(0);
    return a;
  };
  m.sym_b2 = [](int, int, const Vec&) { return Mat::Identity(2, 2); };
  return m;
}

Endstates undercompressive_endstates() {
  Endstates e;
  e.u_minus = Vec(2);
  e.u_minus << 1.0, 0.0;
  e.u_plus = Vec(2);
  e.u_plus << -1.0, 0.0;
  return e;
}

// ---- constant coefficient --------------------------------------------------

SystemModel make_constant_coefficient(double a, double b) {
  SystemModel m;
  m.n = 1;
  m.r = 1;
  m.d = 1;
  m.name = "constcoef";
  m.flux.push_back([a](const Vec& u) { return Vec(a * u); });
  m.flux_jac.push_back([a](const Vec&) { return Mat(Mat::Constant(1, 1, a)); });
  m.viscosity = [b](int, int, const Vec&) { return Mat::Constant(1, 1, b); };
  m.viscosity_deriv = [](int, int, const Vec&, const Vec&) {
    return Mat::Zero(1, 1);
  };
  m.sym_A0 = [](const Vec&) { return Mat::Identity(1, 1); };
  m.sym_A = [a](int, const Vec&) { return Mat(Mat::Constant(1, 1, a)); };
  m.sym_b2 = [b](int, int, const Vec&) { return Mat(Mat::Constant(1, 1, b)); };
  return m;
}

SystemModel make_builtin(const std::string& id, int d) {
  if (id == "burgers") return make_burgers(d);
  if (id == "isentropic") return make_isentropic(d);
  if (id == "synthetic3x3") return make_synthetic3x3();
  if (id == "overcompressive") return make_overcompressive();
  if (id == "undercompressive") return make_undercompressive();
  if (id == "constcoef") return make_constant_coefficient(1.0, 1.0);
  throw ValidationError("unknown builtin model '" + id + "'");
}

}  // namespace shockspec
