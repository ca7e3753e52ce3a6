#include "smclab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// radicand of the damped off-band exit velocity
double arc_radicand(const ControllerParams& p) {
  const double b2 = p.effective_beta2();
  return p.U * (1.0 - p.beta1) + p.Phi * (1.0 - 2.0 * p.beta1 + b2);
}

}  // namespace

FeasibilityReport check_feasibility(const ControllerParams& params) {
  params.validate();
  const double U = params.U, Phi = params.Phi;
  const double b1 = params.beta1, b2 = params.effective_beta2();

  FeasibilityReport r;
  r.authority_ok = U > Phi;
  r.sum_ok = b1 + b2 > 2.0 * Phi / U;
  r.beta1_ok = b1 >= 0.0 && b1 < 1.0;
  r.beta2_ok = b2 > -1.0 && b2 < b1;
  r.arc_positive = arc_radicand(params) > 0.0;
  r.twisting_ok = b1 > Phi / U;
  r.monotonic_ok = b1 > (Phi + U) / (2.0 * U);
  r.feasible = params.mode == ControlMode::Conventional
                   ? r.authority_ok && r.twisting_ok
                   : r.authority_ok && r.sum_ok && r.beta1_ok && r.beta2_ok &&
                         r.arc_positive;
  return r;
}

ReachingGeometry reaching_geometry(double sigma_Mi,
                                   const ControllerParams& params) {
  params.validate();
  if (!(sigma_Mi > 0.0)) {
    throw std::invalid_argument("sigma_Mi must be positive");
  }
  const double U = params.U, Phi = params.Phi;
  const double b1 = params.beta1, b2 = params.effective_beta2();
  const double two_s = 2.0 * sigma_Mi;

  ReachingGeometry g;
  g.sdot_Pprime = -std::sqrt(two_s * (U - Phi) * (1.0 - b1));
  g.sdot_Pdprime = -std::sqrt(two_s * (U + Phi) * (1.0 - b1));
  const double rad1 = arc_radicand(params);
  if (rad1 >= 0.0) {
    g.sdot_P1 = -std::sqrt(two_s * rad1);
  } else {
    g.sdot_P1 = std::numeric_limits<double>::quiet_NaN();
    g.arc_positive = false;
  }
  g.sdot_P2 = -std::sqrt(two_s * (U * (1.0 - b1) + Phi * (1.0 - b2)));
  return g;
}

PhaseTimes phase_times(double sigma_Mi, const ControllerParams& params) {
  params.validate();
  if (!(sigma_Mi > 0.0)) {
    throw std::invalid_argument("sigma_Mi must be positive");
  }
  const double U = params.U, Phi = params.Phi;
  const double b1 = params.beta1, b2 = params.effective_beta2();
  const double root = std::sqrt(2.0 * sigma_Mi);

  PhaseTimes t;
  t.T_prime = root * std::sqrt((U - Phi) * (1.0 - b1)) / (U - Phi);
  const double on1 = std::sqrt((U + Phi) * (1.0 - b1));
  const double off1 = std::sqrt(std::max(arc_radicand(params), 0.0));
  const double off2 = std::sqrt(U * (1.0 - b1) + Phi * (1.0 - b2));
  t.T1_double_star = root * off1 / (U - Phi);
  t.T2_double_star = root * off2 / (U - Phi);
  if (Phi > 0.0) {
    t.T1_star = root * (on1 - off1) / Phi;
    t.T2_star = root * (off2 - on1) / Phi;
    t.T1_star_max = root * on1 / Phi;
    t.T2_star_max = root * off2 / Phi;
  } else {
    t.off_phase_unbounded = true;
    t.T1_star = t.T2_star = 0.0;
    t.T1_star_max = t.T2_star_max = kInf;
  }
  return t;
}

TimeFactors time_factors(const ControllerParams& params) {
  params.validate();
  const double U = params.U, Phi = params.Phi;
  const double b1 = params.beta1, b2 = params.effective_beta2();
  if (!(U > Phi)) throw std::invalid_argument("time factors require U > Phi");

  const double on1 = std::sqrt((U + Phi) * (1.0 - b1));
  const double slow = std::sqrt((U - Phi) * (1.0 - b1));
  const double off1 = std::sqrt(std::max(arc_radicand(params), 0.0));
  const double off2 = std::sqrt(U * (1.0 - b1) + Phi * (1.0 - b2));

  TimeFactors f;
  f.Omega1_on = slow / (U - Phi) + off1 / (U - Phi);
  f.Omega2_on = slow / (U - Phi) + off2 / (U - Phi);
  f.Omega1_off = Phi > 0.0 ? on1 / Phi : kInf;
  f.Omega2_off = Phi > 0.0 ? off2 / Phi : kInf;
  f.Omega1 = f.Omega1_off + f.Omega1_on;
  f.Omega2 = f.Omega2_off + f.Omega2_on;
  f.Omega_hat = on1 / (U - Phi) + slow / (U - Phi);

  f.eta1 = std::abs(b2 - (U * (1.0 - b1) + Phi * (1.0 - 2.0 * b1 + b2)) / (U - Phi));
  f.eta2 = std::abs(b2 - (U * (1.0 - b1) + Phi * (1.0 - b2)) / (U - Phi));
  f.eta_hat = std::abs(b1 - (U + Phi) * (1.0 - b1) / (U - Phi));
  f.contractive = f.eta1 < 1.0 && f.eta2 < 1.0;
  f.contractive_hat = f.eta_hat < 1.0;
  return f;
}

double convergence_bound(const ControllerParams& params, double sigma_M1,
                         double t_M1) {
  const TimeFactors f = time_factors(params);
  double omega, eta;
  if (params.mode == ControlMode::Conventional) {
    if (!f.contractive_hat) return kInf;
    omega = f.Omega_hat;
    eta = f.eta_hat;
  } else {
    if (!f.contractive) return kInf;
    omega = std::max(f.Omega1, f.Omega2);
    eta = std::max(f.eta1, f.eta2);
  }
  return t_M1 + std::sqrt(2.0) * omega / (1.0 - std::sqrt(eta)) *
                    std::sqrt(std::abs(sigma_M1));
}

CostReport energy_cost(const ControllerParams& params,
                       bool include_conventional,
                       std::optional<double> J_hat_max) {
  const TimeFactors f = time_factors(params);
  CostReport c;
  c.contractive = f.contractive;
  if (f.contractive) {
    c.J = std::max(f.Omega1_on, f.Omega2_on) /
          (1.0 - std::max(std::sqrt(f.eta1), std::sqrt(f.eta2)));
  } else {
    c.J = kInf;
  }
  if (!include_conventional) {
    c.J_hat = std::numeric_limits<double>::quiet_NaN();
    c.delta = std::numeric_limits<double>::quiet_NaN();
    return c;
  }
  c.J_hat = f.contractive_hat ? f.Omega_hat / (1.0 - std::sqrt(f.eta_hat)) : kInf;
  c.delta = c.J - c.J_hat;
  c.constraint_ok = std::isfinite(c.delta) && c.delta < 0.0;
  c.cap_ok = J_hat_max.has_value() && c.J_hat < *J_hat_max;
  return c;
}

}  // namespace smclab
