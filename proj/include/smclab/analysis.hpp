#pragma once

#include <optional>

#include "smclab/controller.hpp"

namespace smclab {

// Parametric convergence conditions. The energy-saving triangle is
// beta1 + beta2 > 2 Phi / U, 0 <= beta1 < 1, -1 < beta2 < beta1, plus
// positivity of the control-off arc radicand; the conventional law needs
// U > Phi and beta1 > Phi / U.
struct FeasibilityReport {
  bool authority_ok = false;   // U > Phi
  bool sum_ok = false;         // beta1 + beta2 > 2 Phi / U
  bool beta1_ok = false;       // 0 <= beta1 < 1
  bool beta2_ok = false;       // -1 < beta2 < beta1
  bool arc_positive = false;   // U(1-b1) + Phi(1-2 b1+b2) > 0
  bool twisting_ok = false;    // beta1 > Phi / U
  bool monotonic_ok = false;   // beta1 > (Phi + U) / (2U)
  bool feasible = false;
};

FeasibilityReport check_feasibility(const ControllerParams& params);

// Worst-case velocities at the peaking points of one reaching cycle,
// for a positive extremum sigma_Mi (all four are <= 0).
struct ReachingGeometry {
  double sdot_Pprime = 0.0;    // slowest entry into the off band
  double sdot_Pdprime = 0.0;   // fastest entry (co-acting perturbation)
  double sdot_P1 = 0.0;        // off-band exit, perturbation damping
  double sdot_P2 = 0.0;        // off-band exit, perturbation co-acting
  bool arc_positive = true;    // sdot_P1 radicand was positive
};

ReachingGeometry reaching_geometry(double sigma_Mi,
                                   const ControllerParams& params);

// Worst-case (slowest) durations of the individual phases of one reaching
// cycle. The off-band times divide by Phi; at Phi = 0 they are reported as
// unbounded (off_phase_unbounded) and left at infinity.
struct PhaseTimes {
  double T_prime = 0.0;        // first control-on phase
  double T1_star = 0.0;        // off phase against the perturbation
  double T2_star = 0.0;        // off phase with the perturbation
  double T1_star_max = 0.0;
  double T2_star_max = 0.0;
  double T1_double_star = 0.0; // second control-on phase, damped exit
  double T2_double_star = 0.0; // second control-on phase, co-acting exit
  bool off_phase_unbounded = false;
};

PhaseTimes phase_times(double sigma_Mi, const ControllerParams& params);

// Amplification factors Omega (reaching time over sqrt(2 sigma_Mi)) split
// into control-on and control-off parts, and contraction factors eta of the
// extremum sequence. Omega_hat/eta_hat are the conventional counterparts.
struct TimeFactors {
  double Omega1 = 0.0, Omega2 = 0.0;
  double Omega1_on = 0.0, Omega2_on = 0.0;
  double Omega1_off = 0.0, Omega2_off = 0.0;
  double Omega_hat = 0.0;
  double eta1 = 0.0, eta2 = 0.0, eta_hat = 0.0;
  bool contractive = false;      // eta1 < 1 and eta2 < 1
  bool contractive_hat = false;  // eta_hat < 1
};

TimeFactors time_factors(const ControllerParams& params);

// Upper bound on the convergence time given the first extremum sigma_M1
// reached at t_M1. Non-contractive factors yield +infinity.
double convergence_bound(const ControllerParams& params, double sigma_M1,
                         double t_M1);

// Energy cost functions: J counts only control-on time of the energy-saving
// law, J_hat the always-on time of the conventional law at the same beta1.
struct CostReport {
  double J = 0.0;
  double J_hat = 0.0;
  double delta = 0.0;          // J - J_hat
  bool constraint_ok = false;  // delta < 0
  bool cap_ok = false;         // J_hat < J_hat_max (when a cap was given)
  bool contractive = false;
};

CostReport energy_cost(const ControllerParams& params,
                       bool include_conventional = true,
                       std::optional<double> J_hat_max = std::nullopt);

}  // namespace smclab
