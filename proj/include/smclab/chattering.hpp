#pragma once

#include <complex>

#include "smclab/controller.hpp"
#include "smclab/plant.hpp"

namespace smclab {

// First-harmonic describing function of the controller seen as a three-state
// hysteresis relay with thresholds beta1 sigma_A, beta2 sigma_A.
struct DFValue {
  double re = 0.0;
  double im = 0.0;
  double angle_neg_recip = 0.0;  // clockwise angle of -1/N

  std::complex<double> value() const { return {re, im}; }
};

DFValue describing_function(double sigma_A, const ControllerParams& params);

// Double integrator with first-order actuator lag, W(s) = 1/(s^2 (mu s + 1)).
std::complex<double> actuator_plant_response(double omega, double mu);

// Harmonic-balance solution N(sigma_A) W(j omega) + 1 = 0. omega_c comes from
// the phase condition in closed form. sigma_A is the closed-form amplitude
// 1/(omega^2 sqrt(mu^2 omega^2 + 1)), which assumes U = 1; sigma_A_balanced
// rescales it through the magnitude condition |N| |W| = 1 and is the value at
// which the balance residual is evaluated.
struct ChatteringPrediction {
  bool exists = false;
  double omega_c = 0.0;
  double sigma_A = 0.0;
  double sigma_A_balanced = 0.0;
  double balance_residual = 0.0;  // |N W + 1| at (omega_c, sigma_A_balanced)
  double phase_residual = 0.0;    // |arg W - (pi + phi)| at omega_c
};

ChatteringPrediction harmonic_balance(double mu, const ControllerParams& params);

// Relative deviation of a measured limit cycle from the prediction,
// referenced to the predicted values.
struct ChatteringComparison {
  double omega_rel_err = 0.0;
  double sigma_rel_err = 0.0;
};

ChatteringComparison compare_prediction(const ChatteringPrediction& pred,
                                        const LimitCycleMeasurement& meas);

}  // namespace smclab
