#include "smclab/chattering.hpp"

#include <cmath>
#include <stdexcept>

namespace smclab {

namespace {

void check_df_domain(double sigma_A, const ControllerParams& p) {
  if (!(sigma_A > 0.0)) throw std::invalid_argument("sigma_A must be positive");
  if (std::abs(p.beta1) > 1.0 || std::abs(p.effective_beta2()) > 1.0) {
    throw std::invalid_argument("thresholds must satisfy |beta| <= 1");
  }
}

}  // namespace

DFValue describing_function(double sigma_A, const ControllerParams& params) {
  params.validate();
  check_df_domain(sigma_A, params);
  const double b1 = params.beta1;
  DFValue df;
  if (params.mode == ControlMode::Conventional) {
    const double c1 = std::sqrt(1.0 - b1 * b1);
    const double gain = 4.0 * params.U / (M_PI * sigma_A);
    df.re = gain * c1;
    df.im = gain * b1;
    df.angle_neg_recip = std::atan(-b1 / c1);
  } else {
    const double b2 = params.beta2;
    const double c1 = std::sqrt(1.0 - b1 * b1);
    const double c2 = std::sqrt(1.0 - b2 * b2);
    const double gain = 2.0 * params.U / (M_PI * sigma_A);
    df.re = gain * (c1 + c2);
    df.im = gain * (b1 + b2);
    df.angle_neg_recip = std::atan(-(b1 + b2) / (c1 + c2));
  }
  return df;
}

std::complex<double> actuator_plant_response(double omega, double mu) {
  return -1.0 / std::complex<double>(omega * omega, mu * omega * omega * omega);
}

ChatteringPrediction harmonic_balance(double mu, const ControllerParams& params) {
  params.validate();
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  const double b1 = params.beta1;
  const double b2 = params.effective_beta2();
  if (std::abs(b1) > 1.0 || std::abs(b2) > 1.0) {
    throw std::invalid_argument("thresholds must satisfy |beta| <= 1");
  }

  ChatteringPrediction pred;
  if (b1 + b2 <= 0.0) return pred;  // no intersection at positive frequency

  const double c1 = std::sqrt(1.0 - b1 * b1);
  const double c2 = std::sqrt(1.0 - b2 * b2);
  const double omega = (b1 + b2) / (mu * (c1 + c2));
  const double w2 = omega * omega;
  const double lag = std::sqrt(mu * mu * w2 + 1.0);

  pred.exists = true;
  pred.omega_c = omega;
  pred.sigma_A = 1.0 / (w2 * lag);
  // magnitude condition |N(sigma_A)| |W(j omega)| = 1 with the mode's gain
  const double gain = params.mode == ControlMode::Conventional
                          ? 4.0 * params.U / M_PI
                          : 2.0 * params.U / M_PI;
  const double modulus = params.mode == ControlMode::Conventional
                             ? std::hypot(c1, b1)
                             : std::hypot(c1 + c2, b1 + b2);
  pred.sigma_A_balanced = gain * modulus / (w2 * lag);

  const std::complex<double> W = actuator_plant_response(omega, mu);
  const DFValue df = describing_function(pred.sigma_A_balanced, params);
  pred.balance_residual = std::abs(df.value() * W + 1.0);
  pred.phase_residual =
      std::abs(std::arg(W) - (M_PI + df.angle_neg_recip));
  return pred;
}

ChatteringComparison compare_prediction(const ChatteringPrediction& pred,
                                        const LimitCycleMeasurement& meas) {
  if (!pred.exists) throw std::invalid_argument("prediction absent");
  ChatteringComparison c;
  c.omega_rel_err = std::abs(pred.omega_c - meas.omega_c) / pred.omega_c;
  c.sigma_rel_err = std::abs(pred.sigma_A - meas.sigma_A) / pred.sigma_A;
  return c;
}

}  // namespace smclab
