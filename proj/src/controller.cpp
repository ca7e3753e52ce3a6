#include "smclab/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace smclab {

void ControllerParams::validate() const {
  if (!std::isfinite(U) || !std::isfinite(Phi) || !std::isfinite(beta1) ||
      !std::isfinite(beta2)) {
    throw std::invalid_argument("controller params must be finite");
  }
  if (U <= 0.0) throw std::invalid_argument("U must be positive");
  if (Phi < 0.0) throw std::invalid_argument("Phi must be nonnegative");
}

ExtremumDetector::ExtremumDetector(double sigma0, bool start_at_extremum,
                                   double min_increment)
    : sigma0_(sigma0), min_increment_(min_increment) {
  if (start_at_extremum) {
    sigma_M_ = sigma0;
    initializing_ = false;
  }
}

std::optional<std::size_t> ExtremumDetector::observe(double sigma) {
  const std::size_t k = count_++;
  if (!prev_sigma_) {
    prev_sigma_ = sigma;
    return std::nullopt;
  }
  const double d = sigma - *prev_sigma_;
  const int s = std::abs(d) <= min_increment_ ? 0 : sgn(d);
  std::optional<std::size_t> hit;
  if (s != 0) {
    if (prev_delta_ != 0 && s != prev_delta_) {
      sigma_M_ = *prev_sigma_;
      initializing_ = false;
      hit = k - 1;
    }
    prev_delta_ = s;
  } else if (initializing_ && prev_delta_ != 0) {
    // horizontal flex while initializing: motion has paused
    sigma_M_ = sigma;
    initializing_ = false;
    hit = k;
  }
  prev_sigma_ = sigma;
  return hit;
}

namespace {

void check_finite(double sigma) {
  if (!std::isfinite(sigma)) {
    throw std::invalid_argument("sigma must be finite");
  }
}

ControlPhase phase_of(double u, double half_u) {
  if (u == 0.0 || std::abs(u) == half_u) return ControlPhase::Off;
  return u > 0.0 ? ControlPhase::OnPositive : ControlPhase::OnNegative;
}

}  // namespace

ControlOutput control_energy_saving(double sigma, const ExtremumDetector& state,
                                    const ControllerParams& params) {
  check_finite(sigma);
  const double sM = state.sigma_M();
  const double u = -0.5 * params.U * sgn(sigma - params.beta1 * sM) -
                   0.5 * params.U * sgn(sigma - params.effective_beta2() * sM);
  const ControlPhase phase = phase_of(u, 0.5 * params.U);
  // exact threshold hit: one term zero, the sample sits on a band boundary
  return {std::abs(u) == 0.5 * params.U ? 0.0 : u, phase};
}

ControlOutput control_conventional(double sigma, const ExtremumDetector& state,
                                   const ControllerParams& params) {
  check_finite(sigma);
  const double u = -params.U * sgn(sigma - params.beta1 * state.sigma_M());
  return {u, phase_of(u, 0.5 * params.U)};
}

ControlOutput control_init(double sigma, const ExtremumDetector& state,
                           const ControllerParams& params) {
  check_finite(sigma);
  const double u = -params.U * sgn(sigma - state.sigma0());
  return {u, ControlPhase::Init};
}

ControlOutput select_control(double sigma, const ExtremumDetector& state,
                             const ControllerParams& params) {
  if (state.initializing()) return control_init(sigma, state, params);
  return params.mode == ControlMode::Conventional
             ? control_conventional(sigma, state, params)
             : control_energy_saving(sigma, state, params);
}

}  // namespace smclab
