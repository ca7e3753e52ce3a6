#pragma once

#include <cstddef>
#include <optional>

namespace smclab {

// sign with sgn(0) = 0, so the switching laws emit exactly 0 on a threshold
inline int sgn(double x) { return (x > 0.0) - (x < 0.0); }

enum class ControlMode { EnergySaving, Conventional };

// Switching thresholds and control authority of the sub-optimal SMC.
// U is the control magnitude, Phi the perturbation bound |f| <= Phi,
// beta1/beta2 the outer/inner threshold factors of the relay law.
struct ControllerParams {
  double U = 1.0;
  double Phi = 0.0;
  double beta1 = 0.5;
  double beta2 = 0.5;
  ControlMode mode = ControlMode::EnergySaving;

  // Conventional mode ignores beta2 and behaves as beta2 == beta1.
  double effective_beta2() const {
    return mode == ControlMode::Conventional ? beta1 : beta2;
  }
  // Throws std::invalid_argument on U <= 0, Phi < 0 or non-finite fields.
  void validate() const;
};

enum class ControlPhase { OnNegative, Off, OnPositive, Init };

struct ControlOutput {
  double u = 0.0;
  ControlPhase phase = ControlPhase::Off;
};

// Recursive extremum detection on sampled sigma, no access to sigmadot.
// Rise->fall or fall->rise of the inter-sample increment marks an extremum
// at the previous sample; while initializing, the first zero increment after
// nonzero motion marks a horizontal flex. Increments with |d| <= min_increment
// count as zero.
class ExtremumDetector {
 public:
  ExtremumDetector(double sigma0, bool start_at_extremum,
                   double min_increment = 0.0);

  // Feed one sample, in time order. Returns the sample index of the turning
  // point when an extremum was detected, std::nullopt otherwise.
  std::optional<std::size_t> observe(double sigma);

  double sigma_M() const { return sigma_M_; }
  bool initializing() const { return initializing_; }
  double sigma0() const { return sigma0_; }
  int prev_delta() const { return prev_delta_; }
  std::size_t samples_seen() const { return count_; }

 private:
  double sigma_M_ = 0.0;
  double sigma0_ = 0.0;
  std::optional<double> prev_sigma_;
  int prev_delta_ = 0;  // sign of last nonzero increment
  bool initializing_ = true;
  double min_increment_ = 0.0;
  std::size_t count_ = 0;
};

// u = -0.5 U sgn(sigma - beta1 sigma_M) - 0.5 U sgn(sigma - beta2 sigma_M).
// An exact threshold hit (one sgn term zero) belongs to the off band.
ControlOutput control_energy_saving(double sigma, const ExtremumDetector& state,
                                    const ControllerParams& params);

// u = -U sgn(sigma - beta1 sigma_M); identical to the energy-saving law with
// beta2 == beta1 for every input.
ControlOutput control_conventional(double sigma, const ExtremumDetector& state,
                                   const ControllerParams& params);

// Initialization action u = -U sgn(sigma - sigma(0)), active until the first
// extremum has been detected.
ControlOutput control_init(double sigma, const ExtremumDetector& state,
                           const ControllerParams& params);

// Init law while the detector is initializing, then the mode's law.
ControlOutput select_control(double sigma, const ExtremumDetector& state,
                             const ControllerParams& params);

}  // namespace smclab
