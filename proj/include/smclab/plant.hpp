#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "smclab/controller.hpp"

namespace smclab {

enum class PerturbationKind { Zero, SignSigmaDot, Constant, Custom };

// Matched perturbation f acting in sigma'' = f + v. SignSigmaDot(c) emits
// c*sgn(sigmadot); a positive c co-acts with the control during descent,
// a negative c damps the motion. Custom holds one value per sample.
struct PerturbationSpec {
  PerturbationKind kind = PerturbationKind::Zero;
  double coefficient = 0.0;
  std::vector<double> table;

  static PerturbationSpec zero() { return {}; }
  static PerturbationSpec sign_sigmadot(double c) {
    return {PerturbationKind::SignSigmaDot, c, {}};
  }
  static PerturbationSpec constant(double c) {
    return {PerturbationKind::Constant, c, {}};
  }
  static PerturbationSpec custom(std::vector<double> samples) {
    return {PerturbationKind::Custom, 0.0, std::move(samples)};
  }

  double eval(std::size_t sample, double sigmadot) const;
  // Rejects specs that can exceed the bound |f| <= Phi.
  void validate(double Phi) const;
};

struct SimConfig {
  double dt = 1e-3;
  double t_max = 10.0;
  double sigma0 = 0.0;
  double sigmadot0 = 0.0;
  double mu = 0.0;       // actuator time constant; 0 = no actuator
  double conv_eps = 4e-3;
  PerturbationSpec perturbation;
  double detector_min_increment = 0.0;

  void validate() const;
};

struct ExtremumEvent {
  std::size_t sample = 0;
  double sigma_M = 0.0;
};

struct Trace {
  double dt = 1e-3;
  std::vector<double> t, sigma, sigmadot, u, v, f;
  std::vector<ExtremumEvent> events;
  std::optional<double> t_conv;

  std::size_t size() const { return t.size(); }
};

struct PlantState {
  double sigma = 0.0;
  double sigmadot = 0.0;
  double v = 0.0;
};

// One fixed step of the chain u -> v -> sigmadot -> sigma. The actuator and
// velocity integrate from step-start values; sigma integrates the updated
// velocity (semi-implicit Euler). With mu = 0 the command acts directly.
PlantState step(const PlantState& state, double t, double u,
                const SimConfig& cfg);

// Closed loop: per sample observe -> select control -> step. A run starting
// at rest (sigmadot0 == 0) seeds sigma_M = sigma(0); t = 0 is already an
// extremum and the initialization action would otherwise hold the plant
// still. t_conv is the first sample with ||(sigma, sigmadot)|| < conv_eps.
Trace run(const ControllerParams& params, const SimConfig& cfg);

// Rectangle-rule integral of |u| over [0, t_conv). Throws if t_conv absent.
double measure_energy(const Trace& trace);

// Detector events with sampling dither removed: events of equal sign closer
// than coalesce_gap samples merge, keeping the outermost value.
std::vector<ExtremumEvent> extract_extrema(const Trace& trace,
                                           std::size_t coalesce_gap = 20);

struct LimitCycleMeasurement {
  double sigma_A = 0.0;
  double omega_c = 0.0;
  int cycles_used = 0;
};

// Steady-state oscillation over the trailing (1 - settle_fraction) of the
// trace: amplitude from the mean |sigma| at extrema, frequency from the mean
// period between upward zero crossings. Absent when fewer than 4 full cycles
// fit in the tail.
std::optional<LimitCycleMeasurement> measure_limit_cycle(
    const Trace& trace, double settle_fraction = 0.5);

}  // namespace smclab
