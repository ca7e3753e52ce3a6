#include "smclab/plant.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace smclab {

double PerturbationSpec::eval(std::size_t sample, double sigmadot) const {
  switch (kind) {
    case PerturbationKind::Zero:
      return 0.0;
    case PerturbationKind::SignSigmaDot:
      return coefficient * sgn(sigmadot);
    case PerturbationKind::Constant:
      return coefficient;
    case PerturbationKind::Custom:
      return sample < table.size() ? table[sample] : 0.0;
  }
  return 0.0;
}

void PerturbationSpec::validate(double Phi) const {
  if (kind == PerturbationKind::Custom) {
    for (double x : table) {
      if (!std::isfinite(x) || std::abs(x) > Phi) {
        throw std::invalid_argument(
            "custom perturbation table exceeds the bound Phi");
      }
    }
    return;
  }
  if (!std::isfinite(coefficient) || std::abs(coefficient) > Phi) {
    throw std::invalid_argument("perturbation coefficient exceeds Phi");
  }
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("dt must be positive");
  }
  if (!(t_max >= dt)) throw std::invalid_argument("t_max must be >= dt");
  if (!(conv_eps > 0.0)) throw std::invalid_argument("conv_eps must be positive");
  if (mu < 0.0) throw std::invalid_argument("mu must be nonnegative");
  if (detector_min_increment < 0.0) {
    throw std::invalid_argument("detector_min_increment must be nonnegative");
  }
}

PlantState step(const PlantState& state, double t, double u,
                const SimConfig& cfg) {
  const std::size_t k = static_cast<std::size_t>(std::llround(t / cfg.dt));
  const double f = cfg.perturbation.eval(k, state.sigmadot);
  const double v_eff = cfg.mu > 0.0 ? state.v : u;
  PlantState next;
  next.sigmadot = state.sigmadot + cfg.dt * (f + v_eff);
  next.sigma = state.sigma + cfg.dt * next.sigmadot;
  next.v = cfg.mu > 0.0 ? state.v + cfg.dt * (u - state.v) / cfg.mu : u;
  return next;
}

Trace run(const ControllerParams& params, const SimConfig& cfg) {
  params.validate();
  cfg.validate();

  const std::size_t n = static_cast<std::size_t>(std::llround(cfg.t_max / cfg.dt));
  Trace trace;
  trace.dt = cfg.dt;
  trace.t.reserve(n + 1);
  trace.sigma.reserve(n + 1);
  trace.sigmadot.reserve(n + 1);
  trace.u.reserve(n + 1);
  trace.v.reserve(n + 1);
  trace.f.reserve(n + 1);

  const bool rest_start = cfg.sigmadot0 == 0.0;
  ExtremumDetector det(cfg.sigma0, rest_start, cfg.detector_min_increment);
  if (rest_start && cfg.sigma0 != 0.0) trace.events.push_back({0, cfg.sigma0});

  PlantState st{cfg.sigma0, cfg.sigmadot0, 0.0};
  for (std::size_t k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    if (!std::isfinite(st.sigma) || !std::isfinite(st.sigmadot) ||
        !std::isfinite(st.v)) {
      throw std::runtime_error("simulation diverged to non-finite state at t=" +
                               std::to_string(t));
    }
    if (auto hit = det.observe(st.sigma)) {
      trace.events.push_back({*hit, det.sigma_M()});
    }
    const ControlOutput out = select_control(st.sigma, det, params);
    const double f = cfg.perturbation.eval(k, st.sigmadot);
    const double v_rec = cfg.mu > 0.0 ? st.v : out.u;

    trace.t.push_back(t);
    trace.sigma.push_back(st.sigma);
    trace.sigmadot.push_back(st.sigmadot);
    trace.u.push_back(out.u);
    trace.v.push_back(v_rec);
    trace.f.push_back(f);

    if (!trace.t_conv &&
        std::sqrt(st.sigma * st.sigma + st.sigmadot * st.sigmadot) <
            cfg.conv_eps) {
      trace.t_conv = t;
    }
    st = step(st, t, out.u, cfg);
  }
  return trace;
}

double measure_energy(const Trace& trace) {
  if (!trace.t_conv) {
    throw std::invalid_argument("trace has no convergence instant");
  }
  double fuel = 0.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace.t[k] >= *trace.t_conv) break;
    fuel += std::abs(trace.u[k]) * trace.dt;
  }
  return fuel;
}

std::vector<ExtremumEvent> extract_extrema(const Trace& trace,
                                           std::size_t coalesce_gap) {
  std::vector<ExtremumEvent> out;
  for (const auto& ev : trace.events) {
    if (!out.empty() && ev.sample - out.back().sample <= coalesce_gap) {
      const double a = out.back().sigma_M;
      const double b = ev.sigma_M;
      const bool same_side = a == 0.0 || b == 0.0 || (a > 0.0) == (b > 0.0);
      if (same_side) {
        if (std::abs(b) > std::abs(a)) out.back() = ev;
        continue;
      }
    }
    out.push_back(ev);
  }
  return out;
}

std::optional<LimitCycleMeasurement> measure_limit_cycle(
    const Trace& trace, double settle_fraction) {
  if (!(settle_fraction > 0.0 && settle_fraction < 1.0)) {
    throw std::invalid_argument("settle_fraction must be in (0,1)");
  }
  const std::size_t n = trace.size();
  if (n < 2) return std::nullopt;
  const auto k0 = static_cast<std::size_t>(settle_fraction * static_cast<double>(n));

  const auto extrema = extract_extrema(trace);
  double amp_sum = 0.0;
  int amp_count = 0;
  for (const auto& ev : extrema) {
    if (ev.sample >= k0) {
      amp_sum += std::abs(ev.sigma_M);
      ++amp_count;
    }
  }

  std::vector<double> crossings;
  for (std::size_t i = k0 + 1; i < n; ++i) {
    if (trace.sigma[i - 1] < 0.0 && trace.sigma[i] >= 0.0) {
      crossings.push_back(trace.t[i]);
    }
  }
  const int cycles = static_cast<int>(crossings.size()) - 1;
  if (cycles < 4 || amp_count < 4) return std::nullopt;

  const double period = (crossings.back() - crossings.front()) /
                        static_cast<double>(cycles);
  LimitCycleMeasurement m;
  m.sigma_A = amp_sum / static_cast<double>(amp_count);
  m.omega_c = 2.0 * M_PI / period;
  m.cycles_used = cycles;
  return m;
}

}  // namespace smclab
