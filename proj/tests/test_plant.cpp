#include <doctest.h>

#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <random>

#include "smclab/analysis.hpp"
#include "smclab/plant.hpp"

using namespace smclab;

namespace {

ControllerParams es(double U, double Phi, double b1, double b2) {
  return {U, Phi, b1, b2, ControlMode::EnergySaving};
}

SimConfig basic_cfg(double t_max = 2.0) {
  SimConfig cfg;
  cfg.t_max = t_max;
  return cfg;
}

}  // namespace

TEST_SUITE("plant") {

TEST_CASE("one step from rest under full control") {
  SimConfig cfg;
  const PlantState next = step({0.0, 0.0, 0.0}, 0.0, 1.0, cfg);
  CHECK(next.sigmadot == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(next.sigma == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(next.v == 1.0);
}

TEST_CASE("free drift step") {
  SimConfig cfg;
  const PlantState next = step({0.0, 1.0, 0.0}, 0.0, 0.0, cfg);
  CHECK(next.sigma == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(next.sigmadot == 1.0);
}

TEST_CASE("actuator lag step") {
  SimConfig cfg;
  cfg.mu = 0.01;
  const PlantState next = step({0.0, 0.0, 0.0}, 0.0, 1.0, cfg);
  CHECK(next.v == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("equilibrium start converges immediately") {
  auto cfg = basic_cfg(1.0);
  const Trace tr = run(es(1.0, 0.0, 0.7, 0.7), cfg);
  REQUIRE(tr.t_conv.has_value());
  CHECK(*tr.t_conv == 0.0);
  for (double s : tr.sigma) CHECK(s == 0.0);
  CHECK(extract_extrema(tr).empty());
}

TEST_CASE("identical configs give bit-identical traces") {
  auto cfg = basic_cfg(3.0);
  cfg.sigma0 = 0.5;
  cfg.perturbation = PerturbationSpec::sign_sigmadot(0.3);
  const auto p = es(1.0, 0.3, 0.7, 0.55);
  const Trace a = run(p, cfg);
  const Trace b = run(p, cfg);
  CHECK(a.sigma == b.sigma);
  CHECK(a.sigmadot == b.sigmadot);
  CHECK(a.u == b.u);
  CHECK(a.t_conv == b.t_conv);
}

TEST_CASE("trace series are aligned and time is uniform") {
  auto cfg = basic_cfg(1.0);
  cfg.sigma0 = 0.3;
  const Trace tr = run(es(1.0, 0.0, 0.7, 0.55), cfg);
  CHECK(tr.sigma.size() == tr.t.size());
  CHECK(tr.sigmadot.size() == tr.t.size());
  CHECK(tr.u.size() == tr.t.size());
  CHECK(tr.v.size() == tr.t.size());
  CHECK(tr.f.size() == tr.t.size());
  for (std::size_t k = 1; k < tr.t.size(); ++k) {
    CHECK(tr.t[k] > tr.t[k - 1]);
  }
}

TEST_CASE("recorded perturbation respects its bound") {
  auto cfg = basic_cfg(5.0);
  cfg.sigma0 = 1.0;
  cfg.perturbation = PerturbationSpec::sign_sigmadot(0.3);
  const Trace tr = run(es(1.0, 0.3, 0.7, 0.55), cfg);
  for (double f : tr.f) CHECK(std::abs(f) <= 0.3);
}

TEST_CASE("custom perturbation must stay within Phi") {
  CHECK_THROWS_AS(PerturbationSpec::custom({0.1, 0.4}).validate(0.3),
                  std::invalid_argument);
  CHECK_NOTHROW(PerturbationSpec::custom({0.1, -0.3}).validate(0.3));
  CHECK_THROWS_AS(PerturbationSpec::sign_sigmadot(0.5).validate(0.3),
                  std::invalid_argument);
}

TEST_CASE("constant and tabulated perturbations drive the same trajectory") {
  auto cfg = basic_cfg(2.0);
  cfg.sigma0 = 0.5;
  cfg.perturbation = PerturbationSpec::constant(0.2);
  const auto p = es(1.0, 0.25, 0.7, 0.5);
  const Trace a = run(p, cfg);

  const std::size_t n = static_cast<std::size_t>(cfg.t_max / cfg.dt) + 1;
  cfg.perturbation = PerturbationSpec::custom(std::vector<double>(n, 0.2));
  const Trace b = run(p, cfg);
  CHECK(a.sigma == b.sigma);
  CHECK(a.u == b.u);
  CHECK(a.f == b.f);
}

TEST_CASE("no actuator means v equals u at every sample") {
  auto cfg = basic_cfg(2.0);
  cfg.sigma0 = 0.8;
  const Trace tr = run(es(1.0, 0.0, 0.8, 0.3), cfg);
  CHECK(tr.v == tr.u);
}

TEST_CASE("first-order lag never overshoots the command") {
  auto cfg = basic_cfg(5.0);
  cfg.sigma0 = 0.05;
  cfg.mu = 0.03;
  const Trace tr = run(es(1.0, 0.0, 0.8, 0.2), cfg);
  for (double v : tr.v) CHECK(std::abs(v) <= 1.0 + 1e-12);
}

TEST_CASE("energy integral over synthetic controls") {
  Trace tr;
  tr.dt = 1e-3;
  for (int k = 0; k < 1000; ++k) {
    tr.t.push_back(k * 1e-3);
    tr.u.push_back(1.0);
  }
  tr.t_conv = 0.5;
  CHECK(measure_energy(tr) == doctest::Approx(0.5).epsilon(1e-9));
  std::fill(tr.u.begin(), tr.u.end(), 0.0);
  CHECK(measure_energy(tr) == 0.0);
  tr.t_conv.reset();
  CHECK_THROWS_AS(measure_energy(tr), std::invalid_argument);
}

TEST_CASE("converging run has shrinking extrema, diverging run does not") {
  auto cfg = basic_cfg(40.0);
  cfg.sigma0 = 0.00845;
  cfg.sigmadot0 = 0.11;
  cfg.perturbation = PerturbationSpec::sign_sigmadot(0.5);
  cfg.detector_min_increment = 1e-6;

  const Trace good = run(es(1.0, 0.5, 0.8, 0.25), cfg);
  REQUIRE(good.t_conv.has_value());
  const auto ge = extract_extrema(good);
  REQUIRE(ge.size() >= 4);
  int checked = 0;
  for (std::size_t i = 1; i < ge.size(); ++i) {
    const double t = static_cast<double>(ge[i].sample) * good.dt;
    if (t > *good.t_conv) break;
    CHECK(std::abs(ge[i].sigma_M) < std::abs(ge[i - 1].sigma_M));
    ++checked;
  }
  CHECK(checked >= 3);

  const Trace bad = run(es(1.0, 0.5, 0.8, 0.19), cfg);
  CHECK(!bad.t_conv.has_value());
  const auto be = extract_extrema(bad);
  REQUIRE(be.size() >= 4);
  double worst = 0.0;
  for (std::size_t i = 1; i < be.size(); ++i) {
    worst = std::max(worst,
                     std::abs(be[i].sigma_M) / std::abs(be[i - 1].sigma_M));
  }
  CHECK(worst >= 1.0);
}

TEST_CASE("detected extrema sit on the sampled arc vertices") {
  auto cfg = basic_cfg(10.0);
  cfg.sigma0 = 1.0;
  cfg.perturbation = PerturbationSpec::sign_sigmadot(0.3);
  cfg.detector_min_increment = 1e-6;
  const auto p = es(1.0, 0.3, 0.7, 0.55);
  const Trace tr = run(p, cfg);
  const auto extrema = extract_extrema(tr);
  REQUIRE(extrema.size() >= 3);

  // quadratic vertex through the three samples around the turning point
  const double slack =
      std::sqrt(2.0 * (p.U + p.Phi)) * cfg.dt +
      0.5 * (p.U + p.Phi) * cfg.dt * cfg.dt;
  for (std::size_t i = 1; i < extrema.size() && i < 6; ++i) {
    const std::size_t k = extrema[i].sample;
    if (k == 0 || k + 1 >= tr.size()) continue;
    const double ym = tr.sigma[k - 1], y0 = tr.sigma[k], yp = tr.sigma[k + 1];
    const double denom = ym - 2.0 * y0 + yp;
    double vertex = y0;
    if (denom != 0.0) {
      const double delta = 0.25 * (ym - yp) * (ym - yp) / denom;
      vertex = y0 - 0.5 * delta;
    }
    CHECK(std::abs(extrema[i].sigma_M - vertex) <= slack);
  }
}

TEST_CASE("limit cycle measurement needs enough cycles") {
  auto cfg = basic_cfg(0.5);
  cfg.sigma0 = 0.05;
  cfg.mu = 0.03;
  const Trace tr = run(es(1.0, 0.0, 0.8, 0.2), cfg);
  CHECK(!measure_limit_cycle(tr, 0.5).has_value());
  CHECK_THROWS_AS(measure_limit_cycle(tr, 1.5), std::invalid_argument);
}

TEST_CASE("limit cycle measurement on a settled run") {
  auto cfg = basic_cfg(20.0);
  cfg.sigma0 = 0.05;
  cfg.mu = 0.03;
  const Trace tr = run(es(1.0, 0.0, 0.8, 0.2), cfg);
  const auto m = measure_limit_cycle(tr, 0.5);
  REQUIRE(m.has_value());
  CHECK(m->cycles_used >= 4);
  CHECK(m->sigma_A > 1e-3);
  CHECK(m->sigma_A < 5e-3);
  CHECK(m->omega_c > 15.0);
  CHECK(m->omega_c < 25.0);
}

TEST_CASE("non-finite state aborts with a diagnostic") {
  auto cfg = basic_cfg(1.0);
  cfg.sigma0 = 1e308;
  cfg.sigmadot0 = 1e308;
  CHECK_THROWS_AS(run(es(1.0, 0.0, 0.7, 0.55), cfg), std::runtime_error);
}

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.t_max = 1e-4;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SimConfig{};
  cfg.mu = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}  // TEST_SUITE
