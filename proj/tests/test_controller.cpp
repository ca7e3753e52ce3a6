#include <doctest.h>

#include <limits>
#include <stdexcept>
#include <cmath>
#include <random>
#include <vector>

#include "smclab/controller.hpp"

using namespace smclab;

namespace {

ExtremumDetector detector_at(double sigma_M) {
  return ExtremumDetector(sigma_M, /*start_at_extremum=*/true);
}

ControllerParams es(double U, double Phi, double b1, double b2) {
  return {U, Phi, b1, b2, ControlMode::EnergySaving};
}

}  // namespace

TEST_SUITE("controller") {

TEST_CASE("energy-saving law on the three bands") {
  const auto det = detector_at(1.0);
  const auto p = es(1.0, 0.5, 0.8, 0.2);
  CHECK(control_energy_saving(0.9, det, p).u == -1.0);
  CHECK(control_energy_saving(0.9, det, p).phase == ControlPhase::OnNegative);
  CHECK(control_energy_saving(0.5, det, p).u == 0.0);
  CHECK(control_energy_saving(0.5, det, p).phase == ControlPhase::Off);
  CHECK(control_energy_saving(0.1, det, p).u == 1.0);
  CHECK(control_energy_saving(0.1, det, p).phase == ControlPhase::OnPositive);
}

TEST_CASE("collapsed thresholds reproduce the conventional law") {
  const auto det = detector_at(1.0);
  const auto p = es(1.0, 0.5, 0.8, 0.8);
  CHECK(control_energy_saving(0.5, det, p).u == 1.0);
}

TEST_CASE("exact threshold hit emits zero") {
  const auto det = detector_at(1.0);
  const auto p = es(1.0, 0.3, 0.8, 0.2);
  CHECK(control_energy_saving(0.8, det, p).u == 0.0);
  CHECK(control_energy_saving(0.8, det, p).phase == ControlPhase::Off);
  CHECK(control_energy_saving(0.2, det, p).u == 0.0);
}

TEST_CASE("conventional law") {
  const auto det = detector_at(1.0);
  ControllerParams p{1.0, 0.5, 0.8, 0.8, ControlMode::Conventional};
  CHECK(control_conventional(0.9, det, p).u == -1.0);
  CHECK(control_conventional(0.5, det, p).u == 1.0);
  const auto det_neg = detector_at(-1.0);
  CHECK(control_conventional(-0.5, det_neg, p).u == -1.0);
}

TEST_CASE("initialization action") {
  ExtremumDetector det(1.0, /*start_at_extremum=*/false);
  ControllerParams p{1.0, 0.0, 0.7, 0.7, ControlMode::EnergySaving};
  CHECK(control_init(1.2, det, p).u == -1.0);
  CHECK(control_init(1.0, det, p).u == 0.0);
  CHECK(control_init(0.7, det, p).u == 1.0);
  CHECK(control_init(0.7, det, p).phase == ControlPhase::Init);
  CHECK(select_control(1.2, det, p).phase == ControlPhase::Init);
}

TEST_CASE("laws reject non-finite sigma") {
  const auto det = detector_at(1.0);
  const auto p = es(1.0, 0.0, 0.8, 0.2);
  CHECK_THROWS_AS(control_energy_saving(std::nan(""), det, p),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      control_conventional(std::numeric_limits<double>::infinity(), det, p),
      std::invalid_argument);
}

TEST_CASE("detector finds a strict local maximum") {
  ExtremumDetector det(0.0, false);
  CHECK(!det.observe(0.0));
  CHECK(!det.observe(0.5));
  CHECK(!det.observe(1.0));
  const auto hit = det.observe(0.9);
  REQUIRE(hit.has_value());
  CHECK(*hit == 2);
  CHECK(det.sigma_M() == 1.0);
  CHECK(!det.initializing());
}

TEST_CASE("detector mirror minimum") {
  ExtremumDetector det(0.0, false);
  det.observe(0.0);
  det.observe(-0.5);
  det.observe(-1.0);
  CHECK(det.observe(-0.9).has_value());
  CHECK(det.sigma_M() == -1.0);
}

TEST_CASE("monotone samples leave sigma_M untouched") {
  ExtremumDetector det(0.0, true);
  for (double s : {0.0, 0.1, 0.2, 0.3}) CHECK(!det.observe(s));
  CHECK(det.sigma_M() == 0.0);
}

TEST_CASE("horizontal flex ends initialization at the pause sample") {
  ExtremumDetector det(0.0, false);
  det.observe(0.0);
  det.observe(0.5);
  const auto hit = det.observe(0.5);  // zero increment after rising motion
  REQUIRE(hit.has_value());
  CHECK(*hit == 2);
  CHECK(det.sigma_M() == 0.5);
  CHECK(!det.initializing());
}

TEST_CASE("stationary start never declares an extremum") {
  ExtremumDetector det(1.0, false);
  for (int i = 0; i < 10; ++i) CHECK(!det.observe(1.0));
  CHECK(det.initializing());
}

TEST_CASE("minimum increment masks sub-threshold wiggle") {
  ExtremumDetector det(0.0, true, 1e-6);
  det.observe(0.0);
  det.observe(0.5);      // rising
  det.observe(0.5 - 1e-7);  // below threshold: treated as no motion
  CHECK(!det.observe(0.5 + 1e-7).has_value());
  CHECK(det.observe(0.4).has_value());  // a real reversal still fires
}

TEST_CASE("three-valuedness over random inputs") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const auto p = es(1.5, 0.2, 0.8, 0.25);
  for (int i = 0; i < 2000; ++i) {
    const auto det = detector_at(d(rng));
    const double u = control_energy_saving(d(rng), det, p).u;
    CHECK((u == 0.0 || u == p.U || u == -p.U));
  }
}

TEST_CASE("collapsing beta2 onto beta1 is bit-identical to conventional") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  std::uniform_real_distribution<double> b(0.0, 0.999);
  for (int i = 0; i < 5000; ++i) {
    const double beta = b(rng);
    const auto det = detector_at(d(rng));
    const double sigma = d(rng);
    ControllerParams pe = es(1.0, 0.3, beta, beta);
    ControllerParams pc{1.0, 0.3, beta, beta, ControlMode::Conventional};
    CHECK(control_energy_saving(sigma, det, pe).u ==
          control_conventional(sigma, det, pc).u);
  }
}

TEST_CASE("odd symmetry of the switching law") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const auto p = es(1.0, 0.3, 0.7, 0.15);
  for (int i = 0; i < 2000; ++i) {
    const double sigma = d(rng), sM = d(rng);
    const double u1 = control_energy_saving(sigma, detector_at(sM), p).u;
    const double u2 = control_energy_saving(-sigma, detector_at(-sM), p).u;
    CHECK(u1 == -u2);
  }
}

TEST_CASE("u is non-increasing in sigma for a positive extremum") {
  const auto det = detector_at(1.0);
  const auto p = es(1.0, 0.3, 0.8, 0.2);
  double prev = p.U;
  bool seen_on_pos = false, seen_off = false, seen_on_neg = false;
  for (double sigma = -1.5; sigma <= 1.5; sigma += 1e-3) {
    const double u = control_energy_saving(sigma, det, p).u;
    CHECK(u <= prev);
    prev = u;
    seen_on_pos |= u == p.U;
    seen_off |= u == 0.0;
    seen_on_neg |= u == -p.U;
  }
  CHECK(seen_on_pos);
  CHECK(seen_off);
  CHECK(seen_on_neg);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(es(0.0, 0.3, 0.7, 0.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(es(1.0, -0.1, 0.7, 0.5).validate(), std::invalid_argument);
  CHECK_NOTHROW(es(1.0, 0.0, 0.7, 0.5).validate());
}

}  // TEST_SUITE
