#include <doctest.h>

#include <limits>
#include <stdexcept>
#include <vector>
#include <cmath>

#include "smclab/tuner.hpp"

using namespace smclab;

namespace {

TuneRequest request(double U = 1.0, double Phi = 0.3) {
  TuneRequest req;
  req.U = U;
  req.Phi = Phi;
  req.grid_resolution = 256;
  req.refine_tol = 1e-6;
  return req;
}

// dense reference scan of the objective over beta2 at fixed beta1
double dense_beta2_minimum(double beta1, double U, double Phi, double cap,
                           double step = 1e-4) {
  double best = std::numeric_limits<double>::infinity();
  for (double b2 = -1.0; b2 < beta1; b2 += step) {
    const double o = tuner_objective(beta1, b2, U, Phi, cap);
    best = std::min(best, o);
  }
  return best;
}

}  // namespace

TEST_SUITE("tuner") {

TEST_CASE("optimal beta2 matches a dense scan at beta1 = 0.7") {
  auto req = request();
  req.J_hat_max = 5.0;
  const TuneResult r = optimize_beta2(0.7, req);
  REQUIRE(r.found);
  CHECK(r.objective <= -0.30);
  const double oracle = dense_beta2_minimum(0.7, 1.0, 0.3, 5.0);
  CHECK(std::abs(r.objective - oracle) <= 1e-3);
  CHECK(r.beta2 < 0.7);
  CHECK(r.beta2 > -0.1);
}

TEST_CASE("optimal beta2 matches a dense scan at beta1 = 0.83") {
  auto req = request();
  req.J_hat_max = 5.0;
  const TuneResult r = optimize_beta2(0.83, req);
  REQUIRE(r.found);
  CHECK(r.objective <= -1.52);
  const double oracle = dense_beta2_minimum(0.83, 1.0, 0.3, 5.0);
  CHECK(std::abs(r.objective - oracle) <= 1e-3);
}

TEST_CASE("refinement never loses to its own grid incumbent") {
  auto req = request();
  req.J_hat_max = 5.0;
  req.grid_resolution = 64;
  const TuneResult r = optimize_beta2(0.7, req);
  REQUIRE(r.found);
  double grid_best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 64; ++i) {
    const double b2 = -1.0 + (0.7 + 1.0) * i / 63.0;
    grid_best = std::min(grid_best, tuner_objective(0.7, b2, 1.0, 0.3, 5.0));
  }
  CHECK(r.objective <= grid_best + 1e-12);
}

TEST_CASE("beta1 at or below the authority ratio has no solution") {
  auto req = request();
  req.J_hat_max = 5.0;
  CHECK(!optimize_beta2(0.3, req).found);
  CHECK(!optimize_beta2(0.25, req).found);
}

TEST_CASE("joint optimization beats the fixed reference pairs") {
  auto req = request();
  req.J_hat_max = 5.0;
  const TuneResult r = optimize_pair(req);
  REQUIRE(r.found);
  CHECK(r.objective < -1.0);
  CHECK(r.J_hat < 5.0);
  CHECK(r.objective == doctest::Approx(r.J - r.J_hat).epsilon(1e-12));
  // hard constraints hold strictly at the returned point
  CHECK(tuner_admissible(r.beta1, r.beta2, 1.0, 0.3, 5.0));
  CHECK(r.feasible_region_fraction > 0.0);
  CHECK(r.feasible_region_fraction < 1.0);
}

TEST_CASE("the recommended regime keeps an admissible region") {
  auto req = request(1.0, 0.34);
  const TuneResult r = optimize_pair(req);
  CHECK(r.found);
  CHECK(r.objective < 0.0);
}

TEST_CASE("a cap below the attainable conventional cost empties the problem") {
  auto req = request();
  req.J_hat_max = 1.0;  // below the interior minimum of J_hat
  CHECK(!optimize_pair(req).found);
  CHECK(!optimize_beta2(0.7, req).found);
}

TEST_CASE("identical requests give identical results") {
  auto req = request();
  req.J_hat_max = 5.0;
  const TuneResult a = optimize_pair(req);
  const TuneResult b = optimize_pair(req);
  CHECK(a.beta1 == b.beta1);
  CHECK(a.beta2 == b.beta2);
  CHECK(a.objective == b.objective);
}

TEST_CASE("fixed-beta1 requests route through the pair entry point") {
  auto req = request();
  req.J_hat_max = 5.0;
  req.beta1_fixed = 0.7;
  const TuneResult a = optimize_pair(req);
  const TuneResult b = optimize_beta2(0.7, req);
  CHECK(a.beta1 == b.beta1);
  CHECK(a.beta2 == b.beta2);
}

TEST_CASE("serial and parallel grid kernels agree exactly") {
  std::vector<double> beta2s;
  for (int i = 0; i <= 1000; ++i) beta2s.push_back(-1.0 + 1.7 * i / 1000.0);
  const auto a = objective_row_serial(0.7, beta2s, 1.0, 0.3, 5.0);
  const auto b = objective_row_parallel(0.7, beta2s, 1.0, 0.3, 5.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool both_inf = std::isinf(a[i]) && std::isinf(b[i]);
    CHECK((both_inf || a[i] == b[i]));
  }
}

TEST_CASE("default cap sits at three times the interior minimum") {
  const double cap = default_J_hat_max(1.0, 0.3);
  CHECK(cap > 5.0);
  CHECK(cap < 5.05);
}

TEST_CASE("request validation") {
  auto req = request();
  req.grid_resolution = 32;
  CHECK_THROWS_AS(optimize_pair(req), std::invalid_argument);
  req = request(1.0, 1.2);
  CHECK_THROWS_AS(optimize_pair(req), std::invalid_argument);
}

}  // TEST_SUITE
