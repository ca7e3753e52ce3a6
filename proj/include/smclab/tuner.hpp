#pragma once

#include <optional>
#include <vector>

#include "smclab/analysis.hpp"

namespace smclab {

// Constrained minimization of J - J_hat over the feasible threshold triangle.
struct TuneRequest {
  double U = 1.0;
  double Phi = 0.3;
  std::optional<double> J_hat_max;      // default: 3x the interior min of J_hat
  std::optional<double> beta1_fixed;
  int grid_resolution = 256;            // >= 64
  double refine_tol = 1e-5;
  bool parallel = true;                 // OpenMP grid evaluation when built in

  void validate() const;
};

struct TuneResult {
  bool found = false;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double objective = 0.0;  // J - J_hat at the optimum
  double J = 0.0;
  double J_hat = 0.0;
  double feasible_region_fraction = 0.0;
};

// Cap used when TuneRequest.J_hat_max is unset.
double default_J_hat_max(double U, double Phi);

// All hard constraints at one point: the convergence triangle, arc
// positivity, contractivity of both laws, and the J_hat cap. margin > 0
// keeps strict inequalities strictly interior.
bool tuner_admissible(double beta1, double beta2, double U, double Phi,
                      double J_hat_max, double margin = 0.0);

// J - J_hat, +infinity outside the admissible set.
double tuner_objective(double beta1, double beta2, double U, double Phi,
                       double J_hat_max, double margin = 0.0);

// Dense objective evaluation over a beta2 grid at fixed beta1. The serial
// kernel is the reference; the parallel kernel must match it exactly.
std::vector<double> objective_row_serial(double beta1,
                                         const std::vector<double>& beta2s,
                                         double U, double Phi, double J_hat_max);
std::vector<double> objective_row_parallel(double beta1,
                                           const std::vector<double>& beta2s,
                                           double U, double Phi,
                                           double J_hat_max);

// Optimal beta2 for a fixed admissible beta1: grid scan plus golden-section
// refinement on the best bracket. found == false when no admissible beta2
// exists (for example beta1 <= Phi/U).
TuneResult optimize_beta2(double beta1, const TuneRequest& req);

// Joint minimizer over (beta1, beta2): full grid scan, then coordinate
// golden-section refinement. Ties within refine_tol resolve to the smallest
// beta1, then the smallest beta2.
TuneResult optimize_pair(const TuneRequest& req);

}  // namespace smclab
