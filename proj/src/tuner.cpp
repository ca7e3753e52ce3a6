#include "smclab/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double j_hat_of(double beta1, double U, double Phi) {
  ControllerParams p{U, Phi, beta1, beta1, ControlMode::Conventional};
  const CostReport c = energy_cost(p);
  return c.J_hat;
}

// golden-section minimum of f over [a, b]
template <typename F>
double golden_min(F f, double a, double b, double tol) {
  double c = b - kGolden * (b - a);
  double d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

struct GridBest {
  double objective = kInf;
  double beta1 = 0.0;
  double beta2 = 0.0;
  long admissible = 0;
};

}  // namespace

void TuneRequest::validate() const {
  if (!(U > Phi) || !(Phi > 0.0)) {
    throw std::invalid_argument("tuner requires U > Phi > 0");
  }
  if (grid_resolution < 64) {
    throw std::invalid_argument("grid_resolution must be >= 64");
  }
  if (!(refine_tol > 0.0)) {
    throw std::invalid_argument("refine_tol must be positive");
  }
  if (J_hat_max && !(*J_hat_max > 0.0)) {
    throw std::invalid_argument("J_hat_max must be positive");
  }
}

double default_J_hat_max(double U, double Phi) {
  const double lo = Phi / U + 1e-6;
  const double hi = 1.0 - 1e-6;
  const double b1 = golden_min([&](double b) { return j_hat_of(b, U, Phi); },
                               lo, hi, 1e-10);
  return 3.0 * j_hat_of(b1, U, Phi);
}

bool tuner_admissible(double beta1, double beta2, double U, double Phi,
                      double J_hat_max, double margin) {
  if (!(beta1 >= 0.0 && beta1 < 1.0 - margin)) return false;
  if (!(beta2 > -1.0 + margin && beta2 < beta1 - margin)) return false;
  if (!(beta1 + beta2 > 2.0 * Phi / U + margin)) return false;
  if (!(beta1 > Phi / U + margin)) return false;  // J_hat contractive domain
  const double arc = U * (1.0 - beta1) + Phi * (1.0 - 2.0 * beta1 + beta2);
  if (!(arc > margin)) return false;
  ControllerParams p{U, Phi, beta1, beta2, ControlMode::EnergySaving};
  const TimeFactors f = time_factors(p);
  if (!f.contractive || !f.contractive_hat) return false;
  if (!(std::max(f.eta1, f.eta2) < 1.0 - margin)) return false;
  const CostReport c = energy_cost(p, true, J_hat_max);
  if (!c.cap_ok) return false;
  return c.constraint_ok && c.delta < -margin;
}

double tuner_objective(double beta1, double beta2, double U, double Phi,
                       double J_hat_max, double margin) {
  if (!tuner_admissible(beta1, beta2, U, Phi, J_hat_max, margin)) return kInf;
  ControllerParams p{U, Phi, beta1, beta2, ControlMode::EnergySaving};
  const CostReport c = energy_cost(p);
  return c.delta;
}

std::vector<double> objective_row_serial(double beta1,
                                         const std::vector<double>& beta2s,
                                         double U, double Phi,
                                         double J_hat_max) {
  std::vector<double> out(beta2s.size(), kInf);
  for (std::size_t i = 0; i < beta2s.size(); ++i) {
    out[i] = tuner_objective(beta1, beta2s[i], U, Phi, J_hat_max);
  }
  return out;
}

std::vector<double> objective_row_parallel(double beta1,
                                           const std::vector<double>& beta2s,
                                           double U, double Phi,
                                           double J_hat_max) {
  std::vector<double> out(beta2s.size(), kInf);
  const long n = static_cast<long>(beta2s.size());
#ifdef SMCLAB_HAS_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (long i = 0; i < n; ++i) {
    out[i] = tuner_objective(beta1, beta2s[i], U, Phi, J_hat_max);
  }
  return out;
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
  }
  return v;
}

TuneResult finish(double beta1, double beta2, double U, double Phi,
                  double J_hat_max, double fraction) {
  ControllerParams p{U, Phi, beta1, beta2, ControlMode::EnergySaving};
  const CostReport c = energy_cost(p, true, J_hat_max);
  TuneResult r;
  r.found = true;
  r.beta1 = beta1;
  r.beta2 = beta2;
  r.objective = c.delta;
  r.J = c.J;
  r.J_hat = c.J_hat;
  r.feasible_region_fraction = fraction;
  return r;
}

}  // namespace

TuneResult optimize_beta2(double beta1, const TuneRequest& req) {
  req.validate();
  const double U = req.U, Phi = req.Phi;
  const double cap = req.J_hat_max ? *req.J_hat_max : default_J_hat_max(U, Phi);
  TuneResult none;

  if (!(beta1 > Phi / U) || !(beta1 < 1.0)) return none;
  if (!(j_hat_of(beta1, U, Phi) < cap)) return none;

  // admissible beta2 interval at this beta1
  double lo = std::max(-1.0, 2.0 * Phi / U - beta1);
  if (Phi > 0.0) {
    lo = std::max(lo, 2.0 * beta1 - 1.0 - U * (1.0 - beta1) / Phi);
  }
  const double hi = beta1;
  if (!(lo < hi)) return none;

  const auto grid = linspace(lo, hi, req.grid_resolution);
  const auto obj = req.parallel
                       ? objective_row_parallel(beta1, grid, U, Phi, cap)
                       : objective_row_serial(beta1, grid, U, Phi, cap);

  std::size_t best = obj.size();
  long admissible = 0;
  for (std::size_t i = 0; i < obj.size(); ++i) {
    if (std::isfinite(obj[i])) {
      ++admissible;
      if (best == obj.size() || obj[i] < obj[best]) best = i;
    }
  }
  if (best == obj.size()) return none;

  const double a = grid[best > 0 ? best - 1 : best];
  const double b = grid[best + 1 < grid.size() ? best + 1 : best];
  auto f = [&](double b2) { return tuner_objective(beta1, b2, U, Phi, cap); };
  double beta2 = golden_min(f, a, b, req.refine_tol);
  // refinement never worsens the grid incumbent
  if (!(f(beta2) <= obj[best])) beta2 = grid[best];
  // keep strict constraints interior by the termination tolerance
  if (!tuner_admissible(beta1, beta2, U, Phi, cap, req.refine_tol)) {
    beta2 = golden_min(f, a + req.refine_tol, b - req.refine_tol,
                       req.refine_tol);
    if (!tuner_admissible(beta1, beta2, U, Phi, cap, req.refine_tol) ||
        !(f(beta2) <= obj[best])) {
      beta2 = grid[best];
    }
  }
  const double fraction =
      static_cast<double>(admissible) / static_cast<double>(obj.size());
  return finish(beta1, beta2, U, Phi, cap, fraction);
}

TuneResult optimize_pair(const TuneRequest& req) {
  req.validate();
  if (req.beta1_fixed) return optimize_beta2(*req.beta1_fixed, req);

  const double U = req.U, Phi = req.Phi;
  const double cap = req.J_hat_max ? *req.J_hat_max : default_J_hat_max(U, Phi);
  const int n = req.grid_resolution;
  const auto beta1s = linspace(Phi / U, 1.0, n);
  const auto beta2s = linspace(-1.0, 1.0, n);

  std::vector<GridBest> rows(n);
#ifdef SMCLAB_HAS_OPENMP
#pragma omp parallel for schedule(dynamic) if (req.parallel)
#endif
  for (int i = 0; i < n; ++i) {
    GridBest gb;
    gb.beta1 = beta1s[i];
    for (int j = 0; j < n; ++j) {
      const double o = tuner_objective(beta1s[i], beta2s[j], U, Phi, cap);
      if (std::isfinite(o)) {
        ++gb.admissible;
        if (o < gb.objective - req.refine_tol) {
          gb.objective = o;
          gb.beta2 = beta2s[j];
        }
      }
    }
    rows[i] = gb;
  }

  // deterministic reduce: best objective; ties within refine_tol take the
  // smallest beta1, then smallest beta2 (scan order is ascending)
  GridBest best;
  long admissible = 0;
  for (const auto& gb : rows) {
    admissible += gb.admissible;
    if (gb.objective < best.objective - req.refine_tol) best = gb;
  }
  if (!std::isfinite(best.objective)) return {};

  // coordinate refinement
  double b1 = best.beta1, b2 = best.beta2;
  const double step1 = (1.0 - Phi / U) / (n - 1);
  const double step2 = 2.0 / (n - 1);
  for (int round = 0; round < 8; ++round) {
    const double prev1 = b1, prev2 = b2;
    auto f2 = [&](double x) { return tuner_objective(b1, x, U, Phi, cap); };
    const double cand2 = golden_min(f2, b2 - step2, b2 + step2, req.refine_tol);
    if (f2(cand2) <= f2(b2)) b2 = cand2;
    auto f1 = [&](double x) { return tuner_objective(x, b2, U, Phi, cap); };
    const double cand1 = golden_min(f1, b1 - step1, b1 + step1, req.refine_tol);
    if (f1(cand1) <= f1(b1)) b1 = cand1;
    if (std::abs(b1 - prev1) < req.refine_tol &&
        std::abs(b2 - prev2) < req.refine_tol) {
      break;
    }
  }
  if (!std::isfinite(tuner_objective(b1, b2, U, Phi, cap)) ||
      tuner_objective(b1, b2, U, Phi, cap) > best.objective) {
    b1 = best.beta1;
    b2 = best.beta2;
  }
  const double fraction = static_cast<double>(admissible) /
                          (static_cast<double>(n) * static_cast<double>(n));
  return finish(b1, b2, U, Phi, cap, fraction);
}

}  // namespace smclab
