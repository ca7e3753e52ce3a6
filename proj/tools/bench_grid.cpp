// Times the serial reference kernels against the OpenMP ones: the tuner's
// dense objective grid and a batch of independent closed-loop runs.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "smclab/plant.hpp"
#include "smclab/tuner.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

void bench_grid(int n) {
  const double U = 1.0, Phi = 0.3, cap = 5.0;
  const auto beta2s = linspace(-1.0, 1.0, n);

  auto t0 = Clock::now();
  double checksum_s = 0.0;
  for (double o : smclab::objective_row_serial(0.7, beta2s, U, Phi, cap)) {
    if (std::isfinite(o)) checksum_s += o;
  }
  const double serial = seconds_since(t0);

  t0 = Clock::now();
  double checksum_p = 0.0;
  for (double o : smclab::objective_row_parallel(0.7, beta2s, U, Phi, cap)) {
    if (std::isfinite(o)) checksum_p += o;
  }
  const double parallel = seconds_since(t0);

  std::printf("objective row  %8d pts  serial %8.3f ms  openmp %8.3f ms  "
              "speedup %5.2fx  (checksums %.6g / %.6g)\n",
              n, serial * 1e3, parallel * 1e3, serial / parallel, checksum_s,
              checksum_p);
}

smclab::Trace run_one(double beta2) {
  smclab::ControllerParams p{1.0, 0.3, 0.8, beta2,
                             smclab::ControlMode::EnergySaving};
  smclab::SimConfig cfg;
  cfg.t_max = 20.0;
  cfg.sigma0 = 1.0;
  cfg.perturbation = smclab::PerturbationSpec::sign_sigmadot(0.3);
  cfg.detector_min_increment = 1e-6;
  return smclab::run(p, cfg);
}

void bench_sweep(int n) {
  const auto beta2s = linspace(-0.3, 0.75, n);

  auto t0 = Clock::now();
  double fuel_s = 0.0;
  for (double b2 : beta2s) {
    const auto trace = run_one(b2);
    if (trace.t_conv) fuel_s += smclab::measure_energy(trace);
  }
  const double serial = seconds_since(t0);

  t0 = Clock::now();
  std::vector<double> fuel(n, 0.0);
#ifdef SMCLAB_HAS_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    const auto trace = run_one(beta2s[i]);
    if (trace.t_conv) fuel[i] = smclab::measure_energy(trace);
  }
  double fuel_p = 0.0;
  for (double x : fuel) fuel_p += x;
  const double parallel = seconds_since(t0);

  std::printf("run sweep      %4d runs   serial %8.3f ms  openmp %8.3f ms  "
              "speedup %5.2fx  (checksums %.6g / %.6g)\n",
              n, serial * 1e3, parallel * 1e3, serial / parallel, fuel_s,
              fuel_p);
}

}  // namespace

int main() {
#ifdef SMCLAB_HAS_OPENMP
  std::printf("OpenMP enabled\n");
  // warm the thread pool so spin-up does not land in the first measurement
  smclab::objective_row_parallel(0.7, linspace(-1.0, 1.0, 4096), 1.0, 0.3, 5.0);
#else
  std::printf("OpenMP not available; both paths run serially\n");
#endif
  bench_grid(1 << 18);
  bench_grid(1 << 21);
  bench_sweep(64);
  bench_sweep(256);
  return 0;
}
