#include "smclab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "smclab/chattering.hpp"
#include "smclab/io.hpp"

namespace smclab {

namespace {

namespace fs = std::filesystem;

struct CellResult {
  ControllerParams params;
  std::string pert_name;
  std::optional<double> t_conv;
  double fuel = 0.0;
  bool anomalous = false;
};

std::string mode_name(ControlMode m) {
  return m == ControlMode::Conventional ? "conventional" : "energy_saving";
}

std::string opt_str(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::invalid_argument("output directory not writable: " +
                                dir.string());
  }
}

std::ofstream open_csv(const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::invalid_argument("cannot write " + path.string());
  }
  return out;
}

Trace run_cell(const ControllerParams& params, double sigma0, double sigmadot0,
               const PerturbationSpec& pert, double t_max, double min_inc) {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_max = t_max;
  cfg.sigma0 = sigma0;
  cfg.sigmadot0 = sigmadot0;
  cfg.conv_eps = 4e-3;
  cfg.perturbation = pert;
  cfg.detector_min_increment = min_inc;
  return run(params, cfg);
}

double max_extremum_ratio(const Trace& trace, std::optional<double> until) {
  const auto extrema = extract_extrema(trace);
  double worst = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  for (const auto& ev : extrema) {
    const double t = static_cast<double>(ev.sample) * trace.dt;
    if (until && t > *until) break;
    const double mag = std::abs(ev.sigma_M);
    if (mag <= 0.0) continue;
    if (have_prev) worst = std::max(worst, mag / prev);
    prev = mag;
    have_prev = true;
  }
  return worst;
}

int do_single(const ExperimentConfig& cfg) {
  SimConfig sim = cfg.sim;
  sim.perturbation = cfg.resolve_perturbation();
  sim.perturbation.validate(cfg.params.Phi);
  const Trace trace = run(cfg.params, sim);
  write_trace_csv(trace, cfg.out_dir / "trace.csv");
  json report;
  report["feasibility"] = to_json(check_feasibility(cfg.params));
  report["t_conv"] = trace.t_conv ? json(*trace.t_conv) : json(nullptr);
  if (trace.t_conv) report["fuel"] = measure_energy(trace);
  report["events"] = events_to_json(extract_extrema(trace), trace.dt);
  if (sim.mu > 0.0) {
    if (const auto m = measure_limit_cycle(trace)) {
      report["limit_cycle"] = to_json(*m);
    }
  }
  write_json(report, cfg.out_dir / "report.json");
  return 0;
}

int do_compare(const ExperimentConfig& cfg) {
  json summary;
  for (ControlMode mode : {ControlMode::EnergySaving, ControlMode::Conventional}) {
    ControllerParams p = cfg.params;
    p.mode = mode;
    SimConfig sim = cfg.sim;
    sim.perturbation = cfg.resolve_perturbation();
    sim.perturbation.validate(p.Phi);
    const Trace trace = run(p, sim);
    write_trace_csv(trace, cfg.out_dir / ("trace_" + mode_name(mode) + ".csv"));
    json entry;
    entry["t_conv"] = trace.t_conv ? json(*trace.t_conv) : json(nullptr);
    if (trace.t_conv) entry["fuel"] = measure_energy(trace);
    summary[mode_name(mode)] = entry;
  }
  write_json(summary, cfg.out_dir / "compare.json");
  return 0;
}

int do_table1(const ExperimentConfig& cfg) {
  const CalibratedStart start;
  struct Cell {
    double beta1, beta2;
    double f_coef;
    std::string pert_name;
    ControlMode mode;
  };
  std::vector<Cell> cells;
  for (auto [b1, b2] : {std::pair{0.7, 0.55}, std::pair{0.83, 0.32}}) {
    for (auto [c, name] : {std::pair{0.0, std::string("zero")},
                           std::pair{kTable1Phi, std::string("co")},
                           std::pair{-kTable1Phi, std::string("opp")}}) {
      for (ControlMode mode :
           {ControlMode::Conventional, ControlMode::EnergySaving}) {
        cells.push_back({b1, b2, c, name, mode});
      }
    }
  }

  std::vector<CellResult> results(cells.size());
  const long n = static_cast<long>(cells.size());
#ifdef SMCLAB_HAS_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long i = 0; i < n; ++i) {
    const Cell& c = cells[i];
    ControllerParams p{kTable1U, kTable1Phi, c.beta1, c.beta2, c.mode};
    const PerturbationSpec pert = c.f_coef == 0.0
                                      ? PerturbationSpec::zero()
                                      : PerturbationSpec::sign_sigmadot(c.f_coef);
    const Trace trace = run_cell(p, start.sigma0, start.sigmadot0, pert, 400.0,
                                 start.detector_min_increment);
    CellResult r;
    r.params = p;
    r.pert_name = c.pert_name;
    r.t_conv = trace.t_conv;
    if (trace.t_conv) r.fuel = measure_energy(trace);
    r.anomalous = c.mode == ControlMode::EnergySaving && c.beta1 == 0.83 &&
                  c.pert_name == "opp";
    results[i] = r;
  }

  auto out = open_csv(cfg.out_dir / "table1.csv");
  out << "beta1,beta2,mode,perturbation,T_c,fuel,anomalous,provenance\n";
  for (const auto& r : results) {
    out << format_double(r.params.beta1) << ','
        << format_double(r.params.effective_beta2()) << ','
        << mode_name(r.params.mode) << ',' << r.pert_name << ','
        << opt_str(r.t_conv) << ','
        << (r.t_conv ? format_double(r.fuel) : std::string()) << ','
        << (r.anomalous ? "1" : "0") << ",table1/" << r.pert_name << '/'
        << mode_name(r.params.mode) << '\n';
  }
  return 0;
}

int do_table2(const ExperimentConfig& cfg) {
  struct Row {
    double mu, beta1, beta2;
  };
  const std::vector<Row> rows{{0.03, 0.8, 0.2}, {0.01, 0.6, 0.0},
                              {0.01, 0.8, 0.2}};
  auto out = open_csv(cfg.out_dir / "table2.csv");
  out << "mu,beta1,beta2,method,sigma_A,omega_c,sigma_rel_err,omega_rel_err,"
         "provenance\n";
  int idx = 0;
  for (const Row& row : rows) {
    ControllerParams p{1.0, 0.0, row.beta1, row.beta2, ControlMode::EnergySaving};
    const ChatteringPrediction pred = harmonic_balance(row.mu, p);

    SimConfig sim;
    sim.dt = 1e-3;
    sim.t_max = 40.0;
    sim.sigma0 = 0.05;
    sim.mu = row.mu;
    const Trace trace = run(p, sim);
    const auto meas = measure_limit_cycle(trace, 0.5);
    if (!meas) throw std::runtime_error("limit cycle not established");
    const ChatteringComparison cmp = compare_prediction(pred, *meas);

    ++idx;
    const std::string head = format_double(row.mu) + ',' +
                             format_double(row.beta1) + ',' +
                             format_double(row.beta2) + ',';
    out << head << "harmonic_balance," << format_double(pred.sigma_A) << ','
        << format_double(pred.omega_c) << ",,,table2/row" << idx << '\n';
    out << head << "simulation," << format_double(meas->sigma_A) << ','
        << format_double(meas->omega_c) << ','
        << format_double(cmp.sigma_rel_err) << ','
        << format_double(cmp.omega_rel_err) << ",table2/row" << idx << '\n';
  }
  return 0;
}

int do_dichotomy(const ExperimentConfig& cfg) {
  const CalibratedStart start;
  auto out = open_csv(cfg.out_dir / "dichotomy.csv");
  out << "beta2,converged,T_c,max_ratio,n_extrema,verdict,provenance\n";
  for (double b2 : {cfg.dichotomy_beta2_a, cfg.dichotomy_beta2_b}) {
    ControllerParams p{1.0, 0.5, 0.8, b2, ControlMode::EnergySaving};
    const Trace trace =
        run_cell(p, start.sigma0, start.sigmadot0,
                 PerturbationSpec::sign_sigmadot(p.Phi), 60.0,
                 start.detector_min_increment);
    std::ostringstream name;
    name << "dichotomy_beta2_" << b2 << ".csv";
    write_trace_csv(trace, cfg.out_dir / name.str());
    const double worst = max_extremum_ratio(trace, trace.t_conv);
    std::size_t n_extrema = 0;
    for (const auto& ev : extract_extrema(trace)) {
      const double t = static_cast<double>(ev.sample) * trace.dt;
      if (trace.t_conv && t > *trace.t_conv) break;
      ++n_extrema;
    }
    out << format_double(b2) << ',' << (trace.t_conv ? "1" : "0") << ','
        << opt_str(trace.t_conv) << ',' << format_double(worst) << ','
        << n_extrema << ','
        << (trace.t_conv && worst < 1.0 ? "convergent" : "divergent")
        << ",dichotomy/beta2=" << format_double(b2) << '\n';
  }
  return 0;
}

int do_sweep(const ExperimentConfig& cfg) {
  const int n = cfg.sweep_resolution;
  if (n < 2) throw std::invalid_argument("sweep resolution must be >= 2");
  const double U = cfg.params.U, Phi = cfg.params.Phi;
  const PerturbationSpec pert = cfg.resolve_perturbation();
  pert.validate(Phi);

  struct SweepRow {
    double beta1, beta2;
    bool feasible = false;
    std::optional<double> t_conv;
    double fuel = 0.0;
    double bound = 0.0;
  };
  std::vector<SweepRow> rows(static_cast<std::size_t>(n) * n);
#ifdef SMCLAB_HAS_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long idx = 0; idx < static_cast<long>(rows.size()); ++idx) {
    const int i = static_cast<int>(idx) / n;
    const int j = static_cast<int>(idx) % n;
    SweepRow row;
    row.beta1 = static_cast<double>(i) / (n - 1);
    row.beta2 = -1.0 + 2.0 * static_cast<double>(j) / (n - 1);
    ControllerParams p{U, Phi, row.beta1, row.beta2, cfg.params.mode};
    if (check_feasibility(p).feasible) {
      row.feasible = true;
      const Trace trace = run_cell(p, 1.0, 0.0, pert, cfg.sim.t_max, 1e-6);
      row.t_conv = trace.t_conv;
      if (trace.t_conv) row.fuel = measure_energy(trace);
      row.bound = convergence_bound(p, 1.0, 0.0);
    }
    rows[idx] = row;
  }

  auto out = open_csv(cfg.out_dir / "sweep.csv");
  out << "beta1,beta2,feasible,T_c,fuel,bound,provenance\n";
  for (const auto& row : rows) {
    out << format_double(row.beta1) << ',' << format_double(row.beta2) << ','
        << (row.feasible ? "1" : "0") << ',' << opt_str(row.t_conv) << ','
        << (row.t_conv ? format_double(row.fuel) : std::string()) << ','
        << (row.feasible ? format_double(row.bound) : std::string())
        << ",sweep\n";
  }
  return 0;
}

int do_tune(const ExperimentConfig& cfg) {
  TuneRequest req;
  req.U = cfg.params.U;
  req.Phi = cfg.params.Phi;
  req.J_hat_max = cfg.J_hat_max;
  req.beta1_fixed = cfg.beta1_fixed;
  req.grid_resolution = cfg.grid_resolution;
  req.refine_tol = cfg.refine_tol;
  const TuneResult result = optimize_pair(req);
  json out_json;
  out_json["request"] = to_json(req);
  out_json["result"] = to_json(result);
  write_json(out_json, cfg.out_dir / "tune.json");

  // plot-ready objective grid
  const double cap =
      req.J_hat_max ? *req.J_hat_max : default_J_hat_max(req.U, req.Phi);
  auto out = open_csv(cfg.out_dir / "tune_grid.csv");
  out << "beta1,beta2,objective\n";
  const int n = std::min(cfg.grid_resolution, 128);
  for (int i = 0; i < n; ++i) {
    const double b1 = req.Phi / req.U + (1.0 - req.Phi / req.U) * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double b2 = -1.0 + 2.0 * j / (n - 1);
      const double o = tuner_objective(b1, b2, req.U, req.Phi, cap);
      if (std::isfinite(o)) {
        out << format_double(b1) << ',' << format_double(b2) << ','
            << format_double(o) << '\n';
      }
    }
  }
  return result.found ? 0 : 2;
}

int do_hb(const ExperimentConfig& cfg) {
  if (!(cfg.sim.mu > 0.0)) {
    throw std::invalid_argument("hb requires mu > 0");
  }
  const ChatteringPrediction pred = harmonic_balance(cfg.sim.mu, cfg.params);
  write_json(to_json(pred), cfg.out_dir / "hb.json");
  auto out = open_csv(cfg.out_dir / "hb.csv");
  out << "mu,beta1,beta2,omega_c,sigma_A,sigma_A_balanced,balance_residual\n";
  out << format_double(cfg.sim.mu) << ',' << format_double(cfg.params.beta1)
      << ',' << format_double(cfg.params.effective_beta2()) << ','
      << format_double(pred.omega_c) << ',' << format_double(pred.sigma_A)
      << ',' << format_double(pred.sigma_A_balanced) << ','
      << format_double(pred.balance_residual) << '\n';
  return 0;
}

}  // namespace

PerturbationSpec ExperimentConfig::resolve_perturbation() const {
  switch (perturbation) {
    case PerturbationChoice::Zero:
      return PerturbationSpec::zero();
    case PerturbationChoice::CoActing:
      return PerturbationSpec::sign_sigmadot(params.Phi);
    case PerturbationChoice::Opposing:
      return PerturbationSpec::sign_sigmadot(-params.Phi);
    case PerturbationChoice::Constant:
      return PerturbationSpec::constant(perturbation_const);
  }
  return PerturbationSpec::zero();
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot read config file " + path.string());
  }
  ExperimentConfig cfg;
  std::string line, section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = line.find_last_not_of(" \t\r");
    line = line.substr(begin, end - begin + 1);
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key=value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;

    auto num = [&] { return std::stod(value); };
    if (full == "controller.U") cfg.params.U = num();
    else if (full == "controller.Phi") cfg.params.Phi = num();
    else if (full == "controller.beta1") cfg.params.beta1 = num();
    else if (full == "controller.beta2") cfg.params.beta2 = num();
    else if (full == "controller.mode") {
      if (value == "energy_saving") cfg.params.mode = ControlMode::EnergySaving;
      else if (value == "conventional") cfg.params.mode = ControlMode::Conventional;
      else throw std::invalid_argument("unknown mode: " + value);
    } else if (full == "sim.dt") cfg.sim.dt = num();
    else if (full == "sim.t_max") cfg.sim.t_max = num();
    else if (full == "sim.sigma0") cfg.sim.sigma0 = num();
    else if (full == "sim.sigmadot0") cfg.sim.sigmadot0 = num();
    else if (full == "sim.mu") cfg.sim.mu = num();
    else if (full == "sim.conv_eps") cfg.sim.conv_eps = num();
    else if (full == "sim.min_increment") cfg.sim.detector_min_increment = num();
    else if (full == "sim.perturbation") {
      if (value == "zero") cfg.perturbation = PerturbationChoice::Zero;
      else if (value == "co") cfg.perturbation = PerturbationChoice::CoActing;
      else if (value == "opp") cfg.perturbation = PerturbationChoice::Opposing;
      else if (value.rfind("const:", 0) == 0) {
        cfg.perturbation = PerturbationChoice::Constant;
        cfg.perturbation_const = std::stod(value.substr(6));
      } else throw std::invalid_argument("unknown perturbation: " + value);
    } else if (full == "experiment.kind") {
      static const std::map<std::string, ExperimentKind> kinds{
          {"single", ExperimentKind::Single},
          {"compare", ExperimentKind::CompareModes},
          {"table1", ExperimentKind::Table1},
          {"table2", ExperimentKind::Table2},
          {"dichotomy", ExperimentKind::Dichotomy},
          {"sweep", ExperimentKind::Sweep},
          {"tune", ExperimentKind::Tune},
          {"hb", ExperimentKind::HarmonicBalance}};
      const auto it = kinds.find(value);
      if (it == kinds.end()) throw std::invalid_argument("unknown kind: " + value);
      cfg.kind = it->second;
    } else if (full == "experiment.out") cfg.out_dir = value;
    else if (full == "tune.J_hat_max") cfg.J_hat_max = num();
    else if (full == "tune.beta1_fixed") cfg.beta1_fixed = num();
    else if (full == "tune.grid_resolution") cfg.grid_resolution = static_cast<int>(num());
    else if (full == "tune.refine_tol") cfg.refine_tol = num();
    else if (full == "sweep.resolution") cfg.sweep_resolution = static_cast<int>(num());
    else if (full == "dichotomy.beta2_a") cfg.dichotomy_beta2_a = num();
    else if (full == "dichotomy.beta2_b") cfg.dichotomy_beta2_b = num();
    else throw std::invalid_argument("unknown config key: " + full);
  }
  return cfg;
}

int run_experiment(const ExperimentConfig& cfg) {
  try {
    cfg.params.validate();
    cfg.sim.validate();
    ensure_dir(cfg.out_dir);
    switch (cfg.kind) {
      case ExperimentKind::Single:
        return do_single(cfg);
      case ExperimentKind::CompareModes:
        return do_compare(cfg);
      case ExperimentKind::Table1:
        return do_table1(cfg);
      case ExperimentKind::Table2:
        return do_table2(cfg);
      case ExperimentKind::Dichotomy:
        return do_dichotomy(cfg);
      case ExperimentKind::Sweep:
        return do_sweep(cfg);
      case ExperimentKind::Tune:
        return do_tune(cfg);
      case ExperimentKind::HarmonicBalance:
        return do_hb(cfg);
    }
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace smclab
