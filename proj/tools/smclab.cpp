#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "smclab/experiment.hpp"

namespace {

// Shared option block; every subcommand accepts the full flag set and a
// config file, with flags overriding file values.
struct Options {
  std::string config;
  smclab::ExperimentConfig cfg;
  std::string perturbation = "zero";
  bool conventional = false;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "INI-style config file");
  cmd->add_option("--U", opt.cfg.params.U, "control magnitude");
  cmd->add_option("--Phi", opt.cfg.params.Phi, "perturbation bound");
  cmd->add_option("--beta1", opt.cfg.params.beta1, "outer threshold");
  cmd->add_option("--beta2", opt.cfg.params.beta2, "inner threshold");
  cmd->add_flag("--conventional", opt.conventional,
                "use the conventional law (beta2 ignored)");
  cmd->add_option("--mu", opt.cfg.sim.mu, "actuator time constant");
  cmd->add_option("--dt", opt.cfg.sim.dt, "integration step");
  cmd->add_option("--tmax", opt.cfg.sim.t_max, "horizon");
  cmd->add_option("--sigma0", opt.cfg.sim.sigma0, "initial sigma");
  cmd->add_option("--sigmadot0", opt.cfg.sim.sigmadot0, "initial sigmadot");
  cmd->add_option("--conv-eps", opt.cfg.sim.conv_eps, "convergence norm");
  cmd->add_option("--min-increment", opt.cfg.sim.detector_min_increment,
                  "detector minimum increment");
  cmd->add_option("--perturbation", opt.perturbation,
                  "zero|co|opp|const:<v>");
  cmd->add_option("--out", opt.cfg.out_dir, "output directory");
}

int apply(Options& opt, smclab::ExperimentKind kind, const CLI::App* cmd) {
  smclab::ExperimentConfig cfg;
  if (!opt.config.empty()) {
    cfg = smclab::parse_config_file(opt.config);
  }
  // flags override file values
  auto touched = [&](const std::string& name) {
    const CLI::Option* o = cmd->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (touched("--U")) cfg.params.U = opt.cfg.params.U;
  if (touched("--Phi")) cfg.params.Phi = opt.cfg.params.Phi;
  if (touched("--beta1")) cfg.params.beta1 = opt.cfg.params.beta1;
  if (touched("--beta2")) cfg.params.beta2 = opt.cfg.params.beta2;
  if (opt.conventional) cfg.params.mode = smclab::ControlMode::Conventional;
  if (touched("--mu")) cfg.sim.mu = opt.cfg.sim.mu;
  if (touched("--dt")) cfg.sim.dt = opt.cfg.sim.dt;
  if (touched("--tmax")) cfg.sim.t_max = opt.cfg.sim.t_max;
  if (touched("--sigma0")) cfg.sim.sigma0 = opt.cfg.sim.sigma0;
  if (touched("--sigmadot0")) cfg.sim.sigmadot0 = opt.cfg.sim.sigmadot0;
  if (touched("--conv-eps")) cfg.sim.conv_eps = opt.cfg.sim.conv_eps;
  if (touched("--min-increment")) {
    cfg.sim.detector_min_increment = opt.cfg.sim.detector_min_increment;
  }
  if (touched("--out")) cfg.out_dir = opt.cfg.out_dir;
  if (touched("--perturbation")) {
    const std::string& p = opt.perturbation;
    if (p == "zero") cfg.perturbation = smclab::PerturbationChoice::Zero;
    else if (p == "co") cfg.perturbation = smclab::PerturbationChoice::CoActing;
    else if (p == "opp") cfg.perturbation = smclab::PerturbationChoice::Opposing;
    else if (p.rfind("const:", 0) == 0) {
      cfg.perturbation = smclab::PerturbationChoice::Constant;
      cfg.perturbation_const = std::stod(p.substr(6));
    } else {
      std::cerr << "config error: unknown perturbation '" << p << "'\n";
      return 1;
    }
  }
  if (touched("--jhat-max")) cfg.J_hat_max = *opt.cfg.J_hat_max;
  if (touched("--beta1-fixed")) cfg.beta1_fixed = *opt.cfg.beta1_fixed;
  if (touched("--grid-resolution")) cfg.grid_resolution = opt.cfg.grid_resolution;
  if (touched("--refine-tol")) cfg.refine_tol = opt.cfg.refine_tol;
  if (touched("--sweep-resolution")) cfg.sweep_resolution = opt.cfg.sweep_resolution;
  if (touched("--beta2-a")) cfg.dichotomy_beta2_a = opt.cfg.dichotomy_beta2_a;
  if (touched("--beta2-b")) cfg.dichotomy_beta2_b = opt.cfg.dichotomy_beta2_b;
  cfg.kind = kind;
  return smclab::run_experiment(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Energy-saving sub-optimal sliding mode control laboratory.\n"
      "Exit codes: 0 success, 1 configuration error, 2 runtime failure."};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    smclab::ExperimentKind kind;
  };
  const Sub subs[] = {
      {"simulate", "single closed-loop run, trace + report",
       smclab::ExperimentKind::Single},
      {"compare", "energy-saving vs conventional on one scenario",
       smclab::ExperimentKind::CompareModes},
      {"dichotomy", "convergent vs divergent threshold pair",
       smclab::ExperimentKind::Dichotomy},
      {"tune", "constrained minimization of J - J_hat",
       smclab::ExperimentKind::Tune},
      {"hb", "harmonic-balance chattering prediction",
       smclab::ExperimentKind::HarmonicBalance},
      {"table1", "convergence time and fuel comparison table",
       smclab::ExperimentKind::Table1},
      {"table2", "chattering: harmonic balance vs simulation",
       smclab::ExperimentKind::Table2},
      {"sweep", "simulate a grid of threshold pairs",
       smclab::ExperimentKind::Sweep},
  };

  std::vector<std::unique_ptr<Options>> opts;
  std::vector<std::pair<CLI::App*, smclab::ExperimentKind>> cmds;
  for (const Sub& s : subs) {
    auto opt = std::make_unique<Options>();
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, *opt);
    if (s.kind == smclab::ExperimentKind::Tune) {
      opt->cfg.J_hat_max = 0.0;
      opt->cfg.beta1_fixed = 0.0;
      cmd->add_option("--jhat-max", *opt->cfg.J_hat_max, "cap on J_hat");
      cmd->add_option("--beta1-fixed", *opt->cfg.beta1_fixed,
                      "optimize beta2 at this fixed beta1");
      cmd->add_option("--grid-resolution", opt->cfg.grid_resolution,
                      "grid samples per axis");
      cmd->add_option("--refine-tol", opt->cfg.refine_tol,
                      "refinement tolerance");
    }
    if (s.kind == smclab::ExperimentKind::Sweep) {
      cmd->add_option("--sweep-resolution", opt->cfg.sweep_resolution,
                      "grid samples per axis");
    }
    if (s.kind == smclab::ExperimentKind::Dichotomy) {
      cmd->add_option("--beta2-a", opt->cfg.dichotomy_beta2_a,
                      "first inner threshold");
      cmd->add_option("--beta2-b", opt->cfg.dichotomy_beta2_b,
                      "second inner threshold");
    }
    cmds.emplace_back(cmd, s.kind);
    opts.push_back(std::move(opt));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    if (cmds[i].first->parsed()) {
      try {
        return apply(*opts[i], cmds[i].second, cmds[i].first);
      } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
      } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
      }
    }
  }
  return 1;
}
