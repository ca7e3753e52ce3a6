#include "smclab/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smclab {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s) {
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{}) {
    throw std::runtime_error("bad numeric field: " + s);
  }
  return x;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, sep)) out.push_back(field);
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_trace_csv(const Trace& trace, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "t,sigma,sigmadot,u,v,f\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << format_double(trace.t[k]) << ',' << format_double(trace.sigma[k])
        << ',' << format_double(trace.sigmadot[k]) << ','
        << format_double(trace.u[k]) << ',' << format_double(trace.v[k]) << ','
        << format_double(trace.f[k]) << '\n';
  }
}

Trace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "t,sigma,sigmadot,u,v,f") {
    throw std::runtime_error("bad trace header in " + path.string());
  }
  Trace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 6) {
      throw std::runtime_error("bad trace row in " + path.string());
    }
    trace.t.push_back(parse_double(fields[0]));
    trace.sigma.push_back(parse_double(fields[1]));
    trace.sigmadot.push_back(parse_double(fields[2]));
    trace.u.push_back(parse_double(fields[3]));
    trace.v.push_back(parse_double(fields[4]));
    trace.f.push_back(parse_double(fields[5]));
  }
  if (trace.size() >= 2) trace.dt = trace.t[1] - trace.t[0];
  return trace;
}

json to_json(const FeasibilityReport& r) {
  return {{"authority_ok", r.authority_ok}, {"sum_ok", r.sum_ok},
          {"beta1_ok", r.beta1_ok},         {"beta2_ok", r.beta2_ok},
          {"arc_positive", r.arc_positive}, {"twisting_ok", r.twisting_ok},
          {"monotonic_ok", r.monotonic_ok}, {"feasible", r.feasible}};
}

json to_json(const ReachingGeometry& g) {
  return {{"sdot_Pprime", g.sdot_Pprime},
          {"sdot_Pdprime", g.sdot_Pdprime},
          {"sdot_P1", g.sdot_P1},
          {"sdot_P2", g.sdot_P2},
          {"arc_positive", g.arc_positive}};
}

json to_json(const PhaseTimes& t) {
  return {{"T_prime", t.T_prime},
          {"T1_star", t.T1_star},
          {"T2_star", t.T2_star},
          {"T1_star_max", t.T1_star_max},
          {"T2_star_max", t.T2_star_max},
          {"T1_double_star", t.T1_double_star},
          {"T2_double_star", t.T2_double_star},
          {"off_phase_unbounded", t.off_phase_unbounded}};
}

json to_json(const TimeFactors& f) {
  return {{"Omega1", f.Omega1},         {"Omega2", f.Omega2},
          {"Omega1_on", f.Omega1_on},   {"Omega2_on", f.Omega2_on},
          {"Omega1_off", f.Omega1_off}, {"Omega2_off", f.Omega2_off},
          {"Omega_hat", f.Omega_hat},   {"eta1", f.eta1},
          {"eta2", f.eta2},             {"eta_hat", f.eta_hat},
          {"contractive", f.contractive},
          {"contractive_hat", f.contractive_hat}};
}

json to_json(const CostReport& c) {
  return {{"J", c.J},
          {"J_hat", c.J_hat},
          {"delta", c.delta},
          {"constraint_ok", c.constraint_ok},
          {"cap_ok", c.cap_ok},
          {"contractive", c.contractive}};
}

json to_json(const TuneRequest& r) {
  return {{"U", r.U},
          {"Phi", r.Phi},
          {"J_hat_max", r.J_hat_max ? json(*r.J_hat_max) : json(nullptr)},
          {"beta1_fixed", r.beta1_fixed ? json(*r.beta1_fixed) : json(nullptr)},
          {"grid_resolution", r.grid_resolution},
          {"refine_tol", r.refine_tol}};
}

json to_json(const TuneResult& r) {
  return {{"found", r.found},
          {"beta1", r.beta1},
          {"beta2", r.beta2},
          {"objective", r.objective},
          {"J", r.J},
          {"J_hat", r.J_hat},
          {"feasible_region_fraction", r.feasible_region_fraction}};
}

json to_json(const DFValue& df) {
  return {{"re", df.re}, {"im", df.im}, {"angle_neg_recip", df.angle_neg_recip}};
}

json to_json(const ChatteringPrediction& p) {
  return {{"exists", p.exists},
          {"omega_c", p.omega_c},
          {"sigma_A", p.sigma_A},
          {"sigma_A_balanced", p.sigma_A_balanced},
          {"balance_residual", p.balance_residual},
          {"phase_residual", p.phase_residual}};
}

json to_json(const LimitCycleMeasurement& m) {
  return {{"sigma_A", m.sigma_A},
          {"omega_c", m.omega_c},
          {"cycles_used", m.cycles_used}};
}

json to_json(const ChatteringComparison& c) {
  return {{"omega_rel_err", c.omega_rel_err},
          {"sigma_rel_err", c.sigma_rel_err}};
}

json events_to_json(const std::vector<ExtremumEvent>& events, double dt) {
  json arr = json::array();
  for (const auto& ev : events) {
    arr.push_back({{"t", static_cast<double>(ev.sample) * dt},
                   {"sigma_M", ev.sigma_M}});
  }
  return arr;
}

void write_json(const json& j, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return json::parse(in);
}

std::vector<std::vector<std::string>> read_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split(line, ','));
  }
  return rows;
}

}  // namespace smclab
