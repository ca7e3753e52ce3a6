#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "smclab/analysis.hpp"
#include "smclab/chattering.hpp"
#include "smclab/plant.hpp"
#include "smclab/tuner.hpp"

namespace smclab {

using json = nlohmann::ordered_json;

// Locale-independent shortest round-trip formatting.
std::string format_double(double x);

// CSV with header t,sigma,sigmadot,u,v,f, one row per sample.
void write_trace_csv(const Trace& trace, const std::filesystem::path& path);
Trace read_trace_csv(const std::filesystem::path& path);

json to_json(const FeasibilityReport& r);
json to_json(const ReachingGeometry& g);
json to_json(const PhaseTimes& t);
json to_json(const TimeFactors& f);
json to_json(const CostReport& c);
json to_json(const TuneRequest& r);
json to_json(const TuneResult& r);
json to_json(const DFValue& df);
json to_json(const ChatteringPrediction& p);
json to_json(const LimitCycleMeasurement& m);
json to_json(const ChatteringComparison& c);
json events_to_json(const std::vector<ExtremumEvent>& events, double dt);

void write_json(const json& j, const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);

// Minimal comma-separated reader for the tool's own summary files.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace smclab
