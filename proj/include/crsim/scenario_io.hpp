#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crsim/engine.hpp"

namespace crsim {

struct RunParams {
  std::optional<std::uint64_t> rounds;
  std::optional<GuaranteeSpec> guarantee;
  std::optional<int> workers;
  std::optional<std::string> out;
};

struct LoadedScenario {
  ScenarioConfig config;
  RunParams run;
};

// Strict JSON: unknown keys are rejected, the seed is mandatory, and every
// cross-field invariant is checked before this returns.
LoadedScenario load_scenario(const std::string& path);
LoadedScenario parse_scenario(const std::string& text, const std::string& origin);

// Canonical single-line JSON; parse_scenario(scenario_to_json(c)) round-trips
// to an identical digest.
std::string scenario_to_json(const ScenarioConfig& config);

// Fixed layout: one `metric,i_or_bin,value,stderr,rounds,seed` row per value,
// preceded by header comments that carry the full scenario.  Values are
// written with 12 significant digits.
void write_report_csv(std::ostream& out, const ScenarioConfig& config,
                      const AccuracyReport& report);

// Same layout for closed-form results (stderr and rounds columns are 0).
void write_exact_csv(std::ostream& out, const ScenarioConfig& config,
                     const std::vector<double>& pmf);

std::vector<std::string> preset_names();

// Runs the named scenario sweep and streams one CSV.  Identical
// (name, rounds, seed) invocations produce byte-identical output.
void run_preset(const std::string& name, std::uint64_t rounds, std::uint64_t seed,
                const RunOptions& opts, std::ostream& out);

}  // namespace crsim
