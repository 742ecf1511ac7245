#pragma once

#include "dwadmm/engine.hpp"
#include "dwadmm/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace dwadmm {

/// Shortest round-trip decimal form; NaN renders as the empty string
/// (undefined metric columns).
std::string format_double(double value);

/// Fixed-schema CSV; column order is part of the tool's contract.
std::string metrics_csv(const std::vector<MetricRow>& rows);

nlohmann::json summary_to_json(const RunSummary& summary);

/// Runs the scenario and writes config.json, metrics.csv and summary.json
/// into out_dir. Returns the process exit status (0 unless the engine
/// fails; finishing without convergence is still 0).
int run_command(const ParsedScenario& parsed, const std::filesystem::path& out_dir);

/// Runs the scenario under both algorithms with identical seeds, writes
/// per-algorithm artifacts plus comparison.json with the honest-error
/// ratio. The config must not pin an algorithm.
int compare_command(const ParsedScenario& parsed, const std::filesystem::path& out_dir);

/// Prints the structural validation report to stdout.
int validate_command(const ParsedScenario& parsed);

}  // namespace dwadmm
