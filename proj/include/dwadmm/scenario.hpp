#pragma once

#include "dwadmm/engine.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dwadmm {

/// Command-line overrides applied before the config is resolved, so they
/// show up in the echoed config.
struct ScenarioOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> max_iterations;
    std::optional<double> tolerance;  // sets both primal and consensus
};

/// A scenario plus everything the run artifacts need to echo: the fully
/// resolved config (defaults filled in, generators expanded) and the
/// structural validation outcome.
struct ParsedScenario {
    Scenario scenario;
    AssumptionReport assumptions;
    std::vector<std::string> warnings;
    bool algorithm_specified = false;
    nlohmann::json resolved;
};

ParsedScenario parse_scenario_text(const std::string& text, const ScenarioOverrides& overrides = {});
ParsedScenario parse_scenario_file(const std::string& path, const ScenarioOverrides& overrides = {});

}  // namespace dwadmm
