#include "dwadmm/record.hpp"
#include "dwadmm/scenario.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> max_iterations;
    std::optional<double> tolerance;

    dwadmm::ScenarioOverrides overrides() const { return {seed, max_iterations, tolerance}; }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("config", args.config_path, "scenario config (JSON)")->required();
    cmd->add_option("--seed", args.seed, "override the scenario seed");
    cmd->add_option("--max-iter", args.max_iterations, "override the iteration cap");
    cmd->add_option("--tol", args.tolerance, "override both stopping tolerances");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Byzantine-resilient consensus ADMM simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, compare_args, validate_args;
    std::string run_out, compare_out;

    CLI::App* run_cmd = app.add_subcommand("run", "execute one scenario and write metrics");
    add_common(run_cmd, run_args);
    run_cmd->add_option("--out", run_out, "output directory")->required();

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "run DW-ADMM and conventional ADMM side by side");
    add_common(compare_cmd, compare_args);
    compare_cmd->add_option("--out", compare_out, "output directory")->required();

    CLI::App* validate_cmd = app.add_subcommand("validate", "check a scenario config");
    add_common(validate_cmd, validate_args);

    CLI11_PARSE(app, argc, argv);

    const CommonArgs& args =
        run_cmd->parsed() ? run_args : (compare_cmd->parsed() ? compare_args : validate_args);

    std::optional<dwadmm::ParsedScenario> parsed;
    try {
        parsed = dwadmm::parse_scenario_file(args.config_path, args.overrides());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    for (const std::string& warning : parsed->warnings) {
        std::cerr << "warning: " << warning << "\n";
    }

    try {
        if (run_cmd->parsed()) return dwadmm::run_command(*parsed, run_out);
        if (compare_cmd->parsed()) return dwadmm::compare_command(*parsed, compare_out);
        return dwadmm::validate_command(*parsed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
