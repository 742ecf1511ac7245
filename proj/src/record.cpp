#include "dwadmm/record.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace dwadmm {

namespace {

constexpr const char* kCsvHeader =
    "iter,primal_residual,consensus_residual,dual_residual,dist_to_opt,dist_to_honest_opt,"
    "lemma2_residual,dual_equiv_residual,lyapunov_energy,min_trust,isolated_count,error_norm";

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write \"" + path.string() + "\"");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write failed for \"" + path.string() + "\"");
    }
}

void write_run_artifacts(const ParsedScenario& parsed, const RunRecord& record,
                         const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "config.json", parsed.resolved.dump(2) + "\n");
    write_file(out_dir / "metrics.csv", metrics_csv(record.rows));
    write_file(out_dir / "summary.json", summary_to_json(record.summary).dump(2) + "\n");
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string metrics_csv(const std::vector<MetricRow>& rows) {
    std::string out(kCsvHeader);
    out += "\n";
    for (const MetricRow& row : rows) {
        out += std::to_string(row.iteration);
        out += "," + format_double(row.primal_residual);
        out += "," + format_double(row.consensus_residual);
        out += "," + format_double(row.dual_residual);
        out += "," + format_double(row.dist_to_opt);
        out += "," + format_double(row.dist_to_honest_opt);
        out += "," + format_double(row.lemma2_residual);
        out += "," + format_double(row.dual_equiv_residual);
        out += "," + format_double(row.lyapunov_energy);
        out += "," + format_double(row.min_trust);
        out += "," + std::to_string(row.isolated_count);
        out += "," + format_double(row.error_norm);
        out += "\n";
    }
    return out;
}

nlohmann::json summary_to_json(const RunSummary& summary) {
    nlohmann::json isolated = nlohmann::json::object();
    for (const auto& [node, iteration] : summary.isolated_at) {
        isolated[std::to_string(node)] = iteration;
    }
    return nlohmann::json{{"converged", summary.converged},
                          {"diverged", summary.diverged},
                          {"honest_subgraph_disconnected", summary.honest_subgraph_disconnected},
                          {"iterations", summary.iterations},
                          {"final_primal_residual", summary.final_primal_residual},
                          {"final_consensus_residual", summary.final_consensus_residual},
                          {"final_dist_to_opt", summary.final_dist_to_opt},
                          {"final_dist_to_honest_opt", summary.final_dist_to_honest_opt},
                          {"isolated", isolated},
                          {"warnings", summary.warnings},
                          {"wall_time_seconds", summary.wall_time_seconds}};
}

int run_command(const ParsedScenario& parsed, const std::filesystem::path& out_dir) {
    const RunRecord record = run(parsed.scenario);
    write_run_artifacts(parsed, record, out_dir);
    return 0;
}

int compare_command(const ParsedScenario& parsed, const std::filesystem::path& out_dir) {
    if (parsed.algorithm_specified) {
        throw std::invalid_argument(
            "config: compare runs both algorithms; remove the \"algorithm\" field");
    }
    ParsedScenario dw = parsed;
    dw.scenario.algorithm = Algorithm::DwAdmm;
    dw.resolved["algorithm"] = "dw_admm";
    ParsedScenario conventional = parsed;
    conventional.scenario.algorithm = Algorithm::ConventionalAdmm;
    conventional.resolved["algorithm"] = "conventional_admm";

    const RunRecord dw_record = run(dw.scenario);
    const RunRecord conventional_record = run(conventional.scenario);
    write_run_artifacts(dw, dw_record, out_dir / "dw_admm");
    write_run_artifacts(conventional, conventional_record, out_dir / "conventional_admm");

    const double dw_error = dw_record.summary.final_dist_to_honest_opt;
    const double conventional_error = conventional_record.summary.final_dist_to_honest_opt;
    nlohmann::json comparison{
        {"dw_admm_honest_error", dw_error},
        {"conventional_honest_error", conventional_error},
        {"dw_admm_converged", dw_record.summary.converged},
        {"conventional_converged", conventional_record.summary.converged},
    };
    if (dw_error > 0.0) {
        comparison["honest_error_ratio"] = conventional_error / dw_error;
    } else {
        comparison["honest_error_ratio"] = nullptr;
    }
    write_file(out_dir / "comparison.json", comparison.dump(2) + "\n");
    return 0;
}

int validate_command(const ParsedScenario& parsed) {
    const AssumptionReport& report = parsed.assumptions;
    std::cout << "non-bipartite: " << (report.non_bipartite ? "pass" : "FAIL") << "\n";
    std::cout << "connected: " << (report.connected ? "pass" : "FAIL") << "\n";
    std::cout << "honest subgraph connected: " << (report.honest_connected ? "pass" : "FAIL")
              << "\n";
    for (const std::string& warning : parsed.warnings) {
        std::cout << "warning: " << warning << "\n";
    }
    std::cout << (report.all_pass() ? "valid" : "valid with warnings (attack scenario)") << "\n";
    return 0;
}

}  // namespace dwadmm
