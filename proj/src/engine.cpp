#include "dwadmm/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace dwadmm {

namespace {

constexpr double kDivergenceNorm = 1e12;

bool attack_present(const Scenario& scenario) {
    return scenario.attack.model != AttackModel::None && !scenario.attack.byzantine.empty();
}

bool tracks_dual_ledger(const WeightPolicy& policy) {
    return policy.mode == WeightMode::Static || policy.mode == WeightMode::UniformScalar;
}

std::vector<int> active_nodes(const IterateState& state) {
    std::vector<int> nodes;
    for (int v = 0; v < state.graph.node_count(); ++v) {
        if (!state.trust.isolated.count(v)) nodes.push_back(v);
    }
    return nodes;
}

void validate_scenario(const Scenario& scenario) {
    if (scenario.objectives.node_count() != scenario.graph.node_count()) {
        throw std::invalid_argument("scenario: need exactly one objective per node");
    }
    if (scenario.max_iterations < 1) {
        throw std::invalid_argument("scenario: max_iterations must be >= 1");
    }
    if (!(scenario.tolerances.primal > 0.0) || !(scenario.tolerances.consensus > 0.0)) {
        throw std::invalid_argument("scenario: tolerances must be positive");
    }
    if (static_cast<int>(scenario.attack.byzantine.size()) >= scenario.graph.node_count()) {
        throw std::invalid_argument("scenario: at least one honest node is required");
    }
    const AssumptionReport report =
        validate_assumptions(scenario.graph, scenario.attack.byzantine);
    if (!attack_present(scenario) && !(report.non_bipartite && report.connected)) {
        std::string message = "scenario: structural assumptions fail for an error-free run:";
        for (const std::string& failure : report.failures) message += " " + failure + ";";
        throw std::invalid_argument(message);
    }
}

}  // namespace

WeightPolicy effective_policy(const Scenario& scenario) {
    if (scenario.algorithm == Algorithm::ConventionalAdmm) {
        WeightPolicy fixed;
        fixed.mode = WeightMode::Static;
        fixed.alpha = scenario.policy.alpha;
        return fixed;
    }
    return scenario.policy;
}

IterateState init(const Scenario& scenario) {
    validate_scenario(scenario);
    const int n = scenario.graph.node_count();
    const int dim = scenario.objectives.dim();

    IterateState state{.k = 0,
                       .x = Matrix::Zero(n, dim),
                       .z = Matrix::Zero(n, dim),
                       .error = Matrix::Zero(n, dim),
                       .lambda = Matrix::Zero(n, dim),
                       .graph = scenario.graph.at_base_weights(),
                       .trust = make_trust_state(scenario.graph, scenario.trust),
                       .z_history = {},
                       .y = std::nullopt,
                       .laplacian_sqrt = Matrix(),
                       .cumulative_scale = 1.0};
    state.z_history.push_back(state.z);
    if (tracks_dual_ledger(effective_policy(scenario))) {
        state.y = Matrix::Zero(n, dim);
        state.laplacian_sqrt = principal_sqrt(build_laplacians(state.graph).signed_laplacian);
    }
    return state;
}

IterateState step(const IterateState& state, const Scenario& scenario) {
    const WeightPolicy policy = effective_policy(scenario);
    const LaplacianPair laps = build_laplacians(state.graph);
    const int n = state.graph.node_count();

    const Matrix primal_rhs = laps.unsigned_laplacian * state.z - state.lambda;
    Matrix x_next(state.x.rows(), state.x.cols());
    for (int node = 0; node < n; ++node) {
        try {
            x_next.row(node) =
                solve_primal(scenario.objectives.at(node), laps.degree(node, node),
                             primal_rhs.row(node).transpose())
                    .transpose();
        } catch (const std::exception& e) {
            throw std::runtime_error("step: primal solve failed at node " + std::to_string(node) +
                                     " (iteration " + std::to_string(state.k + 1) + "): " +
                                     e.what());
        }
    }

    const int next_iteration = state.k + 1;
    Corruption corruption = corrupt(scenario.attack, x_next, next_iteration, state.z_history);

    IterateState next = state;
    next.k = next_iteration;
    next.x = std::move(x_next);
    next.error = std::move(corruption.error);
    next.z = std::move(corruption.broadcast);
    next.lambda = state.lambda + laps.signed_laplacian * next.z;
    next.trust = update_trust(state.trust, state.graph, next.z);
    next.graph = update_weights(policy, next.trust, state.graph, state.k);

    if (state.y) {
        // Dual-equivalence ledger: the accumulated scalar stands in for the
        // product of the reweighting matrices applied so far.
        next.y = *state.y + state.laplacian_sqrt * (state.cumulative_scale * next.z);
        next.cumulative_scale = state.cumulative_scale * scalar_factor(policy, state.k);
    }

    next.z_history.push_back(next.z);
    const std::size_t history_bound =
        static_cast<std::size_t>(std::max(2, scenario.attack.delay + 1));
    while (next.z_history.size() > history_bound) next.z_history.pop_front();
    return next;
}

ScenarioOracles build_oracles(const Scenario& scenario) {
    ScenarioOracles oracles;
    for (int v = 0; v < scenario.graph.node_count(); ++v) {
        if (!scenario.attack.byzantine.count(v)) oracles.honest.push_back(v);
    }
    std::vector<int> all(static_cast<std::size_t>(scenario.graph.node_count()));
    for (int v = 0; v < scenario.graph.node_count(); ++v) all[static_cast<std::size_t>(v)] = v;

    oracles.x_star = centralized_optimum(scenario.objectives, all);
    oracles.x_star_honest = oracles.honest.empty()
                                ? oracles.x_star
                                : centralized_optimum(scenario.objectives, oracles.honest);
    oracles.x_star_rows = Matrix::Ones(scenario.graph.node_count(), 1) * oracles.x_star.transpose();
    oracles.lambda_star = -grad_matrix(scenario.objectives, oracles.x_star_rows);

    const WeightedGraph base = scenario.graph.at_base_weights();
    oracles.base = build_laplacians(base);
    oracles.base_signed_eigen = symmetric_eigen(oracles.base.signed_laplacian);
    oracles.laplacian_sqrt = principal_sqrt(oracles.base.signed_laplacian);
    oracles.y_star = symmetric_pseudo_inverse(oracles.laplacian_sqrt) * oracles.lambda_star;
    return oracles;
}

double lyapunov_energy(const IterateState& state, const ScenarioOracles& oracles,
                       const WeightPolicy& policy) {
    if (!tracks_dual_ledger(policy) || !state.y) {
        throw std::invalid_argument(
            "lyapunov_energy: defined only for static or uniform-scalar weight policies");
    }
    const LaplacianPair laps = build_laplacians(state.graph);
    return lyapunov_energy(state.x, *state.y, oracles.x_star_rows, oracles.y_star,
                           laps.unsigned_laplacian, state.cumulative_scale);
}

MetricRow make_metric_row(const IterateState& prev, const IterateState& next,
                          const Scenario& scenario, const ScenarioOracles& oracles) {
    const WeightPolicy policy = effective_policy(scenario);
    const LaplacianPair laps = build_laplacians(prev.graph);
    const Matrix grad_next = grad_matrix(scenario.objectives, next.x);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    MetricRow row;
    row.iteration = next.k;
    row.primal_residual = (next.x - prev.x).norm();
    row.consensus_residual = (oracles.base.signed_laplacian * next.x).norm();
    row.consensus_residual_honest =
        restricted_consensus_residual(next.x, scenario.graph, oracles.honest);
    row.dual_residual = (next.lambda - prev.lambda).norm();
    row.dist_to_opt = (next.x - oracles.x_star_rows).norm();
    row.dist_to_honest_opt =
        (select_rows(next.x, oracles.honest) -
         Matrix::Ones(static_cast<Eigen::Index>(oracles.honest.size()), 1) *
             oracles.x_star_honest.transpose())
            .norm();
    row.lemma2_residual =
        lemma2_residual(prev.z, next.z, next.error, next.lambda, grad_next, laps);
    row.dual_equiv_residual =
        (policy.mode == WeightMode::UniformScalar && next.y)
            ? (next.lambda - oracles.laplacian_sqrt * *next.y).norm()
            : nan;
    row.lyapunov_energy =
        tracks_dual_ledger(policy) ? lyapunov_energy(next, oracles, policy) : nan;
    row.min_trust = min_active_trust(next.trust, next.graph);
    row.isolated_count = static_cast<int>(next.trust.isolated.size());
    row.error_norm = next.error.norm();
    return row;
}

RunRecord run(const Scenario& scenario) {
    const auto started = std::chrono::steady_clock::now();
    RunRecord record;

    const AssumptionReport report =
        validate_assumptions(scenario.graph, scenario.attack.byzantine);
    if (attack_present(scenario)) {
        for (const std::string& failure : report.failures) {
            record.summary.warnings.push_back("assumption: " + failure);
        }
    }

    const ScenarioOracles oracles = build_oracles(scenario);
    IterateState state = init(scenario);

    double restricted_consensus = std::numeric_limits<double>::quiet_NaN();
    while (state.k < scenario.max_iterations) {
        IterateState next = step(state, scenario);
        MetricRow row = make_metric_row(state, next, scenario, oracles);
        record.rows.push_back(row);

        if (next.trust.isolated.size() > state.trust.isolated.size() &&
            !record.summary.honest_subgraph_disconnected) {
            if (oracles.honest.empty() || !is_connected(next.graph, oracles.honest)) {
                record.summary.honest_subgraph_disconnected = true;
                record.summary.warnings.push_back(
                    "honest subgraph disconnected after isolation at iteration " +
                    std::to_string(next.k));
            }
        }

        state = std::move(next);

        if (!state.x.allFinite() || state.x.norm() > kDivergenceNorm) {
            record.summary.diverged = true;
            break;
        }
        restricted_consensus =
            restricted_consensus_residual(state.x, scenario.graph, active_nodes(state));
        if (row.primal_residual <= scenario.tolerances.primal &&
            restricted_consensus <= scenario.tolerances.consensus) {
            record.summary.converged = true;
            break;
        }
    }

    record.summary.iterations = state.k;
    record.summary.isolated_at = state.trust.isolated_at;
    if (!record.rows.empty()) {
        const MetricRow& last = record.rows.back();
        record.summary.final_primal_residual = last.primal_residual;
        record.summary.final_dist_to_opt = last.dist_to_opt;
        record.summary.final_dist_to_honest_opt = last.dist_to_honest_opt;
        record.summary.final_consensus_residual =
            std::isnan(restricted_consensus)
                ? restricted_consensus_residual(state.x, scenario.graph, active_nodes(state))
                : restricted_consensus;
    }
    record.summary.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return record;
}

}  // namespace dwadmm
