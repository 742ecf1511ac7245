#pragma once

#include "dwadmm/adversary.hpp"
#include "dwadmm/diagnostics.hpp"
#include "dwadmm/graph.hpp"
#include "dwadmm/objective.hpp"
#include "dwadmm/trust.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dwadmm {

enum class Algorithm { DwAdmm, ConventionalAdmm };

struct Tolerances {
    double primal = 1e-8;
    double consensus = 1e-8;
};

/// Everything needed to execute one run. ConventionalAdmm executes the same
/// update rules but forces static weights and never isolates anyone.
struct Scenario {
    WeightedGraph graph;
    ObjectiveSet objectives;
    AttackSpec attack;
    WeightPolicy policy;
    TrustParams trust;
    int max_iterations = 5000;
    Tolerances tolerances;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::DwAdmm;
};

/// The weight policy the run actually executes.
WeightPolicy effective_policy(const Scenario& scenario);

/// Full iteration state at index k. The broadcast always satisfies
/// z = x + error exactly; lambda starts at zero and stays in the column
/// space of the base signed Laplacian.
struct IterateState {
    int k = 0;
    Matrix x;
    Matrix z;
    Matrix error;
    Matrix lambda;
    WeightedGraph graph;  // weights of iteration k
    TrustState trust;
    std::deque<Matrix> z_history;  // past broadcasts, oldest first
    std::optional<Matrix> y;       // dual-equivalence ledger, scalar policies only
    Matrix laplacian_sqrt;         // principal sqrt of the base signed Laplacian (for y)
    double cumulative_scale = 1.0;  // product of scalar weight factors so far
};

/// Reference quantities a run is measured against.
struct ScenarioOracles {
    std::vector<int> honest;  // V minus the Byzantine set, ascending
    Vector x_star;            // optimum over all nodes
    Vector x_star_honest;     // optimum over honest nodes
    Matrix x_star_rows;       // x_star replicated across rows
    Matrix lambda_star;       // -grad f at the replicated optimum
    Matrix y_star;            // pinv(sqrt L-^0) lambda_star
    Matrix laplacian_sqrt;    // principal sqrt of the base signed Laplacian
    LaplacianPair base;       // Laplacians at base weights
    SymmetricEigen base_signed_eigen;
};

ScenarioOracles build_oracles(const Scenario& scenario);

struct RunSummary {
    bool converged = false;
    bool diverged = false;
    bool honest_subgraph_disconnected = false;
    int iterations = 0;
    double final_primal_residual = 0.0;
    double final_consensus_residual = 0.0;  // restricted to non-isolated nodes
    double final_dist_to_opt = 0.0;
    double final_dist_to_honest_opt = 0.0;
    std::map<int, int> isolated_at;  // node -> detection iteration
    std::vector<std::string> warnings;
    double wall_time_seconds = 0.0;
};

struct RunRecord {
    std::vector<MetricRow> rows;
    RunSummary summary;
};

/// Zero state: X = Z = Lambda = E = 0 at the base weights. Error-free
/// scenarios must pass the structural assumptions; with an attack present
/// the failures downgrade to run warnings.
IterateState init(const Scenario& scenario);

/// One synchronized iteration: primal solves against the current
/// Laplacians, broadcast corruption, dual ascent, trust scoring, then the
/// weight update that shapes the next iteration's graph.
IterateState step(const IterateState& state, const Scenario& scenario);

/// Runs until max_iterations, convergence (primal residual and
/// non-isolated consensus residual under tolerance), or divergence.
RunRecord run(const Scenario& scenario);

/// Metric row for the transition prev -> next (next.k is the row index).
MetricRow make_metric_row(const IterateState& prev, const IterateState& next,
                          const Scenario& scenario, const ScenarioOracles& oracles);

/// Lyapunov energy of a state against the oracle pair; rejects
/// trust-adaptive policies, whose reweighting is not a scalar.
double lyapunov_energy(const IterateState& state, const ScenarioOracles& oracles,
                       const WeightPolicy& policy);

}  // namespace dwadmm
