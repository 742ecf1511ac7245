#include "dwadmm/trust.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dwadmm {

namespace {

void validate_params(const TrustParams& p) {
    // threshold 0 disables isolation entirely (trust is clamped at 0 and
    // can never fall strictly below it); useful for ablation runs.
    const bool valid = p.initial >= 0.0 && p.initial <= 1.0 && p.decay > 0.0 &&
                       p.deviation_tol > 0.0 && p.threshold >= 0.0 && p.threshold < 1.0 &&
                       p.min_factor >= 0.0 && p.min_factor <= 1.0 && p.alpha > 0.0;
    if (!valid) {
        throw std::invalid_argument("trust: invalid parameters (need initial in [0,1], decay > 0, "
                                    "deviation_tol > 0, threshold in [0,1), min_factor in [0,1], "
                                    "alpha > 0)");
    }
}

Vector coordinate_median(const std::vector<int>& members, const Matrix& broadcast) {
    const Eigen::Index cols = broadcast.cols();
    Vector median(cols);
    std::vector<double> column(members.size());
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (std::size_t m = 0; m < members.size(); ++m) {
            column[m] = broadcast(members[m], c);
        }
        const std::size_t mid = column.size() / 2;
        std::nth_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid),
                         column.end());
        double value = column[mid];
        if (column.size() % 2 == 0) {
            const double below =
                *std::max_element(column.begin(), column.begin() + static_cast<std::ptrdiff_t>(mid));
            value = 0.5 * (value + below);
        }
        median(c) = value;
    }
    return median;
}

}  // namespace

TrustState make_trust_state(const WeightedGraph& g, TrustParams params) {
    validate_params(params);
    TrustState state;
    state.params = params;
    state.forward.assign(g.edge_count(), params.initial);
    state.backward.assign(g.edge_count(), params.initial);
    return state;
}

TrustState update_trust(const TrustState& state, const WeightedGraph& g,
                        const Matrix& broadcast) {
    if (broadcast.rows() != g.node_count()) {
        throw std::invalid_argument("update_trust: broadcast must have one row per node");
    }
    if (state.forward.size() != g.edge_count()) {
        throw std::invalid_argument("update_trust: state does not match the graph's edge list");
    }

    TrustState next = state;
    const auto adjacency = g.positive_adjacency();

    // Coordinate-wise median of each active node's closed neighborhood,
    // ignoring isolated members.
    std::vector<Vector> median(static_cast<std::size_t>(g.node_count()));
    std::vector<bool> has_median(static_cast<std::size_t>(g.node_count()), false);
    for (int node = 0; node < g.node_count(); ++node) {
        if (state.isolated.count(node)) continue;
        std::vector<int> members;
        members.push_back(node);
        for (int neighbor : adjacency[static_cast<std::size_t>(node)]) {
            if (!state.isolated.count(neighbor)) members.push_back(neighbor);
        }
        median[static_cast<std::size_t>(node)] = coordinate_median(members, broadcast);
        has_median[static_cast<std::size_t>(node)] = true;
    }

    const TrustParams& p = state.params;
    auto score = [&](double trust, int observer, int subject) {
        const Vector& center = median[static_cast<std::size_t>(observer)];
        const double deviation =
            (broadcast.row(subject).transpose() - center).norm() / (1.0 + center.norm());
        if (deviation > p.deviation_tol) return std::max(0.0, trust - p.decay);
        return std::min(1.0, trust + 0.25 * p.decay);
    };

    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edges()[e];
        if (edge.weight <= 0.0) continue;
        if (state.isolated.count(edge.i) || state.isolated.count(edge.j)) continue;
        if (!has_median[static_cast<std::size_t>(edge.i)] ||
            !has_median[static_cast<std::size_t>(edge.j)]) {
            continue;
        }
        next.forward[e] = score(state.forward[e], edge.i, edge.j);
        next.backward[e] = score(state.backward[e], edge.j, edge.i);
    }
    return next;
}

double min_active_trust(const TrustState& state, const WeightedGraph& g) {
    double lowest = 1.0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edges()[e];
        if (state.isolated.count(edge.i) || state.isolated.count(edge.j)) continue;
        lowest = std::min({lowest, state.forward[e], state.backward[e]});
    }
    return lowest;
}

double scalar_factor(const WeightPolicy& policy, int k) {
    if (policy.mode == WeightMode::Static) return 1.0;
    if (policy.mode != WeightMode::UniformScalar) {
        throw std::invalid_argument("scalar_factor: policy has no scalar schedule");
    }
    if (policy.schedule.empty()) return 1.0;
    const double c = policy.schedule[static_cast<std::size_t>(k) % policy.schedule.size()];
    if (!(c > 0.0) || c > policy.alpha) {
        throw std::invalid_argument("scalar_factor: schedule entry " + std::to_string(c) +
                                    " must lie in (0, alpha]");
    }
    return c;
}

double cumulative_scalar(const WeightPolicy& policy, int k) {
    if (policy.mode == WeightMode::TrustAdaptive) {
        throw std::invalid_argument(
            "cumulative_scalar: trust-adaptive weights are not a scalar multiple of identity");
    }
    double product = 1.0;
    for (int i = 0; i < k; ++i) product *= scalar_factor(policy, i);
    return product;
}

WeightedGraph update_weights(const WeightPolicy& policy, TrustState& state,
                             const WeightedGraph& g, int k) {
    if (state.forward.size() != g.edge_count()) {
        throw std::invalid_argument("update_weights: state does not match the graph's edge list");
    }
    switch (policy.mode) {
        case WeightMode::Static:
            return g;
        case WeightMode::UniformScalar: {
            const double c = scalar_factor(policy, k);
            std::vector<double> weights(g.edge_count());
            for (std::size_t e = 0; e < g.edge_count(); ++e) {
                weights[e] = c * g.edges()[e].weight;
            }
            return g.with_weights(weights);
        }
        case WeightMode::TrustAdaptive:
            break;
    }

    const TrustParams& p = state.params;
    const auto adjacency = g.positive_adjacency();

    // Isolation decisions are taken against the pre-update isolated set so
    // the whole network acts on the same information in one round.
    std::vector<int> newly;
    for (int node = 0; node < g.node_count(); ++node) {
        if (state.isolated.count(node)) continue;
        bool cut = false;
        for (std::size_t e = 0; e < g.edge_count() && !cut; ++e) {
            const Edge& edge = g.edges()[e];
            if (edge.weight <= 0.0) continue;
            if (edge.i == node && !state.isolated.count(edge.j)) {
                cut = state.backward[e] < p.threshold;  // edge.j's trust in node
            } else if (edge.j == node && !state.isolated.count(edge.i)) {
                cut = state.forward[e] < p.threshold;  // edge.i's trust in node
            }
        }
        if (cut) newly.push_back(node);
    }
    for (int node : newly) {
        state.isolated.insert(node);
        state.isolated_at.emplace(node, k + 1);
    }

    std::vector<double> weights(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edges()[e];
        if (state.isolated.count(edge.i) || state.isolated.count(edge.j)) {
            weights[e] = 0.0;
            continue;
        }
        const double factor =
            std::min(p.alpha, p.min_factor + (1.0 - p.min_factor) * state.symmetrized(e));
        weights[e] = factor * edge.weight;
    }
    return g.with_weights(weights);
}

}  // namespace dwadmm
