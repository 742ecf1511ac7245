#include "dwadmm/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace dwadmm {

WeightedGraph::WeightedGraph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ < 2) {
        throw std::invalid_argument("graph: need at least 2 nodes");
    }
    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges_) {
        if (e.i < 0 || e.j >= node_count_ || e.i >= e.j) {
            throw std::invalid_argument("graph: edge (" + std::to_string(e.i) + ", " +
                                        std::to_string(e.j) + ") must satisfy 0 <= i < j < " +
                                        std::to_string(node_count_));
        }
        if (!(e.base_weight >= 0.0) || !std::isfinite(e.base_weight) || !(e.weight >= 0.0) ||
            !std::isfinite(e.weight)) {
            throw std::invalid_argument("graph: edgeweights must be finite and nonnegative");
        }
        if (!seen.insert({e.i, e.j}).second) {
            throw std::invalid_argument("graph: duplicate edge (" + std::to_string(e.i) + ", " +
                                        std::to_string(e.j) + ")");
        }
    }
}

WeightedGraph WeightedGraph::from_triples(
    int node_count, const std::vector<std::tuple<int, int, double>>& triples) {
    std::vector<Edge> edges;
    edges.reserve(triples.size());
    for (const auto& [i, j, w] : triples) {
        edges.push_back(Edge{std::min(i, j), std::max(i, j), w, w});
    }
    return WeightedGraph(node_count, std::move(edges));
}

WeightedGraph WeightedGraph::with_weights(const std::vector<double>& weights) const {
    if (weights.size() != edges_.size()) {
        throw std::invalid_argument("graph: expected " + std::to_string(edges_.size()) +
                                    " weights, got " + std::to_string(weights.size()));
    }
    std::vector<Edge> updated = edges_;
    for (std::size_t e = 0; e < updated.size(); ++e) {
        updated[e].weight = weights[e];
    }
    return WeightedGraph(node_count_, std::move(updated));
}

WeightedGraph WeightedGraph::at_base_weights() const {
    std::vector<Edge> updated = edges_;
    for (Edge& e : updated) e.weight = e.base_weight;
    return WeightedGraph(node_count_, std::move(updated));
}

std::vector<std::vector<int>> WeightedGraph::positive_adjacency() const {
    std::vector<std::vector<int>> adjacency(static_cast<std::size_t>(node_count_));
    for (const Edge& e : edges_) {
        if (e.weight > 0.0) {
            adjacency[static_cast<std::size_t>(e.i)].push_back(e.j);
            adjacency[static_cast<std::size_t>(e.j)].push_back(e.i);
        }
    }
    return adjacency;
}

double WeightedGraph::weight_between(int i, int j) const {
    for (const Edge& e : edges_) {
        if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return e.weight;
    }
    return 0.0;
}

LaplacianPair build_laplacians(const WeightedGraph& g) {
    const int n = g.node_count();
    Matrix adjacency = Matrix::Zero(n, n);
    Matrix degree = Matrix::Zero(n, n);
    for (const Edge& e : g.edges()) {
        adjacency(e.i, e.j) = e.weight;
        adjacency(e.j, e.i) = e.weight;
        degree(e.i, e.i) += e.weight;
        degree(e.j, e.j) += e.weight;
    }
    LaplacianPair pair;
    pair.degree = degree;
    pair.adjacency = adjacency;
    pair.signed_laplacian = degree - adjacency;
    pair.unsigned_laplacian = degree + adjacency;
    return pair;
}

bool is_bipartite(const WeightedGraph& g) {
    const auto adjacency = g.positive_adjacency();
    const int n = g.node_count();
    std::vector<int> color(static_cast<std::size_t>(n), -1);
    for (int start = 0; start < n; ++start) {
        if (color[static_cast<std::size_t>(start)] != -1) continue;
        color[static_cast<std::size_t>(start)] = 0;
        std::deque<int> queue{start};
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            for (int v : adjacency[static_cast<std::size_t>(u)]) {
                if (color[static_cast<std::size_t>(v)] == -1) {
                    color[static_cast<std::size_t>(v)] =
                        1 - color[static_cast<std::size_t>(u)];
                    queue.push_back(v);
                } else if (color[static_cast<std::size_t>(v)] ==
                           color[static_cast<std::size_t>(u)]) {
                    return false;
                }
            }
        }
    }
    return true;
}

bool is_connected(const WeightedGraph& g, const std::vector<int>& subset) {
    if (subset.empty()) {
        throw std::invalid_argument("is_connected: subset must be nonempty");
    }
    std::set<int> members;
    for (int v : subset) {
        if (v < 0 || v >= g.node_count()) {
            throw std::invalid_argument("is_connected: node " + std::to_string(v) +
                                        " out of range");
        }
        members.insert(v);
    }
    const auto adjacency = g.positive_adjacency();
    std::set<int> reached{*members.begin()};
    std::deque<int> queue{*members.begin()};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adjacency[static_cast<std::size_t>(u)]) {
            if (members.count(v) && !reached.count(v)) {
                reached.insert(v);
                queue.push_back(v);
            }
        }
    }
    return reached.size() == members.size();
}

AssumptionReport validate_assumptions(const WeightedGraph& g, const std::set<int>& byzantine) {
    AssumptionReport report;
    report.non_bipartite = !is_bipartite(g);
    if (!report.non_bipartite) {
        report.failures.push_back(
            "graph is bipartite: an odd-length cycle is required for the unsigned Laplacian to "
            "be positive definite");
    }

    std::vector<int> all(static_cast<std::size_t>(g.node_count()));
    for (int v = 0; v < g.node_count(); ++v) all[static_cast<std::size_t>(v)] = v;
    report.connected = is_connected(g, all);
    if (!report.connected) {
        report.failures.push_back("graph is disconnected");
    }

    std::vector<int> honest;
    for (int v = 0; v < g.node_count(); ++v) {
        if (!byzantine.count(v)) honest.push_back(v);
    }
    if (honest.empty()) {
        report.honest_connected = false;
        report.failures.push_back("no honest nodes remain");
    } else {
        report.honest_connected = is_connected(g, honest);
        if (!report.honest_connected) {
            report.failures.push_back("honest nodes do not form a connected subgraph");
        }
    }
    return report;
}

namespace {

WeightedGraph build_with_random_weights(int nodes,
                                        const std::vector<std::pair<int, int>>& pairs,
                                        double weight_min, double weight_max,
                                        std::mt19937_64& rng) {
    if (!(weight_min >= 0.0) || weight_max < weight_min) {
        throw std::invalid_argument("graph generator: invalid weight range");
    }
    std::uniform_real_distribution<double> weight(weight_min, weight_max);
    std::vector<std::tuple<int, int, double>> triples;
    triples.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
        triples.emplace_back(i, j, weight(rng));
    }
    return WeightedGraph::from_triples(nodes, triples);
}

}  // namespace

WeightedGraph generate_ring_with_chords(int nodes, int extra_chords, double weight_min,
                                        double weight_max, std::uint64_t seed) {
    if (nodes < 3) {
        throw std::invalid_argument("generate_ring_with_chords: need at least 3 nodes");
    }
    std::mt19937_64 rng(seed);
    std::set<std::pair<int, int>> chosen;
    std::vector<std::pair<int, int>> pairs;
    for (int v = 0; v + 1 < nodes; ++v) {
        pairs.emplace_back(v, v + 1);
        chosen.insert({v, v + 1});
    }
    pairs.emplace_back(0, nodes - 1);
    chosen.insert({0, nodes - 1});
    // Even rings are bipartite; the (0, 2) chord closes a triangle.
    if (nodes % 2 == 0 && nodes > 3) {
        pairs.emplace_back(0, 2);
        chosen.insert({0, 2});
    }
    std::uniform_int_distribution<int> pick(0, nodes - 1);
    int added = 0;
    int attempts = 0;
    while (added < extra_chords && attempts < 1000 * (extra_chords + 1)) {
        ++attempts;
        int a = pick(rng);
        int b = pick(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        if (chosen.count({a, b})) continue;
        chosen.insert({a, b});
        pairs.emplace_back(a, b);
        ++added;
    }
    return build_with_random_weights(nodes, pairs, weight_min, weight_max, rng);
}

WeightedGraph generate_connected_non_bipartite(int nodes, double edge_prob, double weight_min,
                                               double weight_max, std::uint64_t seed) {
    if (nodes < 3) {
        throw std::invalid_argument("generate_connected_non_bipartite: need at least 3 nodes");
    }
    if (!(edge_prob > 0.0) || edge_prob > 1.0) {
        throw std::invalid_argument("generate_connected_non_bipartite: edge_prob must be in (0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < nodes; ++i) {
            for (int j = i + 1; j < nodes; ++j) {
                if (coin(rng) < edge_prob) pairs.emplace_back(i, j);
            }
        }
        if (pairs.empty()) continue;
        WeightedGraph candidate =
            build_with_random_weights(nodes, pairs, weight_min, weight_max, rng);
        std::vector<int> all(static_cast<std::size_t>(nodes));
        for (int v = 0; v < nodes; ++v) all[static_cast<std::size_t>(v)] = v;
        if (is_connected(candidate, all) && !is_bipartite(candidate)) {
            return candidate;
        }
    }
    throw std::runtime_error(
        "generate_connected_non_bipartite: no valid sample after 1000 attempts; raise edge_prob");
}

}  // namespace dwadmm
