#pragma once

#include "dwadmm/linalg.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace dwadmm {

/// Undirected edge with i < j. base_weight is fixed at construction;
/// weight is the current (time-varying) value and starts equal to it.
struct Edge {
    int i = 0;
    int j = 0;
    double base_weight = 0.0;
    double weight = 0.0;
};

/// Weighted undirected graph with nonnegative, time-varying edge weights.
/// No self-loops, no duplicate edges. Instances are snapshots: reweighting
/// produces a new graph via with_weights().
class WeightedGraph {
public:
    WeightedGraph(int node_count, std::vector<Edge> edges);

    static WeightedGraph from_triples(int node_count,
                                      const std::vector<std::tuple<int, int, double>>& triples);

    int node_count() const { return node_count_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    /// Snapshot with new current weights (one per edge, in edge order).
    /// Base weights are preserved.
    WeightedGraph with_weights(const std::vector<double>& weights) const;

    /// Snapshot with current weights reset to the base weights.
    WeightedGraph at_base_weights() const;

    /// Neighbor lists over edges with current weight > 0.
    std::vector<std::vector<int>> positive_adjacency() const;

    /// Current weight of edge {i, j}, or 0 if absent.
    double weight_between(int i, int j) const;

private:
    int node_count_;
    std::vector<Edge> edges_;
};

/// Degree, adjacency and both Laplacians for one weight snapshot:
/// signed L- = D - A (row sums zero), unsigned L+ = D + A.
struct LaplacianPair {
    Matrix degree;
    Matrix adjacency;
    Matrix signed_laplacian;
    Matrix unsigned_laplacian;
};

LaplacianPair build_laplacians(const WeightedGraph& g);

/// Two-colorability of the positive-weight subgraph.
bool is_bipartite(const WeightedGraph& g);

/// Connectivity of the positive-weight subgraph induced on subset.
/// A singleton is connected; an empty subset is an error.
bool is_connected(const WeightedGraph& g, const std::vector<int>& subset);

/// Structural checks required for a valid run: non-bipartite graph,
/// connected graph, connected honest subgraph.
struct AssumptionReport {
    bool non_bipartite = false;
    bool connected = false;
    bool honest_connected = false;
    std::vector<std::string> failures;

    bool all_pass() const { return failures.empty(); }
};

AssumptionReport validate_assumptions(const WeightedGraph& g, const std::set<int>& byzantine);

/// Ring 0-1-...-(n-1)-0 plus chords; always contains an odd cycle.
/// extra_chords random chords are added on top of the guaranteed one.
WeightedGraph generate_ring_with_chords(int nodes, int extra_chords, double weight_min,
                                        double weight_max, std::uint64_t seed);

/// Erdos-Renyi sampling with rejection until connected and non-bipartite.
WeightedGraph generate_connected_non_bipartite(int nodes, double edge_prob, double weight_min,
                                               double weight_max, std::uint64_t seed);

}  // namespace dwadmm
