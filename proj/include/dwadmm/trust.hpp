#pragma once

#include "dwadmm/graph.hpp"
#include "dwadmm/linalg.hpp"

#include <map>
#include <set>
#include <vector>

namespace dwadmm {

struct TrustParams {
    double initial = 1.0;        // starting trust per directed pair
    double decay = 0.1;          // subtracted per offending broadcast
    double deviation_tol = 0.5;  // normalized deviation above which trust drops
    double threshold = 0.3;      // trust below this isolates the node
    double min_factor = 0.5;     // edge factor at zero trust (pre-isolation)
    double alpha = 2.0;          // spectral cap on per-edge factors
};

/// Directed trust scores over the graph's edges plus the set of nodes that
/// have been cut out of the network. Trust lives in [0, 1]; isolation is
/// permanent.
struct TrustState {
    TrustParams params;
    std::vector<double> forward;   // edge order; node edge.i's trust in edge.j
    std::vector<double> backward;  // edge order; node edge.j's trust in edge.i
    std::set<int> isolated;
    std::map<int, int> isolated_at;  // node -> iteration whose graph first excludes it

    double directed(std::size_t edge_index, bool from_i) const {
        return from_i ? forward[edge_index] : backward[edge_index];
    }
    double symmetrized(std::size_t edge_index) const {
        return std::min(forward[edge_index], backward[edge_index]);
    }
};

TrustState make_trust_state(const WeightedGraph& g, TrustParams params);

/// One round of trust scoring from the received broadcasts: each node
/// compares every neighbor's broadcast against the coordinate-wise median
/// of its own (non-isolated) closed neighborhood. Deviations above the
/// tolerance cost `decay`; compliant broadcasts recover at decay / 4.
TrustState update_trust(const TrustState& state, const WeightedGraph& g, const Matrix& broadcast);

/// Minimum directed trust over edges whose endpoints are both active.
double min_active_trust(const TrustState& state, const WeightedGraph& g);

enum class WeightMode { Static, UniformScalar, TrustAdaptive };

/// Per-iteration edge reweighting rule. Static leaves weights alone,
/// UniformScalar scales every edge by a scheduled factor (cycled), and
/// TrustAdaptive maps symmetrized trust into [min_factor, 1] with hard
/// isolation below the trust threshold.
struct WeightPolicy {
    WeightMode mode = WeightMode::Static;
    std::vector<double> schedule;  // UniformScalar factors, cycled over iterations
    double alpha = 2.0;
};

/// Scheduled factor applied when stepping from iteration k to k + 1.
double scalar_factor(const WeightPolicy& policy, int k);

/// Product of the scheduled factors for iterations 0..k-1 (1 for k = 0).
/// Only meaningful when the reweighting is a scalar multiple of identity,
/// i.e. Static or UniformScalar.
double cumulative_scalar(const WeightPolicy& policy, int k);

/// Applies the policy to the weights of iteration k, producing the graph
/// for iteration k + 1. Under TrustAdaptive, nodes whose incoming trust
/// from any active neighbor fell below the threshold join state.isolated
/// (recorded against iteration k + 1) and every incident edge drops to 0.
WeightedGraph update_weights(const WeightPolicy& policy, TrustState& state,
                             const WeightedGraph& g, int k);

}  // namespace dwadmm
