#include "dwadmm/trust.hpp"

#include <doctest.h>

#include <random>

using namespace dwadmm;

namespace {

WeightedGraph unit_triangle() {
    return WeightedGraph::from_triples(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

// Star around node 0 with an outlier leaf; the hub sees enough peers for a
// stable median.
WeightedGraph star5() {
    return WeightedGraph::from_triples(
        5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
}

}  // namespace

TEST_SUITE_BEGIN("trust");

TEST_CASE("identical broadcasts keep trust saturated at one") {
    const WeightedGraph g = unit_triangle();
    TrustState state = make_trust_state(g, {});
    const Matrix broadcast = Matrix::Constant(3, 2, 4.2);
    for (int k = 0; k < 10; ++k) state = update_trust(state, g, broadcast);
    CHECK(min_active_trust(state, g) == doctest::Approx(1.0));
    CHECK(state.isolated.empty());
}

TEST_CASE("a persistent outlier loses trust by exactly the decay per round") {
    const WeightedGraph g = star5();
    TrustParams params;  // decay 0.1, deviation tolerance 0.5
    TrustState state = make_trust_state(g, params);
    Matrix broadcast = Matrix::Zero(5, 1);
    broadcast(4, 0) = 100.0;  // node 4 shouts, everyone else agrees at 0

    state = update_trust(state, g, broadcast);
    // Hub's median over {0,1,2,3,4} is 0, so node 4 deviates by 100.
    CHECK(state.forward[3] == doctest::Approx(0.9));  // edge (0,4): 0's trust in 4
    state = update_trust(state, g, broadcast);
    CHECK(state.forward[3] == doctest::Approx(0.8));
}

TEST_CASE("isolation fires on the predicted offending round") {
    // Independent oracle: iterate the scalar recursion until it crosses the
    // threshold.
    TrustParams params;
    int predicted = 0;
    for (double t = params.initial; t >= params.threshold;
         t = std::max(0.0, t - params.decay)) {
        ++predicted;
    }
    CHECK(predicted == 8);

    const WeightedGraph g = star5();
    WeightedGraph current = g;
    TrustState state = make_trust_state(g, params);
    WeightPolicy policy;
    policy.mode = WeightMode::TrustAdaptive;
    Matrix broadcast = Matrix::Zero(5, 1);
    broadcast(4, 0) = 100.0;

    int isolated_on = -1;
    for (int round = 1; round <= 20; ++round) {
        state = update_trust(state, current, broadcast);
        current = update_weights(policy, state, current, round - 1);
        if (state.isolated.count(4)) {
            isolated_on = round;
            break;
        }
    }
    CHECK(isolated_on == predicted);
    CHECK(state.isolated_at.at(4) == predicted);
}

TEST_CASE("static policy never changes weights") {
    const WeightedGraph g = unit_triangle();
    TrustState state = make_trust_state(g, {});
    WeightPolicy policy;  // Static
    WeightedGraph current = g;
    for (int k = 0; k < 5; ++k) current = update_weights(policy, state, current, k);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        CHECK(current.edges()[e].weight == doctest::Approx(g.edges()[e].weight));
    }
}

TEST_CASE("uniform scalar policy multiplies weights by the schedule") {
    const WeightedGraph g = unit_triangle();
    TrustState state = make_trust_state(g, {});
    WeightPolicy policy;
    policy.mode = WeightMode::UniformScalar;
    policy.schedule = {0.9};
    WeightedGraph current = g;
    current = update_weights(policy, state, current, 0);
    current = update_weights(policy, state, current, 1);
    for (const Edge& e : current.edges()) CHECK(e.weight == doctest::Approx(0.81));
}

TEST_CASE("cumulative scalar products") {
    WeightPolicy policy;
    policy.mode = WeightMode::UniformScalar;
    policy.schedule = {1.0};
    CHECK(cumulative_scalar(policy, 0) == doctest::Approx(1.0));
    CHECK(cumulative_scalar(policy, 7) == doctest::Approx(1.0));

    policy.schedule = {0.9};
    CHECK(cumulative_scalar(policy, 2) == doctest::Approx(0.81));

    policy.schedule = {1.0, 0.5, 2.0};
    CHECK(cumulative_scalar(policy, 3) == doctest::Approx(1.0));

    policy.mode = WeightMode::TrustAdaptive;
    CHECK_THROWS_AS(cumulative_scalar(policy, 1), std::invalid_argument);

    policy.mode = WeightMode::UniformScalar;
    policy.schedule = {3.0};  // above the default alpha = 2 cap
    CHECK_THROWS_AS(cumulative_scalar(policy, 1), std::invalid_argument);
}

TEST_CASE("isolating a triangle node zeroes both incident edges permanently") {
    const WeightedGraph g = unit_triangle();
    TrustParams params;
    TrustState state = make_trust_state(g, params);
    // Drive node 2's incoming trust below the threshold by hand.
    state.forward[1] = 0.1;  // edge (1,2): 1's trust in 2
    WeightPolicy policy;
    policy.mode = WeightMode::TrustAdaptive;

    WeightedGraph current = update_weights(policy, state, g, 4);
    CHECK(state.isolated.count(2) == 1);
    CHECK(state.isolated_at.at(2) == 5);
    CHECK(current.weight_between(1, 2) == 0.0);
    CHECK(current.weight_between(0, 2) == 0.0);
    CHECK(current.weight_between(0, 1) > 0.0);

    // Permanence: even with restored trust scores the weights stay zero.
    state.forward[1] = 1.0;
    state.backward[1] = 1.0;
    for (int k = 5; k < 10; ++k) current = update_weights(policy, state, current, k);
    CHECK(current.weight_between(1, 2) == 0.0);
    CHECK(current.weight_between(0, 2) == 0.0);
}

TEST_CASE("trust-adaptive factors respect the spectral cap and the floor") {
    const WeightedGraph g = unit_triangle();
    TrustParams params;
    TrustState state = make_trust_state(g, params);
    state.forward[0] = 0.4;  // above the threshold: reweighted, not isolated
    WeightPolicy policy;
    policy.mode = WeightMode::TrustAdaptive;
    const WeightedGraph current = update_weights(policy, state, g, 0);
    // factor = min_factor + (1 - min_factor) * 0.4 = 0.7
    CHECK(current.weight_between(0, 1) == doctest::Approx(0.7));
    CHECK(current.weight_between(1, 2) == doctest::Approx(1.0));
    for (const Edge& e : current.edges()) {
        CHECK(e.weight <= params.alpha * g.weight_between(e.i, e.j) + 1e-15);
    }
}

TEST_CASE("trust scores stay inside the unit interval under random broadcasts") {
    const WeightedGraph g = unit_triangle();
    TrustParams params;
    params.decay = 0.4;
    TrustState state = make_trust_state(g, params);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss(0.0, 5.0);
    for (int round = 0; round < 200; ++round) {
        Matrix broadcast(3, 1);
        for (int r = 0; r < 3; ++r) broadcast(r, 0) = gauss(rng);
        state = update_trust(state, g, broadcast);
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            CHECK(state.forward[e] >= 0.0);
            CHECK(state.forward[e] <= 1.0);
            CHECK(state.backward[e] >= 0.0);
            CHECK(state.backward[e] <= 1.0);
        }
    }
}

TEST_CASE("weight updates preserve one weight per undirected edge") {
    const WeightedGraph g = star5();
    TrustState state = make_trust_state(g, {});
    WeightPolicy policy;
    policy.mode = WeightMode::TrustAdaptive;
    const WeightedGraph current = update_weights(policy, state, g, 0);
    CHECK(current.edge_count() == g.edge_count());
    const LaplacianPair laps = build_laplacians(current);
    CHECK((laps.adjacency - laps.adjacency.transpose()).norm() == 0.0);
}

TEST_SUITE_END();
