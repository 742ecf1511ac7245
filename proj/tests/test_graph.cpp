#include "dwadmm/graph.hpp"

#include <doctest.h>

#include <random>

using namespace dwadmm;

namespace {

WeightedGraph unit_triangle() {
    return WeightedGraph::from_triples(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
}

WeightedGraph cycle(int n, double w = 1.0) {
    std::vector<std::tuple<int, int, double>> triples;
    for (int v = 0; v + 1 < n; ++v) triples.emplace_back(v, v + 1, w);
    triples.emplace_back(0, n - 1, w);
    return WeightedGraph::from_triples(n, triples);
}

std::vector<int> all_nodes(const WeightedGraph& g) {
    std::vector<int> nodes(static_cast<std::size_t>(g.node_count()));
    for (int v = 0; v < g.node_count(); ++v) nodes[static_cast<std::size_t>(v)] = v;
    return nodes;
}

}  // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("construction rejects malformed edges") {
    CHECK_THROWS_AS(WeightedGraph::from_triples(1, {}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::from_triples(3, {{0, 0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::from_triples(3, {{0, 3, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::from_triples(3, {{0, 1, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(WeightedGraph::from_triples(3, {{0, 1, 1.0}, {1, 0, 2.0}}),
                    std::invalid_argument);
}

TEST_CASE("two-node Laplacians by hand") {
    const WeightedGraph g = WeightedGraph::from_triples(2, {{0, 1, 1.0}});
    const LaplacianPair laps = build_laplacians(g);
    CHECK((laps.degree - Matrix::Identity(2, 2)).norm() < 1e-15);
    Matrix adjacency(2, 2);
    adjacency << 0, 1, 1, 0;
    CHECK((laps.adjacency - adjacency).norm() < 1e-15);
    Matrix signed_expected(2, 2);
    signed_expected << 1, -1, -1, 1;
    CHECK((laps.signed_laplacian - signed_expected).norm() < 1e-15);
    CHECK((laps.unsigned_laplacian - Matrix::Ones(2, 2)).norm() < 1e-15);
}

TEST_CASE("triangle Laplacians and zero-weight edges") {
    const LaplacianPair laps = build_laplacians(unit_triangle());
    CHECK((laps.degree - 2.0 * Matrix::Identity(3, 3)).norm() < 1e-15);
    CHECK((laps.signed_laplacian * Matrix::Ones(3, 1)).norm() <= 1e-12);
    CHECK((laps.unsigned_laplacian - (2.0 * Matrix::Identity(3, 3) + laps.adjacency)).norm() <
          1e-15);

    // A zero-weight edge must be indistinguishable from no edge at all.
    const WeightedGraph with_dead_edge =
        WeightedGraph::from_triples(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 0.0}});
    const WeightedGraph without =
        WeightedGraph::from_triples(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    const LaplacianPair a = build_laplacians(with_dead_edge);
    const LaplacianPair b = build_laplacians(without);
    CHECK((a.degree - b.degree).norm() == 0.0);
    CHECK((a.signed_laplacian - b.signed_laplacian).norm() == 0.0);
    CHECK((a.unsigned_laplacian - b.unsigned_laplacian).norm() == 0.0);
}

TEST_CASE("bipartite classification") {
    CHECK(is_bipartite(cycle(4)));
    CHECK(!is_bipartite(unit_triangle()));
    CHECK(is_bipartite(WeightedGraph::from_triples(3, {{0, 1, 1.0}, {1, 2, 1.0}})));
    // Zero-weight edges do not count: a triangle with one dead edge is a path.
    CHECK(is_bipartite(WeightedGraph::from_triples(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 0.0}})));
}

TEST_CASE("connectivity on induced subsets") {
    const WeightedGraph triangle = unit_triangle();
    CHECK(is_connected(triangle, all_nodes(triangle)));

    const WeightedGraph path = WeightedGraph::from_triples(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(!is_connected(path, {0, 2}));
    CHECK(is_connected(path, {1}));
    CHECK_THROWS_AS(is_connected(path, {}), std::invalid_argument);
    CHECK_THROWS_AS(is_connected(path, {5}), std::invalid_argument);
}

TEST_CASE("assumption report") {
    CHECK(validate_assumptions(unit_triangle(), {}).all_pass());

    const AssumptionReport square = validate_assumptions(cycle(4), {});
    CHECK(!square.non_bipartite);
    CHECK(square.connected);
    CHECK(!square.all_pass());

    // Removing one node from a 5-cycle leaves a path: still connected.
    const AssumptionReport ring = validate_assumptions(cycle(5), {1});
    CHECK(ring.non_bipartite);
    CHECK(ring.honest_connected);
}

TEST_CASE("unsigned Laplacian is positive definite off the bipartite case") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 28);
        const WeightedGraph g =
            generate_ring_with_chords(n, static_cast<int>(rng() % 4), 0.2, 2.0, rng());
        REQUIRE(!is_bipartite(g));
        const SymmetricEigen eigen =
            symmetric_eigen(build_laplacians(g).unsigned_laplacian);
        CHECK(eigen.values.minCoeff() > 0.0);
    }
}

TEST_CASE("signed Laplacian nullspace is exactly the consensus line") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + static_cast<int>(rng() % 28);
        const WeightedGraph g =
            generate_ring_with_chords(n, static_cast<int>(rng() % 4), 0.2, 2.0, rng());
        const SymmetricEigen eigen = symmetric_eigen(build_laplacians(g).signed_laplacian);
        CHECK(std::abs(eigen.values(0)) <= 1e-10);
        CHECK(eigen.values(1) > 1e-10);  // connected: algebraic connectivity positive
    }
}

TEST_CASE("laplacian construction is homogeneous in the weights") {
    const WeightedGraph g = generate_ring_with_chords(7, 2, 0.5, 1.5, 99);
    std::vector<double> scaled;
    for (const Edge& e : g.edges()) scaled.push_back(2.5 * e.weight);
    const LaplacianPair base = build_laplacians(g);
    const LaplacianPair doubled = build_laplacians(g.with_weights(scaled));
    CHECK((doubled.degree - 2.5 * base.degree).norm() < 1e-12);
    CHECK((doubled.adjacency - 2.5 * base.adjacency).norm() < 1e-12);
    CHECK((doubled.signed_laplacian - 2.5 * base.signed_laplacian).norm() < 1e-12);
    CHECK((doubled.unsigned_laplacian - 2.5 * base.unsigned_laplacian).norm() < 1e-12);
}

TEST_CASE("snapshots preserve base weights") {
    WeightedGraph g = unit_triangle();
    std::vector<double> weights{0.5, 0.25, 0.0};
    const WeightedGraph reweighted = g.with_weights(weights);
    CHECK(reweighted.edges()[0].weight == doctest::Approx(0.5));
    CHECK(reweighted.edges()[0].base_weight == doctest::Approx(1.0));
    const WeightedGraph restored = reweighted.at_base_weights();
    CHECK(restored.edges()[2].weight == doctest::Approx(1.0));
    CHECK_THROWS_AS(g.with_weights({1.0}), std::invalid_argument);
}

TEST_CASE("generators produce valid instances") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const WeightedGraph ring = generate_ring_with_chords(10, 3, 0.5, 1.5, seed);
        CHECK(!is_bipartite(ring));
        CHECK(is_connected(ring, all_nodes(ring)));

        const WeightedGraph er = generate_connected_non_bipartite(9, 0.35, 0.5, 1.5, seed);
        CHECK(!is_bipartite(er));
        CHECK(is_connected(er, all_nodes(er)));
    }
}

TEST_SUITE_END();
