#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "streamqe/graph.hpp"
#include "streamqe/rng.hpp"
#include "streamqe/stream.hpp"
#include "support/oracles.hpp"

using streamqe::build_cooccurrence_graph;
using streamqe::CooccurrenceGraph;
using streamqe::Document;
using streamqe::eigenvector_centrality;
using streamqe::Rng;
using streamqe::Window;

namespace {

Document doc_with(std::vector<std::string> tokens) {
    Document d;
    d.tokens = std::move(tokens);
    return d;
}

TEST(Cooccurrence, DocumentLevelPairCounts) {
    Window w;
    w.documents.push_back(doc_with({"a", "b", "a", "c"}));
    w.documents.push_back(doc_with({"b", "c"}));
    const CooccurrenceGraph g = build_cooccurrence_graph(w);

    const std::vector<std::string> nodes = {"a", "b", "c"};
    EXPECT_EQ(g.nodes(), nodes);
    EXPECT_DOUBLE_EQ(g.edge_weight("a", "b"), 1.0);
    EXPECT_DOUBLE_EQ(g.edge_weight("a", "c"), 1.0);
    EXPECT_DOUBLE_EQ(g.edge_weight("b", "c"), 2.0);
    EXPECT_DOUBLE_EQ(g.edge_weight("b", "a"), 1.0);  // symmetric
    EXPECT_DOUBLE_EQ(g.edge_weight("a", "z"), 0.0);
    EXPECT_EQ(g.edge_count(), 3u);
}

TEST(Cooccurrence, RepeatsInsideOneDocumentDoNotMultiply) {
    Window w;
    w.documents.push_back(doc_with({"x", "y", "x", "y", "x"}));
    const CooccurrenceGraph g = build_cooccurrence_graph(w);
    EXPECT_DOUBLE_EQ(g.edge_weight("x", "y"), 1.0);
}

TEST(Cooccurrence, IsolatedTokensBecomeNodes) {
    Window w;
    w.documents.push_back(doc_with({"solo"}));
    w.documents.push_back(doc_with({"a", "b"}));
    const CooccurrenceGraph g = build_cooccurrence_graph(w);
    EXPECT_EQ(g.node_count(), 3u);
    EXPECT_GE(g.node_id("solo"), 0);
    EXPECT_EQ(g.neighbors(g.node_id("solo")).size(), 0u);
}

TEST(Cooccurrence, SelfLoopRejected) {
    CooccurrenceGraph g(std::set<std::string>{"a", "b"});
    EXPECT_THROW(g.add_edge_weight(0, 0, 1.0), streamqe::Error);
}

TEST(Centrality, EdgelessGraphIsUniform) {
    Window w;
    w.documents.push_back(doc_with({"a"}));
    w.documents.push_back(doc_with({"b"}));
    w.documents.push_back(doc_with({"c"}));
    w.documents.push_back(doc_with({"d"}));
    const auto result = eigenvector_centrality(build_cooccurrence_graph(w));
    EXPECT_TRUE(result.converged);
    for (const auto& [token, score] : result.scores) EXPECT_DOUBLE_EQ(score, 0.5);
}

TEST(Centrality, StarGraphAnalytic) {
    // Star with center h and n leaves: center scores 1/sqrt(2), each leaf
    // 1/sqrt(2n).
    const int n = 7;
    Window w;
    for (int i = 0; i < n; ++i)
        w.documents.push_back(doc_with({"hub", "leaf" + std::to_string(i)}));
    const auto result = eigenvector_centrality(build_cooccurrence_graph(w));
    ASSERT_TRUE(result.converged);
    EXPECT_NEAR(result.scores.at("hub"), 1.0 / std::sqrt(2.0), 1e-7);
    for (int i = 0; i < n; ++i)
        EXPECT_NEAR(result.scores.at("leaf" + std::to_string(i)),
                    1.0 / std::sqrt(2.0 * n), 1e-7);
}

std::vector<std::vector<double>> dense_adjacency(const CooccurrenceGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, wt] : g.neighbors(static_cast<int>(i)))
            a[i][static_cast<std::size_t>(j)] = wt;
    return a;
}

// Random connected graph as a window of two-token documents: a spanning
// tree plus extra edges, with repetition driving the weights above 1.
CooccurrenceGraph random_connected_graph(int nodes, Rng& rng) {
    Window w;
    std::vector<std::string> names;
    for (int i = 0; i < nodes; ++i) names.push_back("n" + std::to_string(100 + i));
    for (int i = 1; i < nodes; ++i) {
        const int parent = static_cast<int>(rng.next_index(static_cast<std::size_t>(i)));
        w.documents.push_back(doc_with({names[static_cast<std::size_t>(parent)],
                                        names[static_cast<std::size_t>(i)]}));
    }
    const int extras = nodes * 2;
    for (int e = 0; e < extras; ++e) {
        const auto a = rng.next_index(static_cast<std::size_t>(nodes));
        const auto b = rng.next_index(static_cast<std::size_t>(nodes));
        if (a == b) continue;
        w.documents.push_back(doc_with({names[a], names[b]}));
    }
    return build_cooccurrence_graph(w);
}

TEST(Centrality, MatchesDenseEigensolver) {
    Rng rng(303);
    for (int trial = 0; trial < 25; ++trial) {
        const int nodes = 3 + static_cast<int>(rng.next_index(10));
        const CooccurrenceGraph g = random_connected_graph(nodes, rng);
        const auto result = eigenvector_centrality(g, 1e-12, 20000);
        ASSERT_TRUE(result.converged);
        std::vector<double> got;
        for (const std::string& node : g.nodes()) got.push_back(result.scores.at(node));
        const auto want = oracles::dominant_eigenvector(dense_adjacency(g));
        EXPECT_LT(oracles::sign_aligned_l2(got, want), 1e-6) << "trial " << trial;
    }
}

TEST(Centrality, BadParametersRejected) {
    CooccurrenceGraph g(std::set<std::string>{"a", "b"});
    EXPECT_THROW(eigenvector_centrality(g, 0.0), streamqe::Error);
    EXPECT_THROW(eigenvector_centrality(g, 1e-8, 0), streamqe::Error);
}

TEST(Centrality, EmptyGraph) {
    const auto result = eigenvector_centrality(CooccurrenceGraph{});
    EXPECT_TRUE(result.converged);
    EXPECT_TRUE(result.scores.empty());
}

}  // namespace
