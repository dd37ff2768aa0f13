#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "streamqe/error.hpp"
#include "streamqe/stream.hpp"

namespace streamqe {

// Undirected weighted word graph for one window. Node ids follow the
// lexicographic order of the tokens, which keeps every downstream artifact
// deterministic. No self-loops.
class CooccurrenceGraph {
public:
    CooccurrenceGraph() = default;

    explicit CooccurrenceGraph(std::set<std::string> tokens) {
        nodes_.assign(tokens.begin(), tokens.end());
        adjacency_.resize(nodes_.size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i]] = static_cast<int>(i);
    }

    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<std::string>& nodes() const { return nodes_; }

    int node_id(const std::string& token) const {
        auto it = index_.find(token);
        return it == index_.end() ? -1 : it->second;
    }

    void add_edge_weight(int a, int b, double w) {
        if (a == b) throw_internal("self-loop in co-occurrence graph");
        adjacency_[static_cast<std::size_t>(a)][b] += w;
        adjacency_[static_cast<std::size_t>(b)][a] += w;
    }

    double edge_weight(const std::string& a, const std::string& b) const {
        int ia = node_id(a), ib = node_id(b);
        if (ia < 0 || ib < 0) return 0.0;
        const auto& row = adjacency_[static_cast<std::size_t>(ia)];
        auto it = row.find(ib);
        return it == row.end() ? 0.0 : it->second;
    }

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (const auto& row : adjacency_) n += row.size();
        return n / 2;
    }

    const std::map<int, double>& neighbors(int node) const {
        return adjacency_[static_cast<std::size_t>(node)];
    }

private:
    std::vector<std::string> nodes_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::map<int, double>> adjacency_;
};

// Each document contributes +1 to every unordered pair of distinct tokens
// it contains (document-level presence, repeats inside a document do not
// multiply). Every token seen in the window becomes a node, even isolated
// ones.
template <typename DocIter>
CooccurrenceGraph build_cooccurrence_graph(DocIter first, DocIter last) {
    std::set<std::string> vocab;
    for (DocIter it = first; it != last; ++it)
        vocab.insert(it->tokens.begin(), it->tokens.end());
    CooccurrenceGraph graph(std::move(vocab));
    for (DocIter it = first; it != last; ++it) {
        std::set<std::string> uniq(it->tokens.begin(), it->tokens.end());
        std::vector<int> ids;
        ids.reserve(uniq.size());
        for (const std::string& tok : uniq) ids.push_back(graph.node_id(tok));
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                graph.add_edge_weight(ids[i], ids[j], 1.0);
    }
    return graph;
}

inline CooccurrenceGraph build_cooccurrence_graph(const Window& window) {
    return build_cooccurrence_graph(window.documents.begin(), window.documents.end());
}

struct CentralityResult {
    std::map<std::string, double> scores;
    bool converged = true;
    int iterations = 0;
};

// Power iteration from the uniform positive start vector. The matrix is
// diagonally shifted (A + cI) so that on bipartite graphs, where the
// spectrum is symmetric and plain iteration oscillates forever, the
// dominant eigenvalue is strictly largest in magnitude; the shift leaves
// the eigenvectors themselves untouched. Output is the L2-normalized
// dominant eigenvector; entries stay nonnegative because the matrix and
// the start vector are. For disconnected graphs the mass concentrates on
// the component with the largest eigenvalue.
inline CentralityResult eigenvector_centrality(const CooccurrenceGraph& graph,
                                               double tol = 1e-8,
                                               int max_iter = 1000) {
    if (tol <= 0) throw_input("centrality tolerance must be > 0");
    if (max_iter < 1) throw_input("centrality max_iter must be >= 1");
    CentralityResult result;
    const std::size_t n = graph.node_count();
    if (n == 0) return result;

    double max_row_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (const auto& [nbr, w] : graph.neighbors(static_cast<int>(i))) row += w;
        max_row_sum = std::max(max_row_sum, row);
    }
    const double shift = max_row_sum / 2.0;

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> next(n, 0.0);
    result.converged = false;
    for (int iter = 1; iter <= max_iter; ++iter) {
        result.iterations = iter;
        for (std::size_t i = 0; i < n; ++i) {
            double sum = shift * v[i];
            for (const auto& [nbr, w] : graph.neighbors(static_cast<int>(i)))
                sum += w * v[static_cast<std::size_t>(nbr)];
            next[i] = sum;
        }
        double norm = 0.0;
        for (double x : next) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            // Edgeless graph: eigenvalue 0, keep the uniform vector.
            result.converged = true;
            break;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] /= norm;
            double d = next[i] - v[i];
            diff += d * d;
        }
        v.swap(next);
        if (std::sqrt(diff) < tol) {
            result.converged = true;
            break;
        }
    }
    for (std::size_t i = 0; i < n; ++i) result.scores[graph.nodes()[i]] = v[i];
    return result;
}

}  // namespace streamqe
