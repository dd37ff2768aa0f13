#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "streamqe/error.hpp"
#include "streamqe/expansion.hpp"
#include "streamqe/rng.hpp"
#include "streamqe/stream.hpp"

namespace streamqe {

struct EvalConfig {
    int k_min = 2;
    int k_max = 15;
    int max_hashtag_features = 100;  // H
    std::uint64_t seed = 0;
};

inline std::size_t volume(const QueryResult& r) { return r.matched.size(); }

// Total hashtags across matched documents, duplicates counted.
inline std::int64_t relevance(const QueryResult& r) {
    std::int64_t n = 0;
    for (const Document* doc : r.matched) n += static_cast<std::int64_t>(doc->hashtags.size());
    return n;
}

// Binary presence of the top-H in-result hashtags, one row per matched
// document. Documents carrying none of the top-H hashtags stay as zero rows.
struct HashtagFeatureMatrix {
    std::vector<std::string> columns;
    std::vector<std::vector<int>> rows;  // sorted column ids present in the row

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return columns.size(); }
};

inline HashtagFeatureMatrix build_hashtag_features(const QueryResult& r, int max_features) {
    if (max_features < 2) throw_input("hashtag feature count must be >= 2");
    std::map<std::string, std::int64_t> freq;
    for (const Document* doc : r.matched)
        for (const std::string& tag : doc->hashtags) freq[tag] += 1;

    std::vector<std::pair<std::string, std::int64_t>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (ranked.size() > static_cast<std::size_t>(max_features))
        ranked.resize(static_cast<std::size_t>(max_features));

    HashtagFeatureMatrix m;
    std::map<std::string, int> column_id;
    for (const auto& [tag, n] : ranked) {
        column_id[tag] = static_cast<int>(m.columns.size());
        m.columns.push_back(tag);
    }
    for (const Document* doc : r.matched) {
        std::vector<int> row;
        for (const std::string& tag : doc->hashtags) {
            auto it = column_id.find(tag);
            if (it != column_id.end()) row.push_back(it->second);
        }
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        m.rows.push_back(std::move(row));
    }
    return m;
}

struct KmeansResult {
    std::vector<int> assignment;
    double distortion = 0.0;
    std::vector<double> distortion_history;  // one entry per assignment pass
    int iterations = 0;
};

namespace detail {

// Squared distance from a binary sparse row to a dense center:
// nnz(x) - 2 * sum over x's features of c - plus ||c||^2.
inline double row_center_dist2(const std::vector<int>& row,
                               const std::vector<double>& center,
                               double center_norm2) {
    double cross = 0.0;
    for (int f : row) cross += center[static_cast<std::size_t>(f)];
    return static_cast<double>(row.size()) - 2.0 * cross + center_norm2;
}

// Squared distance between two binary sparse rows: symmetric difference size.
inline double row_row_dist2(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t i = 0, j = 0, common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return static_cast<double>(a.size() + b.size() - 2 * common);
}

}  // namespace detail

// Lloyd iterations from a seeded init that picks each next center with
// probability proportional to squared distance from the chosen ones.
inline KmeansResult kmeans(const HashtagFeatureMatrix& X, int k, std::uint64_t seed) {
    if (k < 1) throw_input("kmeans k must be >= 1");
    const std::size_t n = X.row_count();
    if (n < static_cast<std::size_t>(k))
        throw_input("kmeans needs at least k rows (" + std::to_string(n) + " < " +
                     std::to_string(k) + ")");
    const std::size_t dim = X.column_count();
    Rng rng(seed);

    std::vector<std::size_t> center_rows;
    center_rows.push_back(rng.next_index(n));
    std::vector<double> d2(n);
    while (center_rows.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = detail::row_row_dist2(X.rows[i], X.rows[center_rows[0]]);
            for (std::size_t c = 1; c < center_rows.size(); ++c)
                best = std::min(best, detail::row_row_dist2(X.rows[i], X.rows[center_rows[c]]));
            d2[i] = best;
            total += best;
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double u = rng.next_double() * total;
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (cum > u) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) pick = n - 1;
        } else {
            // All rows coincide with some center; take the lowest unchosen row.
            for (std::size_t i = 0; i < n; ++i) {
                if (std::find(center_rows.begin(), center_rows.end(), i) == center_rows.end()) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) pick = 0;
        }
        center_rows.push_back(pick);
    }

    std::vector<std::vector<double>> centers(static_cast<std::size_t>(k),
                                             std::vector<double>(dim, 0.0));
    for (int c = 0; c < k; ++c)
        for (int f : X.rows[center_rows[static_cast<std::size_t>(c)]])
            centers[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] = 1.0;

    KmeansResult result;
    result.assignment.assign(n, -1);
    std::vector<double> norms(static_cast<std::size_t>(k));
    for (int iter = 1; iter <= 300; ++iter) {
        for (int c = 0; c < k; ++c) {
            double s = 0.0;
            for (double v : centers[static_cast<std::size_t>(c)]) s += v * v;
            norms[static_cast<std::size_t>(c)] = s;
        }
        std::vector<int> next(n);
        double distortion = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d = detail::row_center_dist2(X.rows[i], centers[0], norms[0]);
            for (int c = 1; c < k; ++c) {
                const double d = detail::row_center_dist2(X.rows[i], centers[static_cast<std::size_t>(c)],
                                                          norms[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            next[i] = best_c;
            distortion += std::max(best_d, 0.0);
        }
        result.distortion_history.push_back(distortion);
        result.iterations = iter;
        if (next == result.assignment) break;
        result.assignment = std::move(next);

        std::vector<std::vector<double>> sums(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = static_cast<std::size_t>(result.assignment[i]);
            sizes[c] += 1;
            for (int f : X.rows[i]) sums[c][static_cast<std::size_t>(f)] += 1.0;
        }
        for (int c = 0; c < k; ++c) {
            const std::size_t cu = static_cast<std::size_t>(c);
            if (sizes[cu] == 0) continue;  // empty cluster keeps its center
            for (std::size_t f = 0; f < dim; ++f)
                centers[cu][f] = sums[cu][f] / static_cast<double>(sizes[cu]);
        }
    }
    result.distortion = result.distortion_history.back();
    return result;
}

// Geometric knee: the interior point with the largest perpendicular distance
// to the chord joining the curve's endpoints; ties pick the smallest k.
inline int elbow(const std::vector<int>& ks, const std::vector<double>& distortions) {
    if (ks.size() != distortions.size()) throw_input("elbow: mismatched curve lengths");
    if (ks.size() < 3) throw_input("elbow needs at least 3 curve points");
    for (std::size_t i = 1; i < ks.size(); ++i)
        if (ks[i] <= ks[i - 1]) throw_input("elbow: ks must be strictly increasing");

    const double x0 = ks.front(), y0 = distortions.front();
    const double x1 = ks.back(), y1 = distortions.back();
    const double dx = x1 - x0, dy = y1 - y0;
    const double len = std::sqrt(dx * dx + dy * dy);

    int best_k = ks[1];
    double best_d = -1.0;
    for (std::size_t i = 1; i + 1 < ks.size(); ++i) {
        const double num = std::fabs(dy * (ks[i] - x0) - dx * (distortions[i] - y0));
        const double d = num / len;
        if (d > best_d) {
            best_d = d;
            best_k = ks[i];
        }
    }
    return best_k;
}

struct ConcisenessResult {
    int optimal_k = 0;
    bool degenerate = false;
    std::vector<int> ks;
    std::vector<double> distortions;
};

inline ConcisenessResult conciseness(const QueryResult& r, const EvalConfig& cfg) {
    if (cfg.k_min < 1 || cfg.k_max - cfg.k_min < 2)
        throw_input("conciseness needs k_min >= 1 and at least 3 k values");
    ConcisenessResult out;
    const std::size_t rows = r.matched.size();
    if (rows < static_cast<std::size_t>(cfg.k_max) + 1) {
        out.optimal_k = static_cast<int>(rows);
        out.degenerate = true;
        return out;
    }
    const HashtagFeatureMatrix X = build_hashtag_features(r, cfg.max_hashtag_features);
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
        const KmeansResult km = kmeans(X, k, derive_seed(cfg.seed, static_cast<std::uint64_t>(k)));
        out.ks.push_back(k);
        out.distortions.push_back(km.distortion);
    }
    out.optimal_k = elbow(out.ks, out.distortions);
    return out;
}

inline std::int64_t hashtag_occurrences(const std::string& tag, const Document& doc) {
    std::int64_t n = 0;
    for (const std::string& t : doc.hashtags)
        if (t == tag) ++n;
    return n;
}

template <typename DocIter>
std::int64_t hashtag_occurrences(const std::string& tag, DocIter first, DocIter last) {
    std::int64_t n = 0;
    for (DocIter it = first; it != last; ++it) n += hashtag_occurrences(tag, *it);
    return n;
}

inline std::map<std::string, std::int64_t> hashtag_frequencies(
    const std::vector<Document>& docs) {
    std::map<std::string, std::int64_t> freq;
    for (const Document& doc : docs)
        for (const std::string& tag : doc.hashtags) freq[tag] += 1;
    return freq;
}

// Occurrences of the hashtag inside the matched set divided by its
// occurrences in the slice; undefined (nullopt) when the slice has none.
template <typename DocIter>
std::optional<double> precision(const std::string& tag, const QueryResult& r,
                                DocIter slice_first, DocIter slice_last) {
    const std::int64_t denom = hashtag_occurrences(tag, slice_first, slice_last);
    if (denom == 0) return std::nullopt;
    std::int64_t num = 0;
    for (const Document* doc : r.matched) num += hashtag_occurrences(tag, *doc);
    return static_cast<double>(num) / static_cast<double>(denom);
}

}  // namespace streamqe
