#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "streamqe/graph.hpp"

namespace streamqe {

struct TriggerConfig {
    int top_words = 200;        // d: words compared between windows
    int previous_windows = 3;   // P: history depth
    double threshold = 0.15;    // th: Jaccard trigger level
};

// Per-window emergence ranking: current centrality minus the trailing-mean
// baseline, clamped at zero.
struct DecReport {
    int window_index = 0;
    std::vector<std::string> ranked_words;  // descending score, lexicographic ties
    std::map<std::string, double> scores;

    std::set<std::string> top(int d) const {
        std::set<std::string> out;
        const std::size_t limit = std::min(ranked_words.size(),
                                           static_cast<std::size_t>(std::max(d, 0)));
        out.insert(ranked_words.begin(), ranked_words.begin() + static_cast<long>(limit));
        return out;
    }
};

// DEC(word) = centrality_now(word) - mean over history of centrality(word),
// with absent words scoring 0 in a history entry and negatives clamped to 0.
// The report covers the words of the current window.
inline DecReport dec_scores(int window_index,
                            const std::map<std::string, double>& current,
                            const std::deque<std::map<std::string, double>>& history) {
    DecReport report;
    report.window_index = window_index;
    const double h = static_cast<double>(history.size());
    for (const auto& [word, now] : current) {
        double baseline = 0.0;
        if (h > 0) {
            double sum = 0.0;
            for (const auto& past : history) {
                auto it = past.find(word);
                if (it != past.end()) sum += it->second;
            }
            baseline = sum / h;
        }
        report.scores[word] = std::max(0.0, now - baseline);
    }
    report.ranked_words.reserve(report.scores.size());
    for (const auto& [word, _] : report.scores) report.ranked_words.push_back(word);
    std::sort(report.ranked_words.begin(), report.ranked_words.end(),
              [&](const std::string& a, const std::string& b) {
                  double sa = report.scores.at(a), sb = report.scores.at(b);
                  if (sa != sb) return sa > sb;
                  return a < b;
              });
    return report;
}

// |a∩b| / |a∪b|, with jaccard(∅,∅) = 1.
inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const std::string& x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// Fires when the current top-d word set is dissimilar from each of the
// previous windows: max Jaccard against the (up to) P most recent previous
// reports must fall to <= threshold. With no previous report (warm-up)
// nothing fires.
inline bool should_trigger(const DecReport& current,
                           const std::deque<DecReport>& previous,
                           const TriggerConfig& cfg,
                           double* max_similarity = nullptr) {
    if (previous.empty()) return false;
    const std::set<std::string> now = current.top(cfg.top_words);
    double worst = 0.0;
    std::size_t used = 0;
    for (auto it = previous.rbegin();
         it != previous.rend() && used < static_cast<std::size_t>(cfg.previous_windows);
         ++it, ++used) {
        worst = std::max(worst, jaccard(now, it->top(cfg.top_words)));
    }
    if (max_similarity) *max_similarity = worst;
    return worst <= cfg.threshold;
}

}  // namespace streamqe
