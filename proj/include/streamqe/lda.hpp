#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "streamqe/error.hpp"
#include "streamqe/rng.hpp"
#include "streamqe/stream.hpp"

namespace streamqe {

struct LdaConfig {
    int topic_count = 5;     // m
    int top_words = 20;      // k
    double alpha = 0.0;      // <= 0 selects the 50/m default
    double beta = 0.01;
    int iterations = 1000;   // Gibbs sweeps
    std::uint64_t seed = 0;

    double resolved_alpha() const {
        return alpha > 0 ? alpha : 50.0 / static_cast<double>(topic_count);
    }
};

struct Topic {
    std::map<std::string, double> word_probs;

    // k highest-probability tokens, lexicographic ties, fewer if the
    // vocabulary is smaller.
    std::vector<std::string> top_words(int k) const {
        std::vector<const std::pair<const std::string, double>*> entries;
        entries.reserve(word_probs.size());
        for (const auto& e : word_probs) entries.push_back(&e);
        std::sort(entries.begin(), entries.end(), [](const auto* a, const auto* b) {
            if (a->second != b->second) return a->second > b->second;
            return a->first < b->first;
        });
        const std::size_t limit = std::min(entries.size(),
                                           static_cast<std::size_t>(std::max(k, 0)));
        std::vector<std::string> out;
        out.reserve(limit);
        for (std::size_t i = 0; i < limit; ++i) out.push_back(entries[i]->first);
        return out;
    }
};

struct TopicSet {
    std::vector<Topic> topics;
    std::set<std::string> vocabulary;
};

// Collapsed Gibbs sampler over a fixed corpus snapshot. Exposed as a class
// so tests can step sweeps and check count bookkeeping; fit_lda is the
// one-shot entry point.
class GibbsLda {
public:
    GibbsLda(std::span<const Document> docs, const LdaConfig& cfg)
        : cfg_(cfg), rng_(cfg.seed) {
        if (cfg_.topic_count < 1) throw_input("topic_count must be >= 1");
        if (cfg_.iterations < 1) throw_input("lda iterations must be >= 1");
        if (cfg_.beta <= 0) throw_input("lda beta must be > 0");

        std::map<std::string, int> vocab_ids;
        for (const Document& doc : docs) {
            if (doc.tokens.empty()) continue;
            for (const std::string& tok : doc.tokens) vocab_ids.emplace(tok, 0);
        }
        int next_id = 0;
        for (auto& [tok, id] : vocab_ids) {
            id = next_id++;
            vocab_.push_back(tok);
        }
        if (vocab_.empty()) throw_input("no documents in triggered window");
        if (static_cast<int>(vocab_.size()) < cfg_.topic_count)
            throw_input("vocabulary smaller than topic count");

        for (const Document& doc : docs) {
            if (doc.tokens.empty()) continue;
            std::vector<int> ids;
            ids.reserve(doc.tokens.size());
            for (const std::string& tok : doc.tokens) ids.push_back(vocab_ids.at(tok));
            docs_.push_back(std::move(ids));
        }

        const int m = cfg_.topic_count;
        doc_topic_.assign(docs_.size(), std::vector<int>(static_cast<std::size_t>(m), 0));
        word_topic_.assign(vocab_.size(), std::vector<int>(static_cast<std::size_t>(m), 0));
        topic_total_.assign(static_cast<std::size_t>(m), 0);
        assignments_.resize(docs_.size());
        for (std::size_t d = 0; d < docs_.size(); ++d) {
            assignments_[d].resize(docs_[d].size());
            for (std::size_t i = 0; i < docs_[d].size(); ++i) {
                const int k = static_cast<int>(rng_.next_index(static_cast<std::size_t>(m)));
                assignments_[d][i] = k;
                bump(d, docs_[d][i], k, +1);
            }
        }
    }

    void sweep() {
        const int m = cfg_.topic_count;
        const double alpha = cfg_.resolved_alpha();
        const double beta = cfg_.beta;
        const double vbeta = beta * static_cast<double>(vocab_.size());
        std::vector<double> cumulative(static_cast<std::size_t>(m));
        for (std::size_t d = 0; d < docs_.size(); ++d) {
            for (std::size_t i = 0; i < docs_[d].size(); ++i) {
                const int w = docs_[d][i];
                bump(d, w, assignments_[d][i], -1);
                double total = 0.0;
                for (int k = 0; k < m; ++k) {
                    const std::size_t ku = static_cast<std::size_t>(k);
                    const double p =
                        (word_topic_[static_cast<std::size_t>(w)][ku] + beta) /
                        (topic_total_[ku] + vbeta) *
                        (doc_topic_[d][ku] + alpha);
                    total += p;
                    cumulative[ku] = total;
                }
                const double u = rng_.next_double() * total;
                int k = 0;
                while (k + 1 < m && cumulative[static_cast<std::size_t>(k)] <= u) ++k;
                assignments_[d][i] = k;
                bump(d, w, k, +1);
            }
        }
    }

    // Topic-word distributions from the current state, beta-smoothed over
    // the full vocabulary.
    TopicSet estimate() const {
        const double beta = cfg_.beta;
        const double vbeta = beta * static_cast<double>(vocab_.size());
        TopicSet ts;
        ts.vocabulary.insert(vocab_.begin(), vocab_.end());
        for (int k = 0; k < cfg_.topic_count; ++k) {
            const std::size_t ku = static_cast<std::size_t>(k);
            Topic topic;
            for (std::size_t w = 0; w < vocab_.size(); ++w) {
                topic.word_probs[vocab_[w]] =
                    (word_topic_[w][ku] + beta) / (topic_total_[ku] + vbeta);
            }
            ts.topics.push_back(std::move(topic));
        }
        return ts;
    }

    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& d : docs_) n += d.size();
        return n;
    }

    std::int64_t assigned_total() const {
        std::int64_t n = 0;
        for (std::int64_t t : topic_total_) n += t;
        return n;
    }

    std::size_t vocabulary_size() const { return vocab_.size(); }

private:
    void bump(std::size_t d, int w, int k, int delta) {
        const std::size_t ku = static_cast<std::size_t>(k);
        doc_topic_[d][ku] += delta;
        word_topic_[static_cast<std::size_t>(w)][ku] += delta;
        topic_total_[ku] += delta;
    }

    LdaConfig cfg_;
    Rng rng_;
    std::vector<std::string> vocab_;
    std::vector<std::vector<int>> docs_;
    std::vector<std::vector<int>> assignments_;
    std::vector<std::vector<int>> doc_topic_;
    std::vector<std::vector<int>> word_topic_;
    std::vector<std::int64_t> topic_total_;
};

inline TopicSet fit_lda(std::span<const Document> docs, const LdaConfig& cfg) {
    GibbsLda sampler(docs, cfg);
    for (int it = 0; it < cfg.iterations; ++it) sampler.sweep();
    return sampler.estimate();
}

}  // namespace streamqe
