#pragma once

// Deterministic synthetic corpora for tests: stemmer-stable pseudo words,
// windowed streams with planted vocabulary shifts and bursts, topic-pool
// corpora, hashtag communities, and archival corpora for knowledge bases.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "streamqe/porter.hpp"
#include "streamqe/rng.hpp"
#include "streamqe/stream.hpp"
#include "streamqe/text.hpp"

namespace fixtures {

inline constexpr std::int64_t kStreamStart = 1614556800;  // 2021-03-01T00:00:00Z

// Lowercase pseudo words that the stemmer maps to themselves and the
// stopword list does not touch, so token-level expectations survive
// preprocessing unchanged.
inline std::vector<std::string> pseudo_vocab(std::size_t n, streamqe::Rng& rng) {
    static const std::string consonants = "bdfgkmnprtvz";
    static const std::string vowels = "aiou";
    const streamqe::Stopwords& stop = streamqe::Stopwords::builtin();
    std::vector<std::string> words;
    std::set<std::string> seen;
    while (words.size() < n) {
        std::string w;
        const int syllables = 2 + static_cast<int>(rng.next_index(2));
        for (int s = 0; s < syllables; ++s) {
            w.push_back(consonants[rng.next_index(consonants.size())]);
            w.push_back(vowels[rng.next_index(vowels.size())]);
        }
        w.push_back(consonants[rng.next_index(consonants.size())]);
        if (seen.count(w)) continue;
        if (stop.contains(w)) continue;
        if (streamqe::porter_stem(w) != w) continue;
        seen.insert(w);
        words.push_back(w);
    }
    return words;
}

inline std::string jsonl_doc(const std::string& id, std::int64_t timestamp,
                             const std::string& text) {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["timestamp"] = timestamp;
    j["text"] = text;
    return j.dump();
}

// One window's recipe inside a planted stream.
struct WindowPlan {
    int pool = 0;          // 0 = base vocabulary, 1 = alternate vocabulary
    std::string burst;     // when set, injected into burst_fraction of docs
    bool mixed_tags = false;  // draw hashtags from both tag pools
};

struct StreamPlan {
    std::vector<WindowPlan> windows;
    int docs_per_window = 40;
    int window_minutes = 15;
    std::int64_t start = kStreamStart;
    std::uint64_t seed = 7;
    int tokens_min = 6;
    int tokens_max = 10;
    double burst_fraction = 0.35;
};

// Weighted pick with rank-decaying weights, so tag frequencies spread out
// and "highest/lowest frequency hashtag" selections are unambiguous.
inline const std::string& ranked_pick(const std::vector<std::string>& pool,
                                      streamqe::Rng& rng) {
    double total = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) total += 1.0 / static_cast<double>(i + 1);
    double u = rng.next_double() * total;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        u -= 1.0 / static_cast<double>(i + 1);
        if (u <= 0) return pool[i];
    }
    return pool.back();
}

inline std::string synthetic_stream(const StreamPlan& plan,
                                    const std::vector<std::string>& pool0,
                                    const std::vector<std::string>& pool1,
                                    const std::vector<std::string>& tags0,
                                    const std::vector<std::string>& tags1) {
    streamqe::Rng rng(plan.seed);
    std::string out;
    int doc_id = 0;
    const std::int64_t width = static_cast<std::int64_t>(plan.window_minutes) * 60;
    for (std::size_t w = 0; w < plan.windows.size(); ++w) {
        const WindowPlan& wp = plan.windows[w];
        const std::vector<std::string>& pool = wp.pool == 0 ? pool0 : pool1;
        const int burst_docs =
            wp.burst.empty()
                ? 0
                : static_cast<int>(plan.burst_fraction * plan.docs_per_window) + 1;
        for (int d = 0; d < plan.docs_per_window; ++d) {
            const int count =
                plan.tokens_min + static_cast<int>(rng.next_index(static_cast<std::size_t>(
                                      plan.tokens_max - plan.tokens_min + 1)));
            std::string text;
            for (int t = 0; t < count; ++t) {
                if (t) text += ' ';
                text += pool[rng.next_index(pool.size())];
            }
            if (d < burst_docs) text += ' ' + wp.burst;
            const int tag_count = 1 + static_cast<int>(rng.next_index(2));
            for (int t = 0; t < tag_count; ++t) {
                const std::vector<std::string>* tag_pool = &tags0;
                if (wp.pool == 1)
                    tag_pool = &tags1;
                else if (wp.mixed_tags && rng.next_double() < 0.35)
                    tag_pool = &tags1;
                text += " #" + ranked_pick(*tag_pool, rng);
            }
            const std::int64_t ts = plan.start + static_cast<std::int64_t>(w) * width +
                                    static_cast<std::int64_t>(rng.next_index(
                                        static_cast<std::size_t>(width)));
            out += jsonl_doc("d" + std::to_string(doc_id++), ts, text);
            out += '\n';
        }
    }
    return out;
}

// Documents straight from token lists, bypassing JSONL.
inline streamqe::Document make_doc(std::string id, std::int64_t ts,
                                   std::vector<std::string> tokens,
                                   std::vector<std::string> hashtags = {}) {
    streamqe::Document d;
    d.id = std::move(id);
    d.timestamp = ts;
    d.tokens = std::move(tokens);
    d.hashtags = std::move(hashtags);
    return d;
}

// Two disjoint topic vocabularies, one per document.
inline std::vector<streamqe::Document> two_topic_docs(int count,
                                                      const std::vector<std::string>& pool_a,
                                                      const std::vector<std::string>& pool_b,
                                                      std::uint64_t seed) {
    streamqe::Rng rng(seed);
    std::vector<streamqe::Document> docs;
    for (int i = 0; i < count; ++i) {
        const std::vector<std::string>& pool = (rng.next_double() < 0.5) ? pool_a : pool_b;
        const int len = 8 + static_cast<int>(rng.next_index(5));
        std::vector<std::string> tokens;
        for (int t = 0; t < len; ++t) tokens.push_back(pool[rng.next_index(pool.size())]);
        docs.push_back(make_doc("t" + std::to_string(i), kStreamStart + i, std::move(tokens)));
    }
    return docs;
}

// Hashtag communities: each document carries tags from exactly one
// community's exclusive tag set.
inline std::vector<streamqe::Document> community_docs(int communities, int docs_each,
                                                      int tags_per_community,
                                                      std::uint64_t seed) {
    streamqe::Rng rng(seed);
    std::vector<std::string> tag_words = pseudo_vocab(
        static_cast<std::size_t>(communities * tags_per_community), rng);
    std::vector<streamqe::Document> docs;
    int id = 0;
    for (int c = 0; c < communities; ++c) {
        std::vector<std::string> community_tags(
            tag_words.begin() + c * tags_per_community,
            tag_words.begin() + (c + 1) * tags_per_community);
        for (int d = 0; d < docs_each; ++d) {
            std::vector<std::string> tags;
            const int n = 2 + static_cast<int>(rng.next_index(
                                  static_cast<std::size_t>(tags_per_community - 1)));
            std::set<std::size_t> used;
            while (static_cast<int>(tags.size()) < n) {
                const std::size_t pick = rng.next_index(community_tags.size());
                if (used.insert(pick).second) tags.push_back("#" + community_tags[pick]);
            }
            docs.push_back(make_doc("c" + std::to_string(id), kStreamStart + id, {},
                                    std::move(tags)));
            ++id;
        }
    }
    return docs;
}

// Archival corpus whose sentences tie each "event" word to its designated
// partner (adjacent, for co-occurrence mining) and place synonym pairs in
// interchangeable contexts (for the vector space).
inline std::string external_corpus(const std::vector<std::string>& vocabulary,
                                   const std::vector<std::pair<std::string, std::string>>& partners,
                                   int docs, std::uint64_t seed) {
    streamqe::Rng rng(seed);
    std::string out;
    for (int i = 0; i < docs; ++i) {
        const int len = 8 + static_cast<int>(rng.next_index(5));
        std::string text;
        for (int t = 0; t < len; ++t) {
            if (t) text += ' ';
            text += vocabulary[rng.next_index(vocabulary.size())];
        }
        if (!partners.empty() && rng.next_double() < 0.8) {
            const auto& pair = partners[rng.next_index(partners.size())];
            text += ' ' + pair.first + ' ' + pair.second;
        }
        out += jsonl_doc("a" + std::to_string(i), kStreamStart + i, text);
        out += '\n';
    }
    return out;
}

}  // namespace fixtures
