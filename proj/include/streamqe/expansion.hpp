#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "streamqe/bigrams.hpp"
#include "streamqe/embeddings.hpp"
#include "streamqe/emergence.hpp"
#include "streamqe/error.hpp"
#include "streamqe/lda.hpp"
#include "streamqe/stream.hpp"

namespace streamqe {

enum class Method { Static, Emergent, ProactiveVs, ProactiveCo };

inline constexpr std::array<Method, 4> kAllMethods = {
    Method::Static, Method::Emergent, Method::ProactiveVs, Method::ProactiveCo};

inline const char* method_name(Method m) {
    switch (m) {
        case Method::Static: return "static";
        case Method::Emergent: return "emergent";
        case Method::ProactiveVs: return "proactive_vs";
        case Method::ProactiveCo: return "proactive_co";
    }
    return "static";
}

inline Method parse_method(const std::string& name) {
    for (Method m : kAllMethods)
        if (name == method_name(m)) return m;
    throw_input("unknown method '" + name + "'");
}

struct ExpansionConfig {
    int top_words = 20;       // k, per topic
    int dec_words = 200;      // d, emergent additions per topic
    int neighbors = 5;        // i, per term
    int cooccurrences = 5;    // j, per term
    int min_match = 2;        // l
};

struct Query {
    int topic_id = 0;
    Method method = Method::Static;
    std::set<std::string> terms;
    int min_match = 2;
};

struct QueryResult {
    Query query;
    std::vector<const Document*> matched;  // stream order, non-owning
};

// First `d` ranked emergence words that are not already topic terms.
inline std::vector<std::string> dec_dedup(const std::set<std::string>& topic_terms,
                                          const DecReport& dec, int d) {
    std::vector<std::string> out;
    for (const std::string& word : dec.ranked_words) {
        if (static_cast<int>(out.size()) >= d) break;
        if (topic_terms.count(word)) continue;
        out.push_back(word);
    }
    return out;
}

inline Query expand_static(const Topic& topic, int topic_id, const ExpansionConfig& cfg) {
    Query q;
    q.topic_id = topic_id;
    q.method = Method::Static;
    q.min_match = cfg.min_match;
    for (const std::string& w : topic.top_words(cfg.top_words)) q.terms.insert(w);
    return q;
}

inline Query expand_emergent(const Topic& topic, int topic_id, const DecReport& dec,
                             const ExpansionConfig& cfg) {
    Query q = expand_static(topic, topic_id, cfg);
    q.method = Method::Emergent;
    for (const std::string& w : dec_dedup(q.terms, dec, cfg.dec_words)) q.terms.insert(w);
    return q;
}

// Both proactive methods fetch related terms for every word of the emergent
// query and keep the ones not already present. Fetched terms never seed
// further fetches, so the result is independent of iteration order.
inline Query expand_proactive_vs(const Topic& topic, int topic_id, const DecReport& dec,
                                 const VectorSpace& vs, const ExpansionConfig& cfg) {
    Query q = expand_emergent(topic, topic_id, dec, cfg);
    q.method = Method::ProactiveVs;
    const std::set<std::string> base = q.terms;
    for (const std::string& term : base)
        for (const std::string& n : vs.nearest_neighbors(term, cfg.neighbors))
            if (!base.count(n)) q.terms.insert(n);
    return q;
}

inline Query expand_proactive_co(const Topic& topic, int topic_id, const DecReport& dec,
                                 const BigramDictionary& bigrams,
                                 const ExpansionConfig& cfg) {
    Query q = expand_emergent(topic, topic_id, dec, cfg);
    q.method = Method::ProactiveCo;
    const std::set<std::string> base = q.terms;
    for (const std::string& term : base)
        for (const std::string& c : bigrams.top_cooccurring(term, cfg.cooccurrences))
            if (!base.count(c)) q.terms.insert(c);
    return q;
}

// All four queries for every topic, in (topic, method) order.
inline std::vector<Query> make_queries(const TopicSet& topics, const DecReport& dec,
                                       const VectorSpace& vs,
                                       const BigramDictionary& bigrams,
                                       const ExpansionConfig& cfg) {
    std::vector<Query> out;
    for (int t = 0; t < static_cast<int>(topics.topics.size()); ++t) {
        const Topic& topic = topics.topics[static_cast<std::size_t>(t)];
        out.push_back(expand_static(topic, t, cfg));
        out.push_back(expand_emergent(topic, t, dec, cfg));
        out.push_back(expand_proactive_vs(topic, t, dec, vs, cfg));
        out.push_back(expand_proactive_co(topic, t, dec, bigrams, cfg));
    }
    return out;
}

// A document matches when it contains at least min_match distinct query terms.
inline bool matches(const Query& query, const Document& doc) {
    std::set<std::string> seen;
    for (const std::string& tok : doc.tokens) {
        if (!query.terms.count(tok)) continue;
        seen.insert(tok);
        if (static_cast<int>(seen.size()) >= query.min_match) return true;
    }
    return false;
}

template <typename DocIter>
QueryResult run_query(const Query& query, DocIter first, DocIter last) {
    QueryResult result;
    result.query = query;
    for (DocIter it = first; it != last; ++it)
        if (matches(query, *it)) result.matched.push_back(&*it);
    return result;
}

}  // namespace streamqe
