#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "streamqe/embeddings.hpp"
#include "streamqe/emergence.hpp"
#include "streamqe/error.hpp"
#include "streamqe/evaluation.hpp"
#include "streamqe/expansion.hpp"
#include "streamqe/io.hpp"
#include "streamqe/lda.hpp"
#include "streamqe/stream.hpp"

namespace streamqe {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline void reject_unknown(const ordered_json& obj, const std::string& where,
                           std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw_input("config: " + where + " must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known) throw_input("config: unknown key '" + key + "' in " + where);
    }
}

inline int get_int(const ordered_json& obj, const char* key, int fallback,
                   const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer() && !it->is_number_unsigned())
        throw_input("config: " + where + "." + key + " must be an integer");
    return it->get<int>();
}

inline double get_double(const ordered_json& obj, const char* key, double fallback,
                         const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number())
        throw_input("config: " + where + "." + key + " must be a number");
    return it->get<double>();
}

inline bool get_bool(const ordered_json& obj, const char* key, bool fallback,
                     const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_boolean())
        throw_input("config: " + where + "." + key + " must be a boolean");
    return it->get<bool>();
}

inline std::uint64_t get_u64(const ordered_json& obj, const char* key,
                             std::uint64_t fallback, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer() && !it->is_number_unsigned())
        throw_input("config: " + where + "." + key + " must be an integer");
    if (it->is_number_integer() && it->get<std::int64_t>() < 0)
        throw_input("config: " + where + "." + key + " must be >= 0");
    return it->get<std::uint64_t>();
}

}  // namespace detail

struct RunConfig {
    std::uint64_t seed = 42;
    WindowConfig window;
    TriggerConfig trigger;
    LdaConfig lda;
    KbConfig kb;
    ExpansionConfig expansion;
    EvalConfig eval;
    bool dump_dec = true;
    int workers = 1;

    // The expansion stage reuses the topic-word count and the emergence
    // word budget; keep them aligned after any field change.
    void sync() {
        expansion.top_words = lda.top_words;
        expansion.dec_words = trigger.top_words;
    }

    void validate() const {
        if (window.window_minutes < 1) throw_input("config: window.minutes must be >= 1");
        if (trigger.top_words < 1) throw_input("config: trigger.top_words must be >= 1");
        if (trigger.previous_windows < 1)
            throw_input("config: trigger.previous_windows must be >= 1");
        if (trigger.threshold < 0.0 || trigger.threshold > 1.0)
            throw_input("config: trigger.threshold must be in [0,1]");
        if (lda.topic_count < 1) throw_input("config: lda.topics must be >= 1");
        if (lda.top_words < 1) throw_input("config: lda.top_words must be >= 1");
        if (lda.beta <= 0.0) throw_input("config: lda.beta must be > 0");
        if (lda.iterations < 1) throw_input("config: lda.iterations must be >= 1");
        if (kb.dim < 1) throw_input("config: kb.dim must be >= 1");
        if (kb.context_window < 1) throw_input("config: kb.context_window must be >= 1");
        if (kb.negative_samples < 1) throw_input("config: kb.negative_samples must be >= 1");
        if (kb.epochs < 1) throw_input("config: kb.epochs must be >= 1");
        if (kb.min_count < 1) throw_input("config: kb.min_count must be >= 1");
        if (kb.min_ngram < 1 || kb.max_ngram < kb.min_ngram)
            throw_input("config: kb n-gram bounds must satisfy 1 <= min <= max");
        if (kb.learning_rate <= 0.0) throw_input("config: kb.learning_rate must be > 0");
        if (expansion.min_match < 1) throw_input("config: expansion.min_match must be >= 1");
        if (expansion.neighbors < 0) throw_input("config: expansion.neighbors must be >= 0");
        if (expansion.cooccurrences < 0)
            throw_input("config: expansion.cooccurrences must be >= 0");
        if (eval.k_min < 1 || eval.k_max - eval.k_min < 2)
            throw_input("config: evaluation needs k_min >= 1 and k_max >= k_min + 2");
        if (eval.max_hashtag_features < 2)
            throw_input("config: evaluation.hashtag_features must be >= 2");
        if (workers < 1) throw_input("config: workers must be >= 1");
    }

    ordered_json to_json() const {
        ordered_json j;
        j["seed"] = seed;
        j["window"] = {{"minutes", window.window_minutes}};
        j["trigger"] = {{"top_words", trigger.top_words},
                        {"previous_windows", trigger.previous_windows},
                        {"threshold", trigger.threshold}};
        j["lda"] = {{"topics", lda.topic_count},
                    {"top_words", lda.top_words},
                    {"alpha", lda.alpha},
                    {"beta", lda.beta},
                    {"iterations", lda.iterations}};
        j["kb"] = {{"dim", kb.dim},
                   {"context_window", kb.context_window},
                   {"negative_samples", kb.negative_samples},
                   {"epochs", kb.epochs},
                   {"min_count", kb.min_count},
                   {"min_ngram", kb.min_ngram},
                   {"max_ngram", kb.max_ngram},
                   {"learning_rate", kb.learning_rate}};
        j["expansion"] = {{"min_match", expansion.min_match},
                          {"neighbors", expansion.neighbors},
                          {"cooccurrences", expansion.cooccurrences}};
        j["evaluation"] = {{"k_min", eval.k_min},
                           {"k_max", eval.k_max},
                           {"hashtag_features", eval.max_hashtag_features}};
        j["dump_dec"] = dump_dec;
        j["workers"] = workers;
        return j;
    }

    static RunConfig from_json(const ordered_json& j) {
        using detail::get_bool;
        using detail::get_double;
        using detail::get_int;
        using detail::get_u64;
        detail::reject_unknown(j, "top level",
                               {"seed", "window", "trigger", "lda", "kb", "expansion",
                                "evaluation", "dump_dec", "workers"});
        RunConfig c;
        c.seed = get_u64(j, "seed", c.seed, "top level");
        if (auto it = j.find("window"); it != j.end()) {
            detail::reject_unknown(*it, "window", {"minutes"});
            c.window.window_minutes = get_int(*it, "minutes", c.window.window_minutes, "window");
        }
        if (auto it = j.find("trigger"); it != j.end()) {
            detail::reject_unknown(*it, "trigger",
                                   {"top_words", "previous_windows", "threshold"});
            c.trigger.top_words = get_int(*it, "top_words", c.trigger.top_words, "trigger");
            c.trigger.previous_windows =
                get_int(*it, "previous_windows", c.trigger.previous_windows, "trigger");
            c.trigger.threshold = get_double(*it, "threshold", c.trigger.threshold, "trigger");
        }
        if (auto it = j.find("lda"); it != j.end()) {
            detail::reject_unknown(*it, "lda",
                                   {"topics", "top_words", "alpha", "beta", "iterations"});
            c.lda.topic_count = get_int(*it, "topics", c.lda.topic_count, "lda");
            c.lda.top_words = get_int(*it, "top_words", c.lda.top_words, "lda");
            c.lda.alpha = get_double(*it, "alpha", c.lda.alpha, "lda");
            c.lda.beta = get_double(*it, "beta", c.lda.beta, "lda");
            c.lda.iterations = get_int(*it, "iterations", c.lda.iterations, "lda");
        }
        if (auto it = j.find("kb"); it != j.end()) {
            detail::reject_unknown(*it, "kb",
                                   {"dim", "context_window", "negative_samples", "epochs",
                                    "min_count", "min_ngram", "max_ngram", "learning_rate"});
            c.kb.dim = get_int(*it, "dim", c.kb.dim, "kb");
            c.kb.context_window = get_int(*it, "context_window", c.kb.context_window, "kb");
            c.kb.negative_samples =
                get_int(*it, "negative_samples", c.kb.negative_samples, "kb");
            c.kb.epochs = get_int(*it, "epochs", c.kb.epochs, "kb");
            c.kb.min_count = get_int(*it, "min_count", c.kb.min_count, "kb");
            c.kb.min_ngram = get_int(*it, "min_ngram", c.kb.min_ngram, "kb");
            c.kb.max_ngram = get_int(*it, "max_ngram", c.kb.max_ngram, "kb");
            c.kb.learning_rate = get_double(*it, "learning_rate", c.kb.learning_rate, "kb");
        }
        if (auto it = j.find("expansion"); it != j.end()) {
            detail::reject_unknown(*it, "expansion",
                                   {"min_match", "neighbors", "cooccurrences"});
            c.expansion.min_match = get_int(*it, "min_match", c.expansion.min_match, "expansion");
            c.expansion.neighbors = get_int(*it, "neighbors", c.expansion.neighbors, "expansion");
            c.expansion.cooccurrences =
                get_int(*it, "cooccurrences", c.expansion.cooccurrences, "expansion");
        }
        if (auto it = j.find("evaluation"); it != j.end()) {
            detail::reject_unknown(*it, "evaluation", {"k_min", "k_max", "hashtag_features"});
            c.eval.k_min = get_int(*it, "k_min", c.eval.k_min, "evaluation");
            c.eval.k_max = get_int(*it, "k_max", c.eval.k_max, "evaluation");
            c.eval.max_hashtag_features =
                get_int(*it, "hashtag_features", c.eval.max_hashtag_features, "evaluation");
        }
        c.dump_dec = get_bool(j, "dump_dec", c.dump_dec, "top level");
        c.workers = get_int(j, "workers", c.workers, "top level");
        c.sync();
        c.validate();
        return c;
    }

    static RunConfig from_file(const std::string& path) {
        const std::string text = read_file(path);
        ordered_json j = ordered_json::parse(text, nullptr, false);
        if (j.is_discarded()) throw_input("config: invalid JSON in " + path);
        return from_json(j);
    }
};

}  // namespace streamqe
