#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <deque>
#include <exception>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "streamqe/bigrams.hpp"
#include "streamqe/config.hpp"
#include "streamqe/embeddings.hpp"
#include "streamqe/emergence.hpp"
#include "streamqe/error.hpp"
#include "streamqe/evaluation.hpp"
#include "streamqe/expansion.hpp"
#include "streamqe/graph.hpp"
#include "streamqe/io.hpp"
#include "streamqe/lda.hpp"
#include "streamqe/rng.hpp"
#include "streamqe/stream.hpp"

namespace streamqe {

inline constexpr const char* kMetricsHeader =
    "window,topic,method,volume,hashtag_count,optimal_k\n";
inline constexpr const char* kPrecisionHeader =
    "window,topic,method,hashtag,precision\n";
inline constexpr std::uint64_t kSeedLda = 1;
inline constexpr std::uint64_t kSeedEval = 2;

struct EvaluatedQuery {
    Query query;
    std::vector<const Document*> matched;  // stream order
    std::int64_t hashtag_count = 0;
    int optimal_k = 0;
    bool degenerate = false;

    std::size_t volume() const { return matched.size(); }
};

struct QueryRun {
    int window_index = 0;
    DecReport dec;
    TopicSet topics;
    std::vector<EvaluatedQuery> queries;  // (topic asc, method order)
};

struct WindowSummary {
    int window = 0;
    std::size_t documents = 0;
    bool triggered = false;
    std::optional<double> max_similarity;  // absent during warm-up / empty windows
};

// Stream split into windows but stored flat so [window, end) slices are
// contiguous ranges.
struct WindowedStream {
    std::vector<Document> docs;
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::int64_t start = 0;

    std::size_t window_count() const { return spans.size(); }

    std::span<const Document> window_span(std::size_t w) const {
        return {docs.data() + spans[w].first, spans[w].second - spans[w].first};
    }

    std::span<const Document> tail_from(std::size_t w) const {
        return {docs.data() + spans[w].first, docs.size() - spans[w].first};
    }
};

inline WindowedStream window_stream(std::vector<Document> docs, const WindowConfig& cfg) {
    WindowedStream ws;
    std::vector<Window> windows = assign_windows(std::move(docs), cfg, &ws.start);
    for (Window& win : windows) {
        const std::size_t begin = ws.docs.size();
        for (Document& d : win.documents) ws.docs.push_back(std::move(d));
        ws.spans.emplace_back(begin, ws.docs.size());
    }
    return ws;
}

namespace detail {

template <typename F>
auto pipeline_stage(int window, const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), "window " + std::to_string(window) + ", stage " + name +
                                  ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Internal, "window " + std::to_string(window) + ", stage " +
                                             std::string(name) + ": " + e.what());
    }
}

}  // namespace detail

inline std::string render_dec_csv(const DecReport& dec) {
    std::string out = "window,token,score,rank\n";
    int rank = 1;
    for (const std::string& word : dec.ranked_words) {
        out += std::to_string(dec.window_index);
        out += ',';
        out += csv_field(word);
        out += ',';
        out += format_double(dec.scores.at(word));
        out += ',';
        out += std::to_string(rank++);
        out += '\n';
    }
    return out;
}

inline std::string render_topics_json(int window, const TopicSet& topics, int top_words) {
    ordered_json j;
    j["window"] = window;
    j["topics"] = ordered_json::array();
    for (std::size_t t = 0; t < topics.topics.size(); ++t) {
        const Topic& topic = topics.topics[t];
        ordered_json tj;
        tj["id"] = static_cast<int>(t);
        tj["top_words"] = topic.top_words(top_words);
        ordered_json probs = ordered_json::object();
        for (const auto& [word, p] : topic.word_probs) probs[word] = p;
        tj["word_probs"] = std::move(probs);
        j["topics"].push_back(std::move(tj));
    }
    return j.dump(2) + "\n";
}

inline std::string render_queries_json(int window, const std::vector<EvaluatedQuery>& queries) {
    ordered_json j;
    j["window"] = window;
    j["queries"] = ordered_json::array();
    for (const EvaluatedQuery& eq : queries) {
        ordered_json qj;
        qj["topic"] = eq.query.topic_id;
        qj["method"] = method_name(eq.query.method);
        qj["min_match"] = eq.query.min_match;
        qj["terms"] = ordered_json::array();
        for (const std::string& term : eq.query.terms) qj["terms"].push_back(term);
        j["queries"].push_back(std::move(qj));
    }
    return j.dump(2) + "\n";
}

inline std::string render_results_csv(int window, const std::vector<EvaluatedQuery>& queries) {
    std::string out = "window,topic,method,doc_id\n";
    for (const EvaluatedQuery& eq : queries) {
        for (const Document* doc : eq.matched) {
            out += std::to_string(window);
            out += ',';
            out += std::to_string(eq.query.topic_id);
            out += ',';
            out += method_name(eq.query.method);
            out += ',';
            out += csv_field(doc->id);
            out += '\n';
        }
    }
    return out;
}

inline std::string render_metrics_rows(const QueryRun& run) {
    std::string out;
    for (const EvaluatedQuery& eq : run.queries) {
        out += std::to_string(run.window_index);
        out += ',';
        out += std::to_string(eq.query.topic_id);
        out += ',';
        out += method_name(eq.query.method);
        out += ',';
        out += std::to_string(eq.volume());
        out += ',';
        out += std::to_string(eq.hashtag_count);
        out += ',';
        out += std::to_string(eq.optimal_k);
        out += '\n';
    }
    return out;
}

// Window-by-window driver shared by the full run, replay, and tests.
// Consumes windows strictly in order; empty windows (or windows whose
// documents carry no tokens) contribute nothing to emergence history and
// never trigger.
class Pipeline {
public:
    Pipeline(WindowedStream stream, const VectorSpace& vs, const BigramDictionary& bigrams,
             RunConfig cfg)
        : stream_(std::move(stream)), vs_(&vs), bigrams_(&bigrams), cfg_(std::move(cfg)) {
        cfg_.sync();
        cfg_.validate();
    }

    struct StepResult {
        WindowSummary summary;
        DecReport dec;
        std::optional<QueryRun> run;
    };

    std::size_t window_count() const { return stream_.window_count(); }
    bool done() const { return next_ >= stream_.window_count(); }
    const RunConfig& config() const { return cfg_; }
    const WindowedStream& stream() const { return stream_; }

    StepResult step() {
        if (done()) throw_internal("pipeline stepped past the last window");
        const int w = static_cast<int>(next_);
        ++next_;
        const std::span<const Document> docs = stream_.window_span(static_cast<std::size_t>(w));

        StepResult result;
        result.summary.window = w;
        result.summary.documents = docs.size();

        const CentralityResult centrality = detail::pipeline_stage(w, "centrality", [&] {
            const CooccurrenceGraph graph = build_cooccurrence_graph(docs.begin(), docs.end());
            return eigenvector_centrality(graph);
        });
        result.dec = detail::pipeline_stage(
            w, "emergence", [&] { return dec_scores(w, centrality.scores, centrality_history_); });

        if (result.dec.ranked_words.empty()) return result;  // stays out of history

        if (!report_history_.empty()) {
            double max_sim = 0.0;
            result.summary.triggered =
                should_trigger(result.dec, report_history_, cfg_.trigger, &max_sim);
            result.summary.max_similarity = max_sim;
        }

        if (result.summary.triggered)
            result.run = evaluate_window(w, result.dec);

        centrality_history_.push_back(centrality.scores);
        while (centrality_history_.size() > static_cast<std::size_t>(cfg_.trigger.previous_windows))
            centrality_history_.pop_front();
        report_history_.push_back(result.dec);
        while (report_history_.size() > static_cast<std::size_t>(cfg_.trigger.previous_windows))
            report_history_.pop_front();
        return result;
    }

private:
    QueryRun evaluate_window(int w, const DecReport& dec) {
        QueryRun run;
        run.window_index = w;
        run.dec = dec;

        LdaConfig lcfg = cfg_.lda;
        lcfg.seed = derive_seed(cfg_.seed, kSeedLda, static_cast<std::uint64_t>(w));
        run.topics = detail::pipeline_stage(w, "lda", [&] {
            return fit_lda(stream_.window_span(static_cast<std::size_t>(w)), lcfg);
        });

        const std::vector<Query> queries = detail::pipeline_stage(w, "expansion", [&] {
            return make_queries(run.topics, dec, *vs_, *bigrams_, cfg_.expansion);
        });

        detail::pipeline_stage(w, "evaluation", [&] {
            run.queries = evaluate_queries(w, queries);
            return 0;
        });
        return run;
    }

    std::vector<EvaluatedQuery> evaluate_queries(int w, const std::vector<Query>& queries) {
        const std::span<const Document> slice = stream_.tail_from(static_cast<std::size_t>(w));
        std::vector<EvaluatedQuery> out(queries.size());
        const std::uint64_t window_seed =
            derive_seed(cfg_.seed, kSeedEval, static_cast<std::uint64_t>(w));

        auto eval_one = [&](std::size_t i) {
            EvaluatedQuery eq;
            eq.query = queries[i];
            QueryResult qr = run_query(queries[i], slice.begin(), slice.end());
            eq.matched = std::move(qr.matched);
            QueryResult view;
            view.query = eq.query;
            view.matched = eq.matched;
            eq.hashtag_count = relevance(view);
            EvalConfig ecfg = cfg_.eval;
            ecfg.seed = derive_seed(window_seed, static_cast<std::uint64_t>(i));
            const ConcisenessResult cr = conciseness(view, ecfg);
            eq.optimal_k = cr.optimal_k;
            eq.degenerate = cr.degenerate;
            out[i] = std::move(eq);
        };

        const int workers = std::min<int>(cfg_.workers, static_cast<int>(queries.size()));
        if (workers <= 1) {
            for (std::size_t i = 0; i < queries.size(); ++i) eval_one(i);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
            for (int t = 0; t < workers; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        for (std::size_t i = static_cast<std::size_t>(t); i < queries.size();
                             i += static_cast<std::size_t>(workers))
                            eval_one(i);
                    } catch (...) {
                        errors[static_cast<std::size_t>(t)] = std::current_exception();
                    }
                });
            }
            for (std::thread& th : pool) th.join();
            for (const std::exception_ptr& e : errors)
                if (e) std::rethrow_exception(e);
        }
        return out;
    }

    WindowedStream stream_;
    const VectorSpace* vs_;
    const BigramDictionary* bigrams_;
    RunConfig cfg_;
    std::size_t next_ = 0;
    std::deque<std::map<std::string, double>> centrality_history_;
    std::deque<DecReport> report_history_;
};

struct RunInputs {
    std::string stream_path;
    std::string kb_vectors_path;
    std::string kb_bigrams_path;
    std::string out_dir;
    RunConfig config;
};

struct RunOutcome {
    ordered_json manifest;
    std::vector<int> triggered;
    std::size_t windows_total = 0;
    std::size_t documents = 0;
};

// Full batch run: process every window in order, persist artifacts for the
// triggered ones, write metrics, and write the manifest last so a manifest
// on disk implies a complete run.
inline RunOutcome run_pipeline(const RunInputs& inputs) {
    RunConfig cfg = inputs.config;
    cfg.sync();
    cfg.validate();

    LoadStats stats;
    std::vector<Document> docs = load_stream(inputs.stream_path, Stopwords::builtin(), &stats);
    const std::string stream_fp = fingerprint_file(inputs.stream_path);
    const VectorSpace vs = VectorSpace::load(inputs.kb_vectors_path);
    const BigramDictionary bigrams = BigramDictionary::load(inputs.kb_bigrams_path);

    WindowedStream ws = window_stream(std::move(docs), cfg.window);
    const std::int64_t stream_start = ws.start;
    Pipeline pipeline(std::move(ws), vs, bigrams, cfg);

    ensure_dir(inputs.out_dir);
    ensure_dir(inputs.out_dir + "/dec");
    ensure_dir(inputs.out_dir + "/topics");
    ensure_dir(inputs.out_dir + "/queries");
    ensure_dir(inputs.out_dir + "/results");

    std::string metrics = kMetricsHeader;
    std::vector<WindowSummary> summaries;
    std::vector<int> triggered;
    ordered_json window_artifacts = ordered_json::object();

    while (!pipeline.done()) {
        Pipeline::StepResult step = pipeline.step();
        const int w = step.summary.window;
        if (cfg.dump_dec)
            write_file(inputs.out_dir + "/dec/" + std::to_string(w) + ".csv",
                       render_dec_csv(step.dec));
        if (step.run) {
            triggered.push_back(w);
            const QueryRun& run = *step.run;
            const std::string base = std::to_string(w);
            write_file(inputs.out_dir + "/topics/" + base + ".json",
                       render_topics_json(w, run.topics, cfg.lda.top_words));
            write_file(inputs.out_dir + "/queries/" + base + ".json",
                       render_queries_json(w, run.queries));
            write_file(inputs.out_dir + "/results/" + base + ".csv",
                       render_results_csv(w, run.queries));
            metrics += render_metrics_rows(run);
            ordered_json paths;
            paths["dec"] = "dec/" + base + ".csv";
            paths["topics"] = "topics/" + base + ".json";
            paths["queries"] = "queries/" + base + ".json";
            paths["results"] = "results/" + base + ".csv";
            window_artifacts[base] = std::move(paths);
        }
        summaries.push_back(step.summary);
    }

    write_file(inputs.out_dir + "/metrics.csv", metrics);
    write_file(inputs.out_dir + "/precision.csv", kPrecisionHeader);

    ordered_json manifest;
    manifest["schema"] = 1;
    manifest["config"] = pipeline.config().to_json();
    manifest["inputs"] = {{"stream", inputs.stream_path},
                          {"stream_fingerprint", stream_fp},
                          {"kb_vectors", inputs.kb_vectors_path},
                          {"kb_bigrams", inputs.kb_bigrams_path},
                          {"kb_corpus_fingerprint", vs.corpus_fingerprint}};
    manifest["stream"] = {{"lines", stats.lines},
                          {"documents", stats.loaded},
                          {"malformed", stats.malformed},
                          {"non_english", stats.non_english},
                          {"start", stream_start},
                          {"window_minutes", cfg.window.window_minutes}};
    manifest["windows"] = {{"total", pipeline.window_count()}, {"triggered", triggered.size()}};
    manifest["triggered_windows"] = triggered;
    ordered_json summary_rows = ordered_json::array();
    for (const WindowSummary& s : summaries) {
        ordered_json row;
        row["window"] = s.window;
        row["documents"] = s.documents;
        row["triggered"] = s.triggered;
        if (s.max_similarity)
            row["max_similarity"] = *s.max_similarity;
        else
            row["max_similarity"] = nullptr;
        summary_rows.push_back(std::move(row));
    }
    manifest["window_summaries"] = std::move(summary_rows);
    manifest["artifacts"] = {{"metrics", "metrics.csv"},
                             {"precision", "precision.csv"},
                             {"windows", std::move(window_artifacts)}};
    write_file(inputs.out_dir + "/manifest.json", manifest.dump(2) + "\n");

    RunOutcome outcome;
    outcome.manifest = std::move(manifest);
    outcome.triggered = std::move(triggered);
    outcome.windows_total = pipeline.window_count();
    outcome.documents = stats.loaded;
    return outcome;
}

inline ordered_json load_manifest(const std::string& run_dir) {
    const std::string path = run_dir + "/manifest.json";
    ordered_json j = ordered_json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw_input("invalid manifest: " + path);
    if (!j.is_object() || !j.contains("config") || !j.contains("inputs"))
        throw_input("manifest missing config/inputs: " + path);
    return j;
}

struct ReplayResult {
    QueryRun run;
    std::string dec_csv;
    std::string topics_json;
    std::string queries_json;
    std::string results_csv;
};

// Recompute one triggered window from the recorded inputs. The renders must
// match the persisted artifacts byte for byte; tests hold the pipeline to
// that.
inline ReplayResult replay_window(const std::string& run_dir, int window_index) {
    const ordered_json manifest = load_manifest(run_dir);
    RunConfig cfg = RunConfig::from_json(manifest["config"]);
    const std::string stream_path = manifest["inputs"]["stream"].get<std::string>();
    const VectorSpace vs = VectorSpace::load(manifest["inputs"]["kb_vectors"].get<std::string>());
    const BigramDictionary bigrams =
        BigramDictionary::load(manifest["inputs"]["kb_bigrams"].get<std::string>());

    std::vector<Document> docs = load_stream(stream_path);
    Pipeline pipeline(window_stream(std::move(docs), cfg.window), vs, bigrams, cfg);
    if (window_index < 0 || static_cast<std::size_t>(window_index) >= pipeline.window_count())
        throw_input("window " + std::to_string(window_index) + " does not exist in this run");

    while (!pipeline.done()) {
        Pipeline::StepResult step = pipeline.step();
        if (step.summary.window != window_index) continue;
        if (!step.run)
            throw_input("window " + std::to_string(window_index) + " was not triggered");
        ReplayResult out;
        out.run = std::move(*step.run);
        out.dec_csv = render_dec_csv(out.run.dec);
        out.topics_json = render_topics_json(window_index, out.run.topics, cfg.lda.top_words);
        out.queries_json = render_queries_json(window_index, out.run.queries);
        out.results_csv = render_results_csv(window_index, out.run.queries);
        return out;
    }
    throw_internal("replay walked past window " + std::to_string(window_index));
}

struct PrecisionRequest {
    int from_window = -1;
    std::vector<std::string> hashtags;  // explicit tags; empty in auto mode
    int auto_n = 0;                     // > 0 selects auto mode
    int target_window = -1;             // auto mode: frequency source window
};

inline std::string normalize_hashtag(const std::string& raw) {
    std::string tag = raw;
    if (!tag.empty() && tag[0] == '#') tag.erase(0, 1);
    if (tag.empty()) throw_input("empty hashtag");
    for (char& c : tag) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (!(std::isalnum(u) || c == '_'))
            throw_input("invalid hashtag character in '" + raw + "'");
        c = static_cast<char>(std::tolower(u));
    }
    return "#" + tag;
}

// Post-hoc hashtag precision over a past run: queries come from the
// persisted queries/<window>.json, matching is re-run over the recorded
// stream slice, the denominator counts the hashtag from the triggering
// window to stream end.
inline std::string compute_precision_csv(const std::string& run_dir,
                                         const PrecisionRequest& req) {
    const ordered_json manifest = load_manifest(run_dir);
    RunConfig cfg = RunConfig::from_json(manifest["config"]);

    bool was_triggered = false;
    for (const auto& w : manifest["triggered_windows"])
        if (w.get<int>() == req.from_window) was_triggered = true;
    if (!was_triggered)
        throw_input("window " + std::to_string(req.from_window) + " was not triggered");

    const std::string queries_path =
        run_dir + "/queries/" + std::to_string(req.from_window) + ".json";
    ordered_json qj = ordered_json::parse(read_file(queries_path), nullptr, false);
    if (qj.is_discarded() || !qj.is_object() || !qj.contains("queries"))
        throw_input("invalid queries artifact: " + queries_path);
    std::vector<Query> queries;
    for (const auto& entry : qj["queries"]) {
        Query q;
        q.topic_id = entry.at("topic").get<int>();
        q.method = parse_method(entry.at("method").get<std::string>());
        q.min_match = entry.at("min_match").get<int>();
        for (const auto& term : entry.at("terms")) q.terms.insert(term.get<std::string>());
        queries.push_back(std::move(q));
    }

    const std::string stream_path = manifest["inputs"]["stream"].get<std::string>();
    std::vector<Document> docs = load_stream(stream_path);
    const WindowedStream ws = window_stream(std::move(docs), cfg.window);
    if (req.from_window < 0 || static_cast<std::size_t>(req.from_window) >= ws.window_count())
        throw_input("window " + std::to_string(req.from_window) + " does not exist");
    const std::span<const Document> slice = ws.tail_from(static_cast<std::size_t>(req.from_window));

    std::vector<std::string> tags;
    if (req.auto_n > 0) {
        if (req.target_window <= req.from_window)
            throw_input("--target-window must name a window after --from-window");
        if (static_cast<std::size_t>(req.target_window) >= ws.window_count())
            throw_input("window " + std::to_string(req.target_window) + " does not exist");
        const std::span<const Document> target =
            ws.window_span(static_cast<std::size_t>(req.target_window));
        std::map<std::string, std::int64_t> freq;
        for (const Document& d : target)
            for (const std::string& t : d.hashtags) freq[t] += 1;
        if (freq.empty())
            throw_input("window " + std::to_string(req.target_window) + " has no hashtags");
        std::vector<std::pair<std::string, std::int64_t>> ranked(freq.begin(), freq.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        const std::size_t n = static_cast<std::size_t>(req.auto_n);
        for (std::size_t i = 0; i < ranked.size() && i < n; ++i)
            tags.push_back(ranked[i].first);
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second < b.second;
            return a.first < b.first;
        });
        for (std::size_t i = 0; i < ranked.size() && tags.size() < 2 * n; ++i) {
            if (std::find(tags.begin(), tags.end(), ranked[i].first) == tags.end())
                tags.push_back(ranked[i].first);
        }
    } else {
        for (const std::string& raw : req.hashtags) tags.push_back(normalize_hashtag(raw));
        if (tags.empty()) throw_input("no hashtags requested");
    }

    std::string out = kPrecisionHeader;
    for (const Query& q : queries) {
        QueryResult result = run_query(q, slice.begin(), slice.end());
        for (const std::string& tag : tags) {
            const std::optional<double> p = precision(tag, result, slice.begin(), slice.end());
            out += std::to_string(req.from_window);
            out += ',';
            out += std::to_string(q.topic_id);
            out += ',';
            out += method_name(q.method);
            out += ',';
            out += csv_field(tag);
            out += ',';
            out += p ? format_double(*p) : "NA";
            out += '\n';
        }
    }
    return out;
}

}  // namespace streamqe
