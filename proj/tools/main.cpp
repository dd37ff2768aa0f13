#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "streamqe/streamqe.hpp"

namespace {

using streamqe::RunConfig;

struct BuildKbArgs {
    std::string corpus;
    std::string out;
    int dim = -1;
    int context_window = -1;
    int negative_samples = -1;
    int epochs = -1;
    int min_count = -1;
    int min_ngram = -1;
    int max_ngram = -1;
    double learning_rate = -1.0;
    std::int64_t seed = -1;
};

struct RunArgs {
    std::string stream;
    std::string kb;
    std::string config_path;
    std::string out;
    std::int64_t seed = -1;
    int workers = -1;
    int window_minutes = -1;
    int topics = -1;
    int iterations = -1;
    int min_match = -1;
    int trigger_top_words = -1;
    double trigger_threshold = -1.0;
    bool no_dec = false;
};

struct PrecisionArgs {
    std::string run_dir;
    int from_window = -1;
    std::string hashtags;
    int target_window = -1;
};

struct ReportArgs {
    std::string run_dir;
    std::string out;
};

int cmd_build_kb(const BuildKbArgs& a) {
    streamqe::KbConfig cfg;
    if (a.dim >= 0) cfg.dim = a.dim;
    if (a.context_window >= 0) cfg.context_window = a.context_window;
    if (a.negative_samples >= 0) cfg.negative_samples = a.negative_samples;
    if (a.epochs >= 0) cfg.epochs = a.epochs;
    if (a.min_count >= 0) cfg.min_count = a.min_count;
    if (a.min_ngram >= 0) cfg.min_ngram = a.min_ngram;
    if (a.max_ngram >= 0) cfg.max_ngram = a.max_ngram;
    if (a.learning_rate >= 0) cfg.learning_rate = a.learning_rate;
    if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);

    const streamqe::KbBuildResult result = streamqe::build_kb(a.corpus, a.out, cfg);
    std::cout << "vocabulary: " << result.vocabulary_size << "\n";
    std::cout << "fingerprint: " << result.corpus_fingerprint << "\n";
    std::cout << "vectors: " << result.vectors_path << "\n";
    std::cout << "bigrams: " << result.bigrams_path << "\n";
    return 0;
}

int cmd_run(const RunArgs& a) {
    RunConfig cfg;
    if (!a.config_path.empty()) cfg = RunConfig::from_file(a.config_path);
    if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
    if (a.workers >= 0) cfg.workers = a.workers;
    if (a.window_minutes >= 0) cfg.window.window_minutes = a.window_minutes;
    if (a.topics >= 0) cfg.lda.topic_count = a.topics;
    if (a.iterations >= 0) cfg.lda.iterations = a.iterations;
    if (a.min_match >= 0) cfg.expansion.min_match = a.min_match;
    if (a.trigger_top_words >= 0) cfg.trigger.top_words = a.trigger_top_words;
    if (a.trigger_threshold >= 0) cfg.trigger.threshold = a.trigger_threshold;
    if (a.no_dec) cfg.dump_dec = false;
    cfg.sync();
    cfg.validate();

    // Resolved settings, defaults included, echoed for auditability.
    std::cout << "config: " << cfg.to_json().dump() << "\n";

    streamqe::RunInputs inputs;
    inputs.stream_path = a.stream;
    inputs.kb_vectors_path = a.kb + "/" + streamqe::kVectorsFile;
    inputs.kb_bigrams_path = a.kb + "/" + streamqe::kBigramsFile;
    inputs.out_dir = a.out;
    inputs.config = cfg;

    const streamqe::RunOutcome outcome = streamqe::run_pipeline(inputs);
    std::cout << "documents: " << outcome.documents << "\n";
    std::cout << "windows: " << outcome.windows_total << " triggered: " << outcome.triggered.size()
              << "\n";
    std::cout << "manifest: " << a.out << "/manifest.json\n";
    return 0;
}

int cmd_precision(const PrecisionArgs& a) {
    streamqe::PrecisionRequest req;
    req.from_window = a.from_window;
    req.target_window = a.target_window;
    if (a.hashtags.rfind("auto:", 0) == 0) {
        const std::string n = a.hashtags.substr(5);
        try {
            req.auto_n = std::stoi(n);
        } catch (const std::exception&) {
            streamqe::throw_input("bad --hashtags auto count '" + n + "'");
        }
        if (req.auto_n < 1) streamqe::throw_input("--hashtags auto:N needs N >= 1");
        if (req.target_window < 0)
            streamqe::throw_input("--hashtags auto:N requires --target-window");
    } else {
        std::istringstream in(a.hashtags);
        std::string tag;
        while (std::getline(in, tag, ','))
            if (!tag.empty()) req.hashtags.push_back(tag);
        if (req.hashtags.empty()) streamqe::throw_input("no hashtags given");
    }

    const std::string csv = streamqe::compute_precision_csv(a.run_dir, req);
    const std::string path = a.run_dir + "/precision.csv";
    streamqe::write_file(path, csv);
    std::size_t rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    std::cout << "precision: " << path << " (" << (rows - 1) << " rows)\n";
    return 0;
}

int cmd_report(const ReportArgs& a) {
    const streamqe::ReportOutcome outcome = streamqe::write_report(a.run_dir, a.out);
    std::cout << "charts: " << outcome.svg_paths.size() << "\n";
    std::cout << "summary: " << outcome.summary_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proactive query expansion over streaming text"};
    app.require_subcommand(1);

    BuildKbArgs kb_args;
    CLI::App* kb = app.add_subcommand("build-kb", "Train the knowledge base from a corpus");
    kb->add_option("--corpus", kb_args.corpus, "Corpus JSONL path")->required();
    kb->add_option("--out", kb_args.out, "Output directory")->required();
    kb->add_option("--dim", kb_args.dim, "Embedding dimension");
    kb->add_option("--window", kb_args.context_window, "Context window size");
    kb->add_option("--negative", kb_args.negative_samples, "Negative samples per positive");
    kb->add_option("--epochs", kb_args.epochs, "Training epochs");
    kb->add_option("--min-count", kb_args.min_count, "Minimum token frequency");
    kb->add_option("--min-ngram", kb_args.min_ngram, "Minimum subword n-gram length");
    kb->add_option("--max-ngram", kb_args.max_ngram, "Maximum subword n-gram length");
    kb->add_option("--learning-rate", kb_args.learning_rate, "Initial learning rate");
    kb->add_option("--seed", kb_args.seed, "Training seed");

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Run the pipeline over a recorded stream");
    run->add_option("--stream", run_args.stream, "Stream JSONL path")->required();
    run->add_option("--kb", run_args.kb, "Knowledge base directory")->required();
    run->add_option("--config", run_args.config_path, "JSON config file");
    run->add_option("--out", run_args.out, "Output directory")->required();
    run->add_option("--seed", run_args.seed, "Run seed");
    run->add_option("--workers", run_args.workers, "Evaluation worker threads");
    run->add_option("--window-minutes", run_args.window_minutes, "Window length in minutes");
    run->add_option("--topics", run_args.topics, "Topic count");
    run->add_option("--iterations", run_args.iterations, "Gibbs sweeps");
    run->add_option("--min-match", run_args.min_match, "Distinct terms needed to match");
    run->add_option("--trigger-top-words", run_args.trigger_top_words,
                    "Words compared between windows");
    run->add_option("--trigger-threshold", run_args.trigger_threshold,
                    "Jaccard trigger threshold");
    run->add_flag("--no-dec", run_args.no_dec, "Skip per-window emergence CSV dumps");

    PrecisionArgs prec_args;
    CLI::App* prec = app.add_subcommand("precision", "Hashtag precision for a past run");
    prec->add_option("--run", prec_args.run_dir, "Run directory")->required();
    prec->add_option("--from-window", prec_args.from_window, "Triggered window index")->required();
    prec->add_option("--hashtags", prec_args.hashtags, "Comma list of hashtags, or auto:N")
        ->required();
    prec->add_option("--target-window", prec_args.target_window,
                     "Window supplying auto-selected hashtags");

    ReportArgs report_args;
    CLI::App* rep = app.add_subcommand("report", "Render metric charts for a past run");
    rep->add_option("--run", report_args.run_dir, "Run directory")->required();
    rep->add_option("--out", report_args.out, "Chart output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (kb->parsed()) return cmd_build_kb(kb_args);
        if (run->parsed()) return cmd_run(run_args);
        if (prec->parsed()) return cmd_precision(prec_args);
        if (rep->parsed()) return cmd_report(report_args);
    } catch (const streamqe::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == streamqe::ErrorKind::Input ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
