#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "streamqe/bigrams.hpp"
#include "streamqe/embeddings.hpp"
#include "streamqe/error.hpp"
#include "streamqe/io.hpp"
#include "streamqe/stream.hpp"
#include "streamqe/text.hpp"

namespace streamqe {

inline constexpr const char* kVectorsFile = "vectors.bin";
inline constexpr const char* kBigramsFile = "bigrams.csv";

// Archival corpus loader: same JSONL shape as the stream, but timestamps are
// optional because the knowledge base does not care about time.
inline std::vector<Document> load_corpus(const std::string& path,
                                         const Stopwords& stopwords = Stopwords::builtin(),
                                         LoadStats* stats_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw_input("cannot open corpus file: " + path);
    std::vector<Document> docs;
    LoadStats stats;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++stats.lines;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
            !obj.contains("text") || !obj["text"].is_string()) {
            ++stats.malformed;
            continue;
        }
        Document doc;
        try {
            if (obj["id"].is_string())
                doc.id = obj["id"].get<std::string>();
            else if (obj["id"].is_number_integer())
                doc.id = std::to_string(obj["id"].get<std::int64_t>());
            else {
                ++stats.malformed;
                continue;
            }
            if (obj.contains("timestamp"))
                doc.timestamp = detail::parse_timestamp(obj["timestamp"]);
        } catch (const Error&) {
            ++stats.malformed;
            continue;
        }
        doc.raw = obj["text"].get<std::string>();
        if (!mostly_ascii(doc.raw)) {
            ++stats.non_english;
            continue;
        }
        doc.tokens = preprocess_text(doc.raw, stopwords);
        doc.hashtags = extract_hashtags(doc.raw);
        docs.push_back(std::move(doc));
        ++stats.loaded;
    }
    if (in.bad()) throw_input("I/O error reading corpus file: " + path);
    if (stats.lines >= 20 && stats.malformed * 10 > stats.lines)
        throw_input("more than 10% malformed lines in " + path + " (wrong file?)");
    if (stats_out) *stats_out = stats;
    return docs;
}

struct KbBuildResult {
    std::size_t vocabulary_size = 0;
    std::string corpus_fingerprint;
    std::string vectors_path;
    std::string bigrams_path;
};

// Trains the vector space and counts bigrams from one corpus pass, then
// persists both halves of the knowledge base.
inline KbBuildResult build_kb(const std::string& corpus_path, const std::string& out_dir,
                              const KbConfig& cfg) {
    std::vector<Document> docs = load_corpus(corpus_path);
    if (docs.empty()) throw_input("external corpus too small");

    std::vector<std::vector<std::string>> token_lists;
    token_lists.reserve(docs.size());
    for (const Document& d : docs) token_lists.push_back(d.tokens);

    VectorSpace vs = train_vector_space(token_lists, cfg);
    vs.corpus_fingerprint = fingerprint_file(corpus_path);
    const BigramDictionary bigrams = build_bigrams(docs);

    ensure_dir(out_dir);
    KbBuildResult result;
    result.vocabulary_size = vs.vectors.size();
    result.corpus_fingerprint = vs.corpus_fingerprint;
    result.vectors_path = out_dir + "/" + kVectorsFile;
    result.bigrams_path = out_dir + "/" + kBigramsFile;
    vs.save(result.vectors_path);
    bigrams.save(result.bigrams_path);
    return result;
}

}  // namespace streamqe
