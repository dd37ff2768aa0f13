#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "streamqe/error.hpp"
#include "streamqe/io.hpp"
#include "streamqe/rng.hpp"

namespace streamqe {

struct KbConfig {
    int dim = 100;
    int context_window = 5;
    int negative_samples = 5;
    int epochs = 5;
    int min_count = 5;
    int min_ngram = 3;
    int max_ngram = 6;
    double learning_rate = 0.05;
    std::uint64_t seed = 0;
};

namespace detail {

// Byte n-grams of the boundary-marked form "<word>", lengths in
// [min_ngram, max_ngram]. The word's own vector is stored separately, so the
// full marked form only appears here when its length happens to fit.
inline std::vector<std::string> subword_ngrams(const std::string& word,
                                               int min_ngram, int max_ngram) {
    const std::string marked = "<" + word + ">";
    std::vector<std::string> out;
    const int n = static_cast<int>(marked.size());
    for (int len = min_ngram; len <= max_ngram; ++len) {
        if (len > n) break;
        for (int i = 0; i + len <= n; ++i) out.push_back(marked.substr(i, len));
    }
    return out;
}

inline void write_u32_le(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void write_u64_le(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void write_f32_le(std::string& out, float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    write_u32_le(out, bits);
}

class ByteReader {
public:
    ByteReader(const std::string& data, const std::string& what)
        : data_(data), what_(what) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    float f32() {
        const std::uint32_t bits = u32();
        float f;
        std::memcpy(&f, &bits, 4);
        return f;
    }

    std::string bytes(std::size_t n) {
        need(n);
        std::string s = data_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    bool exhausted() const { return pos_ >= data_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > data_.size()) throw_input(what_ + ": truncated");
    }

    const std::string& data_;
    std::string what_;
    std::size_t pos_ = 0;
};

inline double dot(const std::vector<float>& a, const std::vector<float>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<double>(a[i]) * b[i];
    return s;
}

inline double norm(const std::vector<float>& a) { return std::sqrt(dot(a, a)); }

}  // namespace detail

inline double cosine(const std::vector<float>& a, const std::vector<float>& b) {
    const double na = detail::norm(a);
    const double nb = detail::norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return detail::dot(a, b) / (na * nb);
}

// Trained token vectors plus the subword vectors they were composed from.
// Out-of-vocabulary tokens get a vector synthesized from whichever of their
// n-grams were seen in training.
class VectorSpace {
public:
    int dim = 0;
    int min_ngram = 3;
    int max_ngram = 6;
    std::map<std::string, std::vector<float>> vectors;   // composed, per token
    std::map<std::string, std::vector<float>> subwords;  // per n-gram
    std::string corpus_fingerprint;

    bool contains(const std::string& token) const { return vectors.count(token) > 0; }

    // Composed vector for a token; empty when the token is unknown and none
    // of its n-grams were seen.
    std::vector<float> vector_for(const std::string& token) const {
        auto it = vectors.find(token);
        if (it != vectors.end()) return it->second;
        std::vector<float> acc;
        for (const std::string& gram : detail::subword_ngrams(token, min_ngram, max_ngram)) {
            auto sit = subwords.find(gram);
            if (sit == subwords.end()) continue;
            if (acc.empty()) acc.assign(static_cast<std::size_t>(dim), 0.0f);
            for (int i = 0; i < dim; ++i) acc[static_cast<std::size_t>(i)] += sit->second[static_cast<std::size_t>(i)];
        }
        return acc;
    }

    // i nearest vocabulary tokens by cosine similarity, excluding the query
    // token itself; ties broken lexicographically. Unknown tokens with no
    // recognizable n-grams yield an empty list.
    std::vector<std::string> nearest_neighbors(const std::string& token, int i) const {
        const std::vector<float> query = vector_for(token);
        if (query.empty() || detail::norm(query) == 0.0) return {};
        std::vector<std::pair<std::string, double>> scored;
        scored.reserve(vectors.size());
        for (const auto& [candidate, vec] : vectors) {
            if (candidate == token) continue;
            scored.emplace_back(candidate, cosine(query, vec));
        }
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        const std::size_t limit = std::min(scored.size(),
                                           static_cast<std::size_t>(std::max(i, 0)));
        std::vector<std::string> out;
        out.reserve(limit);
        for (std::size_t n = 0; n < limit; ++n) out.push_back(scored[n].first);
        return out;
    }

    // Layout: magic "SQEV", u32 version, u32 dim, u64 vocab_size, then one
    // record per token (u32 byte length, token bytes, dim f32 values, all
    // little-endian). Subword vectors, n-gram bounds, and the corpus
    // fingerprint follow the token records.
    std::string serialize() const {
        std::string out = "SQEV";
        detail::write_u32_le(out, 1);
        detail::write_u32_le(out, static_cast<std::uint32_t>(dim));
        detail::write_u64_le(out, vectors.size());
        auto write_record = [&](const std::string& key, const std::vector<float>& vec) {
            detail::write_u32_le(out, static_cast<std::uint32_t>(key.size()));
            out += key;
            for (float f : vec) detail::write_f32_le(out, f);
        };
        for (const auto& [token, vec] : vectors) write_record(token, vec);
        detail::write_u32_le(out, static_cast<std::uint32_t>(min_ngram));
        detail::write_u32_le(out, static_cast<std::uint32_t>(max_ngram));
        detail::write_u64_le(out, subwords.size());
        for (const auto& [gram, vec] : subwords) write_record(gram, vec);
        detail::write_u32_le(out, static_cast<std::uint32_t>(corpus_fingerprint.size()));
        out += corpus_fingerprint;
        return out;
    }

    static VectorSpace deserialize(const std::string& data) {
        detail::ByteReader in(data, "vector store");
        if (in.bytes(4) != "SQEV") throw_input("vector store: bad magic");
        const std::uint32_t version = in.u32();
        if (version != 1) throw_input("vector store: unsupported version " + std::to_string(version));
        VectorSpace vs;
        vs.dim = static_cast<int>(in.u32());
        if (vs.dim < 1) throw_input("vector store: bad dimension");
        const std::uint64_t vocab_size = in.u64();
        auto read_record = [&](std::map<std::string, std::vector<float>>& into) {
            const std::uint32_t len = in.u32();
            std::string key = in.bytes(len);
            std::vector<float> vec(static_cast<std::size_t>(vs.dim));
            for (int i = 0; i < vs.dim; ++i) vec[static_cast<std::size_t>(i)] = in.f32();
            into.emplace(std::move(key), std::move(vec));
        };
        for (std::uint64_t i = 0; i < vocab_size; ++i) read_record(vs.vectors);
        if (!in.exhausted()) {
            vs.min_ngram = static_cast<int>(in.u32());
            vs.max_ngram = static_cast<int>(in.u32());
            const std::uint64_t subword_count = in.u64();
            for (std::uint64_t i = 0; i < subword_count; ++i) read_record(vs.subwords);
            const std::uint32_t fp_len = in.u32();
            vs.corpus_fingerprint = in.bytes(fp_len);
        }
        return vs;
    }

    void save(const std::string& path) const { write_file(path, serialize()); }

    static VectorSpace load(const std::string& path) {
        return deserialize(read_file(path));
    }
};

// Skip-gram with negative sampling over word plus subword n-gram vectors.
// Single-threaded by construction so a fixed seed fixes the result.
inline VectorSpace train_vector_space(const std::vector<std::vector<std::string>>& corpus,
                                      const KbConfig& cfg) {
    if (cfg.dim < 1) throw_input("embedding dim must be >= 1");
    if (cfg.context_window < 1) throw_input("context window must be >= 1");
    if (cfg.epochs < 1) throw_input("epochs must be >= 1");
    if (cfg.min_count < 1) throw_input("min_count must be >= 1");
    if (cfg.min_ngram < 1 || cfg.max_ngram < cfg.min_ngram)
        throw_input("bad n-gram length bounds");
    if (cfg.learning_rate <= 0) throw_input("learning rate must be > 0");
    if (cfg.negative_samples < 1) throw_input("negative_samples must be >= 1");

    std::map<std::string, std::int64_t> freq;
    for (const auto& doc : corpus)
        for (const std::string& tok : doc) freq[tok] += 1;

    std::vector<std::string> vocab;
    std::map<std::string, int> token_id;
    std::vector<std::int64_t> counts;
    for (const auto& [tok, n] : freq) {
        if (n < cfg.min_count) continue;
        token_id[tok] = static_cast<int>(vocab.size());
        vocab.push_back(tok);
        counts.push_back(n);
    }
    if (vocab.empty())
        throw_input("no tokens reach min_count " + std::to_string(cfg.min_count));

    std::map<std::string, int> gram_id;
    std::vector<std::string> grams;
    std::vector<std::vector<int>> word_grams(vocab.size());
    for (std::size_t w = 0; w < vocab.size(); ++w) {
        for (const std::string& gram : detail::subword_ngrams(vocab[w], cfg.min_ngram, cfg.max_ngram)) {
            auto [it, inserted] = gram_id.emplace(gram, static_cast<int>(grams.size()));
            if (inserted) grams.push_back(gram);
            word_grams[w].push_back(it->second);
        }
    }

    const std::size_t dim = static_cast<std::size_t>(cfg.dim);
    const std::size_t rows = vocab.size() + grams.size();
    Rng rng(cfg.seed);

    // Input rows: vocab words first, then n-grams. Output rows: vocab only.
    std::vector<float> input(rows * dim);
    for (float& f : input)
        f = static_cast<float>((rng.next_double() * 2.0 - 1.0) / cfg.dim);
    std::vector<float> output(vocab.size() * dim, 0.0f);

    // Unigram^0.75 negative-sampling distribution, sampled by binary search
    // over the cumulative weights.
    std::vector<double> cum(vocab.size());
    double total_weight = 0.0;
    for (std::size_t w = 0; w < vocab.size(); ++w) {
        total_weight += std::pow(static_cast<double>(counts[w]), 0.75);
        cum[w] = total_weight;
    }
    auto sample_negative = [&]() {
        const double u = rng.next_double() * total_weight;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        return static_cast<int>(std::min<std::size_t>(
            static_cast<std::size_t>(it - cum.begin()), vocab.size() - 1));
    };

    std::vector<std::vector<int>> sequences;
    std::size_t total_positions = 0;
    for (const auto& doc : corpus) {
        std::vector<int> seq;
        for (const std::string& tok : doc) {
            auto it = token_id.find(tok);
            if (it != token_id.end()) seq.push_back(it->second);
        }
        total_positions += seq.size();
        sequences.push_back(std::move(seq));
    }
    if (total_positions == 0) throw_input("corpus empty after min_count filtering");

    const double planned = static_cast<double>(total_positions) * cfg.epochs;
    std::vector<float> hidden(dim), grad(dim);
    std::size_t processed = 0;

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (const std::vector<int>& seq : sequences) {
            for (std::size_t pos = 0; pos < seq.size(); ++pos) {
                const double progress = static_cast<double>(processed) / planned;
                const double lr = cfg.learning_rate * std::max(1e-4, 1.0 - progress);
                ++processed;

                const int center = seq[pos];
                const std::size_t span =
                    1 + rng.next_index(static_cast<std::size_t>(cfg.context_window));

                // hidden = word vector + sum of its n-gram vectors
                const float* wrow = &input[static_cast<std::size_t>(center) * dim];
                std::copy(wrow, wrow + dim, hidden.begin());
                for (int g : word_grams[static_cast<std::size_t>(center)]) {
                    const float* grow = &input[(vocab.size() + static_cast<std::size_t>(g)) * dim];
                    for (std::size_t i = 0; i < dim; ++i) hidden[i] += grow[i];
                }

                for (std::size_t off = 1; off <= span; ++off) {
                    for (int dir = -1; dir <= 1; dir += 2) {
                        const std::ptrdiff_t j =
                            static_cast<std::ptrdiff_t>(pos) + dir * static_cast<std::ptrdiff_t>(off);
                        if (j < 0 || j >= static_cast<std::ptrdiff_t>(seq.size())) continue;
                        const int context = seq[static_cast<std::size_t>(j)];

                        std::fill(grad.begin(), grad.end(), 0.0f);
                        for (int s = 0; s <= cfg.negative_samples; ++s) {
                            int target;
                            double label;
                            if (s == 0) {
                                target = context;
                                label = 1.0;
                            } else {
                                target = sample_negative();
                                if (target == context) continue;
                                label = 0.0;
                            }
                            float* orow = &output[static_cast<std::size_t>(target) * dim];
                            double score = 0.0;
                            for (std::size_t i = 0; i < dim; ++i)
                                score += static_cast<double>(hidden[i]) * orow[i];
                            const double sigma = 1.0 / (1.0 + std::exp(-score));
                            const double g = (label - sigma) * lr;
                            for (std::size_t i = 0; i < dim; ++i) {
                                grad[i] += static_cast<float>(g * orow[i]);
                                orow[i] += static_cast<float>(g * hidden[i]);
                            }
                        }

                        float* crow = &input[static_cast<std::size_t>(center) * dim];
                        for (std::size_t i = 0; i < dim; ++i) crow[i] += grad[i];
                        for (int g : word_grams[static_cast<std::size_t>(center)]) {
                            float* grow = &input[(vocab.size() + static_cast<std::size_t>(g)) * dim];
                            for (std::size_t i = 0; i < dim; ++i) grow[i] += grad[i];
                        }
                    }
                }
            }
        }
    }

    VectorSpace vs;
    vs.dim = cfg.dim;
    vs.min_ngram = cfg.min_ngram;
    vs.max_ngram = cfg.max_ngram;
    for (std::size_t w = 0; w < vocab.size(); ++w) {
        std::vector<float> composed(dim);
        const float* wrow = &input[w * dim];
        std::copy(wrow, wrow + dim, composed.begin());
        for (int g : word_grams[w]) {
            const float* grow = &input[(vocab.size() + static_cast<std::size_t>(g)) * dim];
            for (std::size_t i = 0; i < dim; ++i) composed[i] += grow[i];
        }
        vs.vectors.emplace(vocab[w], std::move(composed));
    }
    for (std::size_t g = 0; g < grams.size(); ++g) {
        std::vector<float> vec(dim);
        const float* grow = &input[(vocab.size() + g) * dim];
        std::copy(grow, grow + dim, vec.begin());
        vs.subwords.emplace(grams[g], std::move(vec));
    }
    return vs;
}

}  // namespace streamqe
