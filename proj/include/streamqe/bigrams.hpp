#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "streamqe/error.hpp"
#include "streamqe/io.hpp"
#include "streamqe/stream.hpp"

namespace streamqe {

// Counts of adjacent token pairs, folded onto a canonical (lexicographically
// ordered) key so (a,b) and (b,a) share one count. Pairs never cross
// document boundaries; repeated-token pairs (a,a) are counted.
class BigramDictionary {
public:
    void add_document(const std::vector<std::string>& tokens) {
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i)
            add_pair(tokens[i], tokens[i + 1]);
    }

    void add_pair(const std::string& a, const std::string& b) {
        counts_[canonical(a, b)] += 1;
    }

    std::int64_t count(const std::string& a, const std::string& b) const {
        auto it = counts_.find(canonical(a, b));
        return it == counts_.end() ? 0 : it->second;
    }

    std::size_t pair_count() const { return counts_.size(); }

    // Top-j partners of `token` by count, count ties broken lexicographically
    // by partner. Unknown token yields an empty list.
    std::vector<std::string> top_cooccurring(const std::string& token, int j) const {
        std::vector<std::pair<std::string, std::int64_t>> partners;
        for (const auto& [key, n] : counts_) {
            if (key.first == token)
                partners.emplace_back(key.second, n);
            else if (key.second == token)
                partners.emplace_back(key.first, n);
        }
        std::sort(partners.begin(), partners.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        const std::size_t limit = std::min(partners.size(),
                                           static_cast<std::size_t>(std::max(j, 0)));
        std::vector<std::string> out;
        out.reserve(limit);
        for (std::size_t i = 0; i < limit; ++i) out.push_back(partners[i].first);
        return out;
    }

    // CSV rows "token_a,token_b,count" with token_a <= token_b, sorted by key.
    std::string to_csv() const {
        std::string out = "token_a,token_b,count\n";
        for (const auto& [key, n] : counts_) {
            out += csv_field(key.first);
            out += ',';
            out += csv_field(key.second);
            out += ',';
            out += std::to_string(n);
            out += '\n';
        }
        return out;
    }

    static BigramDictionary from_csv(const std::string& text) {
        BigramDictionary dict;
        std::istringstream in(text);
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (first) {
                first = false;
                if (line != "token_a,token_b,count")
                    throw_input("bigram csv: unexpected header '" + line + "'");
                continue;
            }
            if (line.empty()) continue;
            const auto c1 = line.find(',');
            const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
            if (c1 == std::string::npos || c2 == std::string::npos)
                throw_input("bigram csv: malformed row '" + line + "'");
            const std::string a = line.substr(0, c1);
            const std::string b = line.substr(c1 + 1, c2 - c1 - 1);
            const std::string n = line.substr(c2 + 1);
            if (a.empty() || b.empty()) throw_input("bigram csv: empty token in '" + line + "'");
            std::int64_t value = 0;
            try {
                value = std::stoll(n);
            } catch (const std::exception&) {
                throw_input("bigram csv: bad count in '" + line + "'");
            }
            if (value < 1) throw_input("bigram csv: count must be >= 1 in '" + line + "'");
            dict.counts_[canonical(a, b)] += value;
        }
        return dict;
    }

    void save(const std::string& path) const { write_file(path, to_csv()); }

    static BigramDictionary load(const std::string& path) {
        return from_csv(read_file(path));
    }

private:
    static std::pair<std::string, std::string> canonical(const std::string& a,
                                                         const std::string& b) {
        return a <= b ? std::make_pair(a, b) : std::make_pair(b, a);
    }

    std::map<std::pair<std::string, std::string>, std::int64_t> counts_;
};

inline BigramDictionary build_bigrams(const std::vector<Document>& docs) {
    BigramDictionary dict;
    for (const Document& doc : docs) dict.add_document(doc.tokens);
    return dict;
}

}  // namespace streamqe
