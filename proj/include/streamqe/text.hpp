#pragma once

#include <array>
#include <cctype>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "streamqe/error.hpp"
#include "streamqe/porter.hpp"

namespace streamqe {

// Apostrophe-free English stopword list (contractions split at the
// apostrophe before lookup, so "don't" arrives as "don" + "t").
inline constexpr std::array<const char*, 153> kBuiltinStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
    "your", "yours", "yourself", "yourselves", "he", "him", "his",
    "himself", "she", "her", "hers", "herself", "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which",
    "who", "whom", "this", "that", "these", "those", "am", "is", "are",
    "was", "were", "be", "been", "being", "have", "has", "had", "having",
    "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if",
    "or", "because", "as", "until", "while", "of", "at", "by", "for",
    "with", "about", "against", "between", "into", "through", "during",
    "before", "after", "above", "below", "to", "from", "up", "down", "in",
    "out", "on", "off", "over", "under", "again", "further", "then",
    "once", "here", "there", "when", "where", "why", "how", "all", "any",
    "both", "each", "few", "more", "most", "other", "some", "such", "no",
    "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s",
    "t", "can", "will", "just", "don", "should", "now", "d", "ll", "m",
    "o", "re", "ve", "y", "ain", "aren", "couldn", "didn", "doesn",
    "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn",
    "shan", "shouldn", "wasn", "weren", "won", "wouldn",
};

class Stopwords {
public:
    static const Stopwords& builtin() {
        static const Stopwords instance{
            std::unordered_set<std::string>(kBuiltinStopwords.begin(),
                                            kBuiltinStopwords.end())};
        return instance;
    }

    // One lowercase word per line, UTF-8. Blank lines ignored.
    static Stopwords from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw_input("cannot open stopword list: " + path);
        std::unordered_set<std::string> words;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) words.insert(line);
        }
        return Stopwords{std::move(words)};
    }

    bool contains(const std::string& word) const { return words_.count(word) > 0; }
    std::size_t size() const { return words_.size(); }

private:
    explicit Stopwords(std::unordered_set<std::string> words)
        : words_(std::move(words)) {}

    std::unordered_set<std::string> words_;
};

namespace detail {

inline bool is_word_byte(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

inline bool is_space_byte(unsigned char c) { return std::isspace(c); }

inline char ascii_lower(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (unsigned char c : s)
        if (!std::isdigit(c)) return false;
    return true;
}

inline bool istarts_with(std::string_view text, std::size_t pos, std::string_view prefix) {
    if (pos + prefix.size() > text.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (ascii_lower(text[pos + i]) != prefix[i]) return false;
    return true;
}

// Blanks out http(s):// and www. runs up to the next whitespace.
inline std::string strip_urls(std::string_view raw) {
    std::string out(raw);
    std::size_t i = 0;
    while (i < out.size()) {
        if (istarts_with(out, i, "http://") || istarts_with(out, i, "https://") ||
            istarts_with(out, i, "www.")) {
            while (i < out.size() && !is_space_byte(static_cast<unsigned char>(out[i])))
                out[i++] = ' ';
        } else {
            ++i;
        }
    }
    return out;
}

}  // namespace detail

// Lowercase, drop URLs / pure numbers / stopwords / @mentions, Porter-stem
// the rest. '#' is kept as a prefix sentinel: "#Baltimore" contributes the
// stem of "baltimore". Order of surviving tokens is preserved.
inline std::vector<std::string> preprocess_text(
    std::string_view raw, const Stopwords& stopwords = Stopwords::builtin()) {
    std::vector<std::string> tokens;
    std::string text = detail::strip_urls(raw);
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        char sentinel = 0;
        if (c == '#' || c == '@') {
            sentinel = static_cast<char>(c);
            ++i;
        } else if (!detail::is_word_byte(c)) {
            ++i;
            continue;
        }
        std::string body;
        while (i < n && detail::is_word_byte(static_cast<unsigned char>(text[i]))) {
            body.push_back(detail::ascii_lower(text[i]));
            ++i;
        }
        if (body.empty() || sentinel == '@') continue;
        if (detail::all_digits(body)) continue;
        if (stopwords.contains(body)) continue;
        std::string stem = porter_stem(body);
        if (stem.empty() || stopwords.contains(stem)) continue;
        tokens.push_back(std::move(stem));
    }
    return tokens;
}

// Every maximal '#'-prefixed run of [A-Za-z0-9_], lowercased, in order,
// duplicates kept.
inline std::vector<std::string> extract_hashtags(std::string_view raw) {
    std::vector<std::string> tags;
    std::size_t i = 0;
    const std::size_t n = raw.size();
    while (i < n) {
        if (raw[i] != '#') {
            ++i;
            continue;
        }
        ++i;
        std::string tag;
        while (i < n) {
            unsigned char c = static_cast<unsigned char>(raw[i]);
            if (!(std::isalnum(c) || c == '_')) break;
            tag.push_back(detail::ascii_lower(raw[i]));
            ++i;
        }
        if (!tag.empty()) tags.push_back("#" + tag);
    }
    return tags;
}

// Heuristic English filter: at least `min_ratio` of alphabetic characters
// must be ASCII. Non-ASCII UTF-8 lead bytes count as one alphabetic
// character each; text with no alphabetic content passes.
inline bool mostly_ascii(std::string_view raw, double min_ratio = 0.6) {
    std::size_t ascii_alpha = 0;
    std::size_t non_ascii = 0;
    for (unsigned char c : raw) {
        if (std::isalpha(c)) ++ascii_alpha;
        else if (c >= 0x80 && (c & 0xC0) != 0x80) ++non_ascii;
    }
    std::size_t total = ascii_alpha + non_ascii;
    if (total == 0) return true;
    return static_cast<double>(ascii_alpha) >= min_ratio * static_cast<double>(total);
}

}  // namespace streamqe
