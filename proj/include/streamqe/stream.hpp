#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "streamqe/error.hpp"
#include "streamqe/text.hpp"

namespace streamqe {

// One timestamped stream record. tokens/hashtags are derived from raw by
// preprocess_text / extract_hashtags at load time and nowhere else.
struct Document {
    std::string id;
    std::int64_t timestamp = 0;  // seconds since epoch, UTC
    std::string raw;
    std::vector<std::string> tokens;
    std::vector<std::string> hashtags;
};

struct WindowConfig {
    int window_minutes = 15;
    // Unset: first document's timestamp truncated to the hour.
    std::optional<std::int64_t> stream_start;
};

struct Window {
    int index = 0;
    std::vector<Document> documents;  // ordered by timestamp
};

struct LoadStats {
    std::size_t lines = 0;
    std::size_t loaded = 0;
    std::size_t malformed = 0;
    std::size_t non_english = 0;
};

namespace detail {

// Hinnant's civil-date conversion; avoids timezone-dependent libc calls.
inline std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097LL + static_cast<std::int64_t>(doe) - 719468;
}

inline std::int64_t parse_rfc3339(const std::string& s) {
    int year, month, day, hour, minute, second;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%*1[Tt ]%2d:%2d:%2d%n", &year, &month,
                    &day, &hour, &minute, &second, &consumed) != 6) {
        throw_input("bad RFC3339 timestamp: " + s);
    }
    std::size_t pos = static_cast<std::size_t>(consumed);
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    std::int64_t offset = 0;
    if (pos < s.size()) {
        char c = s[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            int oh = 0, om = 0, n = 0;
            if (std::sscanf(s.c_str() + pos + 1, "%2d:%2d%n", &oh, &om, &n) != 2 || n != 5)
                throw_input("bad RFC3339 offset: " + s);
            offset = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
            pos += 6;
        }
    }
    if (pos != s.size()) throw_input("trailing characters in timestamp: " + s);
    std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                        static_cast<unsigned>(day));
    return days * 86400LL + hour * 3600LL + minute * 60LL + second - offset;
}

inline std::int64_t parse_timestamp(const nlohmann::json& v) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number()) return static_cast<std::int64_t>(v.get<double>());
    if (v.is_string()) return parse_rfc3339(v.get<std::string>());
    throw_input("timestamp must be integer epoch-seconds or RFC3339 string");
}

}  // namespace detail

// JSONL ingestion: {"id", "timestamp", "text"} per line. Malformed lines
// are counted and skipped; documents failing the mostly-ASCII English
// heuristic are skipped under a separate counter. A malformed share above
// 10% signals the wrong file and is fatal (only checked from 20 lines up,
// so tiny fixtures with a bad line still load).
inline std::vector<Document> load_stream(const std::string& path,
                                         const Stopwords& stopwords = Stopwords::builtin(),
                                         LoadStats* stats_out = nullptr) {
    std::ifstream in(path);
    if (!in) throw_input("cannot open stream file: " + path);
    std::vector<Document> docs;
    LoadStats stats;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++stats.lines;
        nlohmann::json obj = nlohmann::json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("id") ||
            !obj.contains("timestamp") || !obj.contains("text") ||
            !obj["text"].is_string()) {
            ++stats.malformed;
            continue;
        }
        Document doc;
        try {
            if (obj["id"].is_string()) doc.id = obj["id"].get<std::string>();
            else if (obj["id"].is_number_integer()) doc.id = std::to_string(obj["id"].get<std::int64_t>());
            else { ++stats.malformed; continue; }
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
    if (in.bad()) throw_input("I/O error reading stream file: " + path);
    if (stats.lines >= 20 && stats.malformed * 10 > stats.lines)
        throw_input("more than 10% malformed lines in " + path + " (wrong file?)");
    if (stats_out) *stats_out = stats;
    return docs;
}

inline std::int64_t resolve_stream_start(const std::vector<Document>& docs,
                                         const WindowConfig& cfg) {
    if (cfg.stream_start) return *cfg.stream_start;
    if (docs.empty()) return 0;
    std::int64_t first = docs.front().timestamp;
    for (const Document& d : docs) first = std::min(first, d.timestamp);
    // Truncate to the hour (floor, also for negative timestamps).
    std::int64_t h = first / 3600;
    if (first % 3600 != 0 && first < 0) --h;
    return h * 3600;
}

// Buckets documents into fixed windows of cfg.window_minutes. Empty windows
// between occupied ones are materialized so history indexing stays aligned.
inline std::vector<Window> assign_windows(std::vector<Document> docs,
                                          const WindowConfig& cfg,
                                          std::int64_t* resolved_start = nullptr) {
    if (cfg.window_minutes < 1) throw_input("window_minutes must be >= 1");
    const std::int64_t start = resolve_stream_start(docs, cfg);
    if (resolved_start) *resolved_start = start;
    std::stable_sort(docs.begin(), docs.end(),
                     [](const Document& a, const Document& b) {
                         return a.timestamp < b.timestamp;
                     });
    std::vector<Window> windows;
    if (docs.empty()) return windows;
    const std::int64_t width = static_cast<std::int64_t>(cfg.window_minutes) * 60;
    for (Document& doc : docs) {
        if (doc.timestamp < start)
            throw_input("document " + doc.id + " precedes stream_start (misconfiguration)");
        const std::int64_t idx64 = (doc.timestamp - start) / width;
        const int idx = static_cast<int>(idx64);
        while (static_cast<int>(windows.size()) <= idx)
            windows.push_back(Window{static_cast<int>(windows.size()), {}});
        windows[static_cast<std::size_t>(idx)].documents.push_back(std::move(doc));
    }
    return windows;
}

}  // namespace streamqe
