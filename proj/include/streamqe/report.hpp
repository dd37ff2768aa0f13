#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "streamqe/error.hpp"
#include "streamqe/expansion.hpp"
#include "streamqe/io.hpp"
#include "streamqe/pipeline.hpp"

namespace streamqe {

struct MetricRow {
    int window = 0;
    int topic = 0;
    Method method = Method::Static;
    std::string volume;
    std::string hashtag_count;
    std::string optimal_k;
};

inline std::vector<MetricRow> parse_metrics_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<MetricRow> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            first = false;
            if (line + "\n" != kMetricsHeader)
                throw_input("metrics.csv: unexpected header '" + line + "'");
            continue;
        }
        if (line.empty()) continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 6) throw_input("metrics.csv: malformed row '" + line + "'");
        MetricRow row;
        try {
            row.window = std::stoi(f[0]);
            row.topic = std::stoi(f[1]);
        } catch (const std::exception&) {
            throw_input("metrics.csv: bad window/topic in '" + line + "'");
        }
        row.method = parse_method(f[2]);
        row.volume = f[3];
        row.hashtag_count = f[4];
        row.optimal_k = f[5];
        rows.push_back(std::move(row));
    }
    if (first) throw_input("metrics.csv: empty file");
    return rows;
}

namespace detail {

inline const char* method_color(Method m) {
    switch (m) {
        case Method::Static: return "#4e79a7";
        case Method::Emergent: return "#f28e2b";
        case Method::ProactiveVs: return "#e15759";
        case Method::ProactiveCo: return "#76b7b2";
    }
    return "#4e79a7";
}

inline double cell_value(const std::string& s) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw_input("metrics.csv: non-numeric cell '" + s + "'");
    }
}

}  // namespace detail

// Grouped bar chart: topics along the x-axis, one bar per method. Bar labels
// carry the metrics.csv cell text verbatim; the chart is a view of the CSV,
// not a recomputation.
inline std::string render_bar_chart(int window, const std::string& metric,
                                    const std::vector<int>& topics,
                                    const std::map<std::pair<int, Method>, std::string>& cells) {
    const double height = 360;
    const double left = 56, right = 620, top = 48, bottom = 300;

    double max_value = 0.0;
    for (const auto& [key, text] : cells)
        max_value = std::max(max_value, detail::cell_value(text));
    if (max_value <= 0.0) max_value = 1.0;

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\" "
           "viewBox=\"0 0 640 360\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"640\" height=\"360\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"20\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\" "
           "fill=\"#222222\">window " +
           std::to_string(window) + " " + metric + "</text>\n";

    // legend
    double lx = 320;
    for (Method m : kAllMethods) {
        svg += "<rect x=\"" + format_fixed2(lx) + "\" y=\"14\" width=\"10\" height=\"10\" fill=\"" +
               detail::method_color(m) + "\"/>\n";
        svg += "<text x=\"" + format_fixed2(lx + 13) +
               "\" y=\"23\" font-family=\"sans-serif\" font-size=\"9\" fill=\"#222222\">" +
               method_name(m) + "</text>\n";
        lx += 13 + 6.0 * static_cast<double>(std::string(method_name(m)).size());
    }

    // y axis with quarter ticks
    svg += "<line x1=\"" + format_fixed2(left) + "\" y1=\"" + format_fixed2(top) + "\" x2=\"" +
           format_fixed2(left) + "\" y2=\"" + format_fixed2(bottom) +
           "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double v = max_value * tick / 4.0;
        const double y = bottom - (bottom - top) * tick / 4.0;
        svg += "<line x1=\"" + format_fixed2(left - 4) + "\" y1=\"" + format_fixed2(y) +
               "\" x2=\"" + format_fixed2(left) + "\" y2=\"" + format_fixed2(y) +
               "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + format_fixed2(left - 8) + "\" y=\"" + format_fixed2(y + 3) +
               "\" font-family=\"sans-serif\" font-size=\"9\" fill=\"#444444\" "
               "text-anchor=\"end\">" +
               format_fixed2(v) + "</text>\n";
    }
    svg += "<line x1=\"" + format_fixed2(left) + "\" y1=\"" + format_fixed2(bottom) + "\" x2=\"" +
           format_fixed2(right) + "\" y2=\"" + format_fixed2(bottom) +
           "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

    const double group_w = (right - left) / static_cast<double>(topics.size());
    const double bar_w = group_w / 5.0;
    for (std::size_t g = 0; g < topics.size(); ++g) {
        const double gx = left + group_w * static_cast<double>(g);
        for (std::size_t b = 0; b < kAllMethods.size(); ++b) {
            const Method m = kAllMethods[b];
            auto it = cells.find({topics[g], m});
            if (it == cells.end())
                throw_internal("metrics.csv: missing cell for topic " + std::to_string(topics[g]));
            const double v = detail::cell_value(it->second);
            const double h = (bottom - top) * (v / max_value);
            const double x = gx + bar_w * (0.5 + static_cast<double>(b));
            const double y = bottom - h;
            svg += "<rect x=\"" + format_fixed2(x) + "\" y=\"" + format_fixed2(y) + "\" width=\"" +
                   format_fixed2(bar_w) + "\" height=\"" + format_fixed2(h) + "\" fill=\"" +
                   detail::method_color(m) + "\"/>\n";
            svg += "<text x=\"" + format_fixed2(x + bar_w / 2.0) + "\" y=\"" +
                   format_fixed2(y - 3) +
                   "\" font-family=\"sans-serif\" font-size=\"8\" fill=\"#222222\" "
                   "text-anchor=\"middle\">" +
                   it->second + "</text>\n";
        }
        svg += "<text x=\"" + format_fixed2(gx + group_w / 2.0) + "\" y=\"" +
               format_fixed2(bottom + 16) +
               "\" font-family=\"sans-serif\" font-size=\"10\" fill=\"#222222\" "
               "text-anchor=\"middle\">topic " +
               std::to_string(topics[g]) + "</text>\n";
    }
    svg += "<text x=\"" + format_fixed2((left + right) / 2.0) + "\" y=\"" +
           format_fixed2(height - 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222222\" "
           "text-anchor=\"middle\">topics</text>\n";
    svg += "</svg>\n";
    return svg;
}

struct ReportOutcome {
    std::vector<std::string> svg_paths;
    std::string summary_path;
};

// Emits three charts (volume, hashtag_count, optimal_k) per triggered window
// plus a per-window per-method totals CSV.
inline ReportOutcome write_report(const std::string& run_dir, const std::string& out_dir) {
    const std::vector<MetricRow> rows = parse_metrics_csv(read_file(run_dir + "/metrics.csv"));
    ensure_dir(out_dir);

    std::set<int> windows;
    std::map<int, std::set<int>> window_topics;
    for (const MetricRow& row : rows) {
        windows.insert(row.window);
        window_topics[row.window].insert(row.topic);
    }

    ReportOutcome outcome;
    for (int w : windows) {
        std::map<std::pair<int, Method>, std::string> vols, tags, ks;
        for (const MetricRow& row : rows) {
            if (row.window != w) continue;
            vols[{row.topic, row.method}] = row.volume;
            tags[{row.topic, row.method}] = row.hashtag_count;
            ks[{row.topic, row.method}] = row.optimal_k;
        }
        const std::vector<int> topics(window_topics[w].begin(), window_topics[w].end());
        const struct {
            const char* name;
            const std::map<std::pair<int, Method>, std::string>* cells;
        } charts[] = {{"volume", &vols}, {"hashtag_count", &tags}, {"optimal_k", &ks}};
        for (const auto& chart : charts) {
            const std::string path =
                out_dir + "/" + std::to_string(w) + "_" + chart.name + ".svg";
            write_file(path, render_bar_chart(w, chart.name, topics, *chart.cells));
            outcome.svg_paths.push_back(path);
        }
    }

    std::string summary = "window,method,volume,hashtag_count\n";
    for (int w : windows) {
        for (Method m : kAllMethods) {
            std::int64_t vol = 0, tags = 0;
            for (const MetricRow& row : rows) {
                if (row.window != w || row.method != m) continue;
                vol += static_cast<std::int64_t>(detail::cell_value(row.volume));
                tags += static_cast<std::int64_t>(detail::cell_value(row.hashtag_count));
            }
            summary += std::to_string(w);
            summary += ',';
            summary += method_name(m);
            summary += ',';
            summary += std::to_string(vol);
            summary += ',';
            summary += std::to_string(tags);
            summary += '\n';
        }
    }
    outcome.summary_path = out_dir + "/summary.csv";
    write_file(outcome.summary_path, summary);
    return outcome;
}

}  // namespace streamqe
