// Copyright 2026 The qhybrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "qhybrid/plot.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "qhybrid/error.hpp"

namespace qhybrid::plot {

namespace fs = std::filesystem;
using bench::RunRecord;

namespace {

constexpr const char *kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string axis_value(const RunRecord &r, Axis axis) {
    switch (axis) {
    case Axis::Entangler:
        return std::string(templates::to_string(r.entangler));
    case Axis::Layers:
        return "L" + std::to_string(r.layers);
    case Axis::Qubits:
        return "q" + std::to_string(r.qubits);
    }
    return {};
}

// Sort key for series so that L2 comes before L10.
std::pair<int, std::string> axis_order(const RunRecord &r, Axis axis) {
    switch (axis) {
    case Axis::Entangler:
        return {static_cast<int>(r.entangler), {}};
    case Axis::Layers:
        return {r.layers, {}};
    case Axis::Qubits:
        return {r.qubits, {}};
    }
    return {};
}

std::string group_key(const RunRecord &r, Axis axis) {
    std::string key(models::to_string(r.algo));
    if (axis != Axis::Entangler) {
        key += "-" + std::string(templates::to_string(r.entangler));
    }
    if (axis != Axis::Layers) {
        key += "-L" + std::to_string(r.layers);
    }
    if (axis != Axis::Qubits) {
        key += "-q" + std::to_string(r.qubits);
    }
    return key;
}

std::string escape(std::string_view text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

double plot_w() { return kWidth - kMarginLeft - kMarginRight; }
double plot_h() { return kHeight - kMarginTop - kMarginBottom; }
double y_pixel(double acc) { return kMarginTop + (1.0 - acc) * plot_h(); }

std::string svg_open(const std::string &title) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
        "<text x=\"{2:.2f}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
        kWidth, kHeight, kMarginLeft + plot_w() / 2.0, escape(title));
}

std::string y_axis(const std::string &label, double width) {
    std::string out;
    for (int i = 0; i <= 5; ++i) {
        const double v = 0.2 * i;
        const double y = y_pixel(v);
        out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\" "
                           "stroke=\"#dddddd\"/>\n"
                           "<text x=\"{3:.2f}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:.1f}</text>\n",
                           kMarginLeft, y, kMarginLeft + width, kMarginLeft - 6.0,
                           y + 4.0, v);
    }
    out += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" "
                       "stroke=\"black\"/>\n"
                       "<line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{3:.2f}\" y2=\"{2:.2f}\" "
                       "stroke=\"black\"/>\n",
                       kMarginLeft, kMarginTop, kMarginTop + plot_h(),
                       kMarginLeft + width);
    out += fmt::format("<text x=\"16\" y=\"{0:.2f}\" text-anchor=\"middle\" "
                       "transform=\"rotate(-90 16 {0:.2f})\">{1}</text>\n",
                       kMarginTop + plot_h() / 2.0, escape(label));
    return out;
}

std::string legend_entry(std::size_t i, const std::string &label) {
    const double x = kMarginLeft + plot_w() + 16.0;
    const double y = kMarginTop + 10.0 + 18.0 * static_cast<double>(i);
    return fmt::format("<rect x=\"{0:.2f}\" y=\"{1:.2f}\" width=\"12\" height=\"12\" "
                       "fill=\"{2}\"/>\n<text x=\"{3:.2f}\" y=\"{4:.2f}\">{5}</text>\n",
                       x, y - 10.0, kPalette[i % kPaletteSize], x + 18.0, y,
                       escape(label));
}

void write_file(const fs::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::trunc);
    out << content;
    if (!out) {
        throw FormatError("cannot write " + path.string());
    }
}

} // namespace

std::string to_string(Axis axis) {
    switch (axis) {
    case Axis::Entangler:
        return "entangler";
    case Axis::Layers:
        return "layers";
    case Axis::Qubits:
        return "qubits";
    }
    return "?";
}

Axis parse_axis(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "entangler") {
        return Axis::Entangler;
    }
    if (lower == "layers") {
        return Axis::Layers;
    }
    if (lower == "qubits") {
        return Axis::Qubits;
    }
    throw ConfigError("unknown plot axis '" + std::string(text) +
                      "' (expected entangler, layers or qubits)");
}

GroupedCharts group_records(const std::vector<RunRecord> &records, Axis axis,
                            const Filter &filter) {
    // group -> (order, label) -> epoch -> accuracies over seeds
    using EpochMap = std::map<int, std::vector<double>>;
    std::map<std::string, std::map<std::pair<int, std::string>, EpochMap>> groups;
    for (const auto &r : records) {
        if (filter.algo && r.algo != *filter.algo) {
            continue;
        }
        auto order = axis_order(r, axis);
        order.second = axis_value(r, axis);
        groups[group_key(r, axis)][order][r.epoch].push_back(r.test_acc);
    }

    GroupedCharts out;
    out.final_accuracy.title = "Final test accuracy by " + to_string(axis);
    for (const auto &[key, series_map] : groups) {
        LineChart chart;
        chart.title = key + " by " + to_string(axis);
        BarGroup bars{key, {}};
        for (const auto &[order, epochs] : series_map) {
            Series s{order.second, {}};
            for (const auto &[epoch, accs] : epochs) {
                s.points.emplace_back(static_cast<double>(epoch), bench::median(accs));
            }
            bars.bars.emplace_back(s.label, s.points.back().second);
            chart.series.push_back(std::move(s));
        }
        out.lines.emplace_back(to_string(axis) + "-" + key, std::move(chart));
        out.final_accuracy.groups.push_back(std::move(bars));
    }
    return out;
}

std::vector<std::vector<std::pair<double, double>>>
line_chart_coordinates(const LineChart &chart) {
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const auto &s : chart.series) {
        for (const auto &[x, y] : s.points) {
            lo = first ? x : std::min(lo, x);
            hi = first ? x : std::max(hi, x);
            first = false;
        }
    }
    const double span = hi > lo ? hi - lo : 1.0;
    std::vector<std::vector<std::pair<double, double>>> out;
    for (const auto &s : chart.series) {
        auto &pts = out.emplace_back();
        for (const auto &[x, y] : s.points) {
            const double px = hi > lo ? kMarginLeft + (x - lo) / span * plot_w()
                                      : kMarginLeft + plot_w() / 2.0;
            pts.emplace_back(px, y_pixel(std::clamp(y, 0.0, 1.0)));
        }
    }
    return out;
}

std::string render_line_chart(const LineChart &chart) {
    std::string svg = svg_open(chart.title);
    svg += y_axis("test accuracy", plot_w());
    std::set<double> epochs;
    for (const auto &s : chart.series) {
        for (const auto &p : s.points) {
            epochs.insert(p.first);
        }
    }
    const auto coords = line_chart_coordinates(chart);
    // x tick labels come from the first series that contains each epoch.
    std::map<double, double> tick_x;
    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        for (std::size_t j = 0; j < chart.series[i].points.size(); ++j) {
            tick_x.emplace(chart.series[i].points[j].first, coords[i][j].first);
        }
    }
    for (const auto &[epoch, x] : tick_x) {
        svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n",
                           x, kMarginTop + plot_h() + 18.0, epoch);
    }
    svg += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">epoch</text>\n",
                       kMarginLeft + plot_w() / 2.0, kHeight - 10.0);
    for (std::size_t i = 0; i < chart.series.size(); ++i) {
        const char *color = kPalette[i % kPaletteSize];
        std::string points;
        for (const auto &[x, y] : coords[i]) {
            if (!points.empty()) {
                points += ' ';
            }
            points += fmt::format("{:.2f},{:.2f}", x, y);
        }
        svg += fmt::format("<polyline data-series=\"{}\" fill=\"none\" stroke=\"{}\" "
                           "stroke-width=\"2\" points=\"{}\"/>\n",
                           escape(chart.series[i].label), color, points);
        for (const auto &[x, y] : coords[i]) {
            svg += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n",
                               x, y, color);
        }
        svg += legend_entry(i, chart.series[i].label);
    }
    svg += "</svg>\n";
    return svg;
}

std::string render_bar_chart(const BarChart &chart) {
    std::vector<std::string> labels;
    for (const auto &g : chart.groups) {
        for (const auto &b : g.bars) {
            if (std::find(labels.begin(), labels.end(), b.first) == labels.end()) {
                labels.push_back(b.first);
            }
        }
    }
    // Wide grids get a wider canvas so the bars stay legible.
    const double slot = 24.0 * static_cast<double>(std::max<std::size_t>(labels.size(), 1)) + 16.0;
    const double min_w = static_cast<double>(chart.groups.size()) * slot;
    const double width = std::max(plot_w(), min_w);
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{1}\" "
        "viewBox=\"0 0 {0:.0f} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect width=\"{0:.0f}\" height=\"{1}\" fill=\"white\"/>\n"
        "<text x=\"{2:.2f}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
        width + kMarginLeft + kMarginRight, kHeight, kMarginLeft + width / 2.0,
        escape(chart.title));
    svg += y_axis("final test accuracy", width);
    const double group_w = chart.groups.empty() ? width : width / static_cast<double>(chart.groups.size());
    const double bar_w = (group_w - 16.0) / static_cast<double>(std::max<std::size_t>(labels.size(), 1));
    for (std::size_t g = 0; g < chart.groups.size(); ++g) {
        const double gx = kMarginLeft + group_w * static_cast<double>(g) + 8.0;
        for (const auto &[label, value] : chart.groups[g].bars) {
            const auto idx = static_cast<std::size_t>(
                std::find(labels.begin(), labels.end(), label) - labels.begin());
            const double v = std::clamp(value, 0.0, 1.0);
            svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" "
                               "height=\"{:.2f}\" fill=\"{}\"><title>{} {}: {:.4f}</title></rect>\n",
                               gx + bar_w * static_cast<double>(idx), y_pixel(v), bar_w,
                               v * plot_h(), kPalette[idx % kPaletteSize],
                               escape(chart.groups[g].label), escape(label), value);
        }
        svg += fmt::format("<text x=\"{0:.2f}\" y=\"{1:.2f}\" text-anchor=\"end\" "
                           "font-size=\"9\" transform=\"rotate(-35 {0:.2f} {1:.2f})\">{2}</text>\n",
                           gx + (group_w - 16.0) / 2.0, kMarginTop + plot_h() + 12.0,
                           escape(chart.groups[g].label));
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double x = kMarginLeft + width + 16.0;
        const double y = kMarginTop + 10.0 + 18.0 * static_cast<double>(i);
        svg += fmt::format("<rect x=\"{0:.2f}\" y=\"{1:.2f}\" width=\"12\" height=\"12\" "
                           "fill=\"{2}\"/>\n<text x=\"{3:.2f}\" y=\"{4:.2f}\">{5}</text>\n",
                           x, y - 10.0, kPalette[i % kPaletteSize], x + 18.0, y,
                           escape(labels[i]));
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<fs::path> plot(const fs::path &csv, Axis axis, const fs::path &out_dir,
                           const Filter &filter) {
    const auto records = bench::read_csv(csv);
    const auto charts = group_records(records, axis, filter);
    std::vector<fs::path> written;
    if (charts.lines.empty()) {
        std::fprintf(stderr, "warning: no rows in %s match the filter; nothing plotted\n",
                     csv.string().c_str());
        return written;
    }
    fs::create_directories(out_dir);
    for (const auto &[stem, chart] : charts.lines) {
        const auto path = out_dir / (stem + ".svg");
        write_file(path, render_line_chart(chart));
        written.push_back(path);
    }
    const auto bar_path = out_dir / (to_string(axis) + "-final.svg");
    write_file(bar_path, render_bar_chart(charts.final_accuracy));
    written.push_back(bar_path);
    return written;
}

} // namespace qhybrid::plot
