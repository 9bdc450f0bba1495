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
/**
 * @file
 * SVG accuracy charts from a results CSV.
 *
 * Rows are grouped by every configuration field except the chosen axis.
 * Each group gets a line chart (x = epoch, y = median test accuracy over
 * seeds, one series per axis value). One grouped bar chart per call shows
 * the final-epoch medians of every group.
 */
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qhybrid/bench.hpp"

namespace qhybrid::plot {

enum class Axis { Entangler, Layers, Qubits };

std::string to_string(Axis axis);
/// Accepts "entangler", "layers", "qubits" (case-insensitive).
Axis parse_axis(std::string_view text);

struct Series {
    std::string label;
    /// (epoch, accuracy), sorted by epoch.
    std::vector<std::pair<double, double>> points;
};

struct LineChart {
    std::string title;
    std::vector<Series> series;
};

struct BarGroup {
    std::string label;
    /// (series label, value).
    std::vector<std::pair<std::string, double>> bars;
};

struct BarChart {
    std::string title;
    std::vector<BarGroup> groups;
};

struct Filter {
    std::optional<models::Algo> algo;
};

struct GroupedCharts {
    /// File stem (no extension) and chart, in sorted stem order.
    std::vector<std::pair<std::string, LineChart>> lines;
    BarChart final_accuracy;
};

GroupedCharts group_records(const std::vector<bench::RunRecord> &records, Axis axis,
                            const Filter &filter = {});

inline constexpr double kWidth = 640.0;
inline constexpr double kHeight = 400.0;
inline constexpr double kMarginLeft = 60.0;
inline constexpr double kMarginRight = 140.0;
inline constexpr double kMarginTop = 40.0;
inline constexpr double kMarginBottom = 50.0;

/// Pixel coordinates of each series point, as written to the polyline.
std::vector<std::vector<std::pair<double, double>>>
line_chart_coordinates(const LineChart &chart);

std::string render_line_chart(const LineChart &chart);
std::string render_bar_chart(const BarChart &chart);

/**
 * Reads `csv`, writes one SVG per group plus "<axis>-final.svg" into
 * `out_dir` and returns the written paths. When the filter leaves nothing,
 * no file is written and a warning goes to stderr.
 */
std::vector<std::filesystem::path> plot(const std::filesystem::path &csv, Axis axis,
                                        const std::filesystem::path &out_dir,
                                        const Filter &filter = {});

} // namespace qhybrid::plot
