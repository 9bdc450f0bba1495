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
 * Experiment grid expansion, training runs with per-epoch CSV records,
 * and result aggregation.
 *
 * Output layout under an output directory:
 *   runs/<run_id>.csv           one run, appended epoch by epoch while
 *                               training (as <run_id>.csv.partial) and
 *                               renamed into place when complete
 *   runs/<run_id>.batches.csv   optional per-batch log
 *   results.csv                 all completed runs, ordered by run_id
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "qhybrid/data.hpp"
#include "qhybrid/models.hpp"

namespace qhybrid::bench {

inline constexpr std::string_view kCsvHeader =
    "run_id,algo,entangler,layers,qubits,seed,epoch,train_loss,train_acc,"
    "test_acc,wall_ms";

struct TrainingOptions {
    int epochs{5};
    std::size_t batch_size{5};
    double learning_rate{0.01};
    std::size_t n_train{100};
    std::size_t n_test{100};
    /// Sample-level threads inside one run.
    int workers{1};
    bool per_batch_log{false};
};

struct ExperimentGrid {
    std::vector<models::Algo> algos;
    std::vector<templates::EntanglerKind> entanglers;
    std::vector<int> layer_counts;
    std::vector<int> qubit_counts;
    std::vector<std::uint64_t> seeds;
};

/// All three algorithms and entanglers, layers 1..6, qubits {4, 8, 9}.
ExperimentGrid paper_grid(std::vector<std::uint64_t> seeds = {0, 1, 2});

struct GridExpansion {
    std::vector<models::ModelConfig> cells;
    /// One message per rejected combination.
    std::vector<std::string> skipped;
};

/// Cartesian product in (algo, entangler, qubits, layers, seed) order with
/// invalid cells dropped. Duplicate axis values are ignored. Throws
/// ConfigError on an empty axis or when nothing valid remains.
GridExpansion expand_grid(const ExperimentGrid &grid);

struct RunRecord {
    std::string run_id;
    models::Algo algo{models::Algo::QuanNN};
    templates::EntanglerKind entangler{templates::EntanglerKind::BE};
    int layers{0};
    int qubits{0};
    std::uint64_t seed{0};
    int epoch{0};
    double train_loss{0.0};
    double train_acc{0.0};
    double test_acc{0.0};
    std::int64_t wall_ms{0};

    bool operator==(const RunRecord &) const = default;
};

/// e.g. "QuanNN-BE-L4-q4-s0".
std::string run_id(const models::ModelConfig &config);

std::string format_record(const RunRecord &record);
/// Throws FormatError naming `line_no` on malformed input.
RunRecord parse_record(std::string_view line, std::size_t line_no);

/// Reads a CSV with kCsvHeader; errors carry "<path>:<line>".
std::vector<RunRecord> read_csv(const std::filesystem::path &path);

/// Progress callback: (record just written).
using RecordSink = std::function<void(const RunRecord &)>;

/**
 * Trains one configuration and writes one record per epoch.
 *
 * The split is drawn from `raw` with the config's seed. A run whose
 * complete CSV already exists is returned from disk unless `overwrite`
 * is set; a partial one is restarted.
 */
std::vector<RunRecord> run(const models::ModelConfig &config,
                           const data::RawDataset &raw,
                           const TrainingOptions &options,
                           const std::filesystem::path &out_dir,
                           bool overwrite = false,
                           const RecordSink &on_record = {});

/// Runs every expanded cell, up to `cell_workers` cells at a time.
std::vector<RunRecord> run_grid(const std::vector<models::ModelConfig> &cells,
                                const data::RawDataset &raw,
                                const TrainingOptions &options,
                                const std::filesystem::path &out_dir,
                                bool overwrite, int cell_workers,
                                const RecordSink &on_record = {});

/// Rebuilds results.csv from every completed run file, sorted by run_id
/// then epoch, and returns its path.
std::filesystem::path merge_results(const std::filesystem::path &out_dir);

/// Median of a non-empty sample (mean of the middle pair for even sizes).
double median(std::vector<double> values);

/// Final-epoch test accuracy of every run in `records` matching `keep`,
/// one value per run_id.
std::vector<double> final_test_accuracies(
    const std::vector<RunRecord> &records,
    const std::function<bool(const RunRecord &)> &keep);

} // namespace qhybrid::bench
