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
#include "qhybrid/bench.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <mutex>
#include <tuple>

#include "qhybrid/error.hpp"
#include "qhybrid/parallel.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid::bench {

namespace fs = std::filesystem;
using models::Algo;
using models::ModelConfig;
using templates::EntanglerKind;

namespace {

constexpr std::uint64_t kBatchOrderStream = 0xba7c4;

template <typename T> std::vector<T> unique_in_order(const std::vector<T> &in) {
    std::vector<T> out;
    for (const auto &v : in) {
        if (std::find(out.begin(), out.end(), v) == out.end()) {
            out.push_back(v);
        }
    }
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_number(std::string_view field, const char *name, std::size_t line_no) {
    T value{};
    const auto *end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw FormatError("line " + std::to_string(line_no) + ": bad " + name +
                          " '" + std::string(field) + "'");
    }
    return value;
}

fs::path runs_dir(const fs::path &out_dir) { return out_dir / "runs"; }

bool is_complete(const std::vector<RunRecord> &records, int epochs) {
    return static_cast<int>(records.size()) == epochs;
}

} // namespace

ExperimentGrid paper_grid(std::vector<std::uint64_t> seeds) {
    return {{Algo::QuanNN, Algo::QCNN, Algo::QResNet},
            {EntanglerKind::RC, EntanglerKind::BE, EntanglerKind::SE},
            {1, 2, 3, 4, 5, 6},
            {4, 8, 9},
            std::move(seeds)};
}

GridExpansion expand_grid(const ExperimentGrid &grid) {
    if (grid.algos.empty() || grid.entanglers.empty() || grid.layer_counts.empty() ||
        grid.qubit_counts.empty() || grid.seeds.empty()) {
        throw ConfigError("experiment grid has an empty axis");
    }
    GridExpansion out;
    for (const Algo algo : unique_in_order(grid.algos)) {
        for (const EntanglerKind ent : unique_in_order(grid.entanglers)) {
            for (const int qubits : unique_in_order(grid.qubit_counts)) {
                for (const int layers : unique_in_order(grid.layer_counts)) {
                    ModelConfig cfg{algo, ent, layers, qubits, 0};
                    std::string reason;
                    if (!models::is_valid(cfg, &reason)) {
                        out.skipped.push_back(
                            fmt::format("{}-{}-L{}-q{}: {}", models::to_string(algo),
                                        templates::to_string(ent), layers, qubits,
                                        reason));
                        continue;
                    }
                    for (const auto seed : unique_in_order(grid.seeds)) {
                        cfg.seed = seed;
                        out.cells.push_back(cfg);
                    }
                }
            }
        }
    }
    if (out.cells.empty()) {
        throw ConfigError("experiment grid has no valid cells");
    }
    return out;
}

std::string run_id(const ModelConfig &config) {
    return fmt::format("{}-{}-L{}-q{}-s{}", models::to_string(config.algo),
                       templates::to_string(config.entangler), config.n_layers,
                       config.n_qubits, config.seed);
}

std::string format_record(const RunRecord &r) {
    // {} on a double prints the shortest representation that round-trips.
    return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", r.run_id,
                       models::to_string(r.algo), templates::to_string(r.entangler),
                       r.layers, r.qubits, r.seed, r.epoch, r.train_loss,
                       r.train_acc, r.test_acc, r.wall_ms);
}

RunRecord parse_record(std::string_view line, std::size_t line_no) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    const auto f = split_fields(line);
    if (f.size() != 11) {
        throw FormatError("line " + std::to_string(line_no) + ": expected 11 fields, got " +
                          std::to_string(f.size()));
    }
    RunRecord r;
    r.run_id = std::string(f[0]);
    if (r.run_id.empty()) {
        throw FormatError("line " + std::to_string(line_no) + ": empty run_id");
    }
    try {
        r.algo = models::parse_algo(f[1]);
        r.entangler = templates::parse_entangler(f[2]);
    } catch (const ConfigError &e) {
        throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
    r.layers = parse_number<int>(f[3], "layers", line_no);
    r.qubits = parse_number<int>(f[4], "qubits", line_no);
    r.seed = parse_number<std::uint64_t>(f[5], "seed", line_no);
    r.epoch = parse_number<int>(f[6], "epoch", line_no);
    r.train_loss = parse_number<double>(f[7], "train_loss", line_no);
    r.train_acc = parse_number<double>(f[8], "train_acc", line_no);
    r.test_acc = parse_number<double>(f[9], "test_acc", line_no);
    r.wall_ms = parse_number<std::int64_t>(f[10], "wall_ms", line_no);
    for (const double acc : {r.train_acc, r.test_acc}) {
        if (acc < 0.0 || acc > 1.0) {
            throw FormatError("line " + std::to_string(line_no) +
                              ": accuracy outside [0, 1]");
        }
    }
    return r;
}

std::vector<RunRecord> read_csv(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError(path.string() + ":1: missing header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != kCsvHeader) {
        throw FormatError(path.string() + ":1: unexpected header");
    }
    std::vector<RunRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            records.push_back(parse_record(line, line_no));
        } catch (const FormatError &e) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " +
                              e.what());
        }
    }
    return records;
}

std::vector<RunRecord> run(const ModelConfig &config, const data::RawDataset &raw,
                           const TrainingOptions &options, const fs::path &out_dir,
                           bool overwrite, const RecordSink &on_record) {
    config.validate();
    if (options.epochs < 1 || options.batch_size < 1 || options.n_train < 1 ||
        options.n_test < 1) {
        throw ConfigError("epochs, batch size and sample counts must be positive");
    }
    const std::string id = run_id(config);
    const fs::path dir = runs_dir(out_dir);
    const fs::path final_path = dir / (id + ".csv");
    const fs::path partial_path = dir / (id + ".csv.partial");
    try {
        fs::create_directories(dir);
        if (!overwrite && fs::exists(final_path)) {
            auto existing = read_csv(final_path);
            if (is_complete(existing, options.epochs)) {
                return existing;
            }
        }

        const auto split = data::filter_and_split(raw, data::kPaperClasses,
                                                  options.n_train, options.n_test,
                                                  config.seed);
        auto model = models::build_model(config, {raw.rows, raw.cols});
        models::Trainer trainer(*model, {.learning_rate = options.learning_rate},
                                options.workers);

        std::ofstream csv(partial_path, std::ios::trunc);
        if (!csv) {
            throw FormatError("cannot write " + partial_path.string());
        }
        csv << kCsvHeader << '\n' << std::flush;
        std::ofstream batch_log;
        if (options.per_batch_log) {
            batch_log.open(dir / (id + ".batches.csv"), std::ios::trunc);
            batch_log << "run_id,epoch,batch,loss,acc\n";
        }

        const auto start = std::chrono::steady_clock::now();
        std::vector<std::size_t> order(split.train.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng order_rng = Rng::stream(config.seed, kBatchOrderStream);
        std::vector<RunRecord> records;
        for (int epoch = 1; epoch <= options.epochs; ++epoch) {
            order_rng.shuffle(order);
            double loss_sum = 0.0;
            double correct = 0.0;
            std::size_t batch_no = 0;
            for (std::size_t b = 0; b < order.size(); b += options.batch_size) {
                const std::size_t len = std::min(options.batch_size, order.size() - b);
                const std::span<const std::size_t> batch(order.data() + b, len);
                const auto step = trainer.train_step(split.train, batch);
                loss_sum += step.mean_loss * static_cast<double>(len);
                correct += step.accuracy * static_cast<double>(len);
                if (batch_log.is_open()) {
                    batch_log << fmt::format("{},{},{},{},{}\n", id, epoch, ++batch_no,
                                             step.mean_loss, step.accuracy)
                              << std::flush;
                }
            }
            RunRecord r;
            r.run_id = id;
            r.algo = config.algo;
            r.entangler = config.entangler;
            r.layers = config.n_layers;
            r.qubits = config.n_qubits;
            r.seed = config.seed;
            r.epoch = epoch;
            const auto n = static_cast<double>(order.size());
            r.train_loss = loss_sum / n;
            r.train_acc = correct / n;
            r.test_acc = models::evaluate(*model, split.test, options.workers);
            r.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - start)
                            .count();
            csv << format_record(r) << '\n' << std::flush;
            if (!csv) {
                throw FormatError("write failed for " + partial_path.string());
            }
            if (on_record) {
                on_record(r);
            }
            records.push_back(std::move(r));
        }
        csv.close();
        fs::rename(partial_path, final_path);
        return records;
    } catch (const std::exception &e) {
        throw Error("run " + id + ": " + e.what());
    }
}

std::vector<RunRecord> run_grid(const std::vector<ModelConfig> &cells,
                                const data::RawDataset &raw,
                                const TrainingOptions &options,
                                const fs::path &out_dir, bool overwrite,
                                int cell_workers, const RecordSink &on_record) {
    std::vector<std::vector<RunRecord>> per_cell(cells.size());
    TrainingOptions inner = options;
    if (cell_workers > 1) {
        inner.workers = 1;
    }
    std::mutex sink_mutex;
    RecordSink sink;
    if (on_record) {
        sink = [&](const RunRecord &r) {
            std::lock_guard lock(sink_mutex);
            on_record(r);
        };
    }
    parallel_for(cells.size(), cell_workers, [&](std::size_t i) {
        per_cell[i] = run(cells[i], raw, inner, out_dir, overwrite, sink);
    });
    std::vector<RunRecord> all;
    for (auto &records : per_cell) {
        all.insert(all.end(), records.begin(), records.end());
    }
    return all;
}

fs::path merge_results(const fs::path &out_dir) {
    std::vector<RunRecord> all;
    const fs::path dir = runs_dir(out_dir);
    if (fs::exists(dir)) {
        std::vector<fs::path> files;
        for (const auto &entry : fs::directory_iterator(dir)) {
            const auto name = entry.path().filename().string();
            if (entry.path().extension() == ".csv" &&
                name.find(".batches.") == std::string::npos) {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
        for (const auto &f : files) {
            auto records = read_csv(f);
            all.insert(all.end(), records.begin(), records.end());
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const RunRecord &a, const RunRecord &b) {
        return std::tie(a.run_id, a.epoch) < std::tie(b.run_id, b.epoch);
    });
    fs::create_directories(out_dir);
    const fs::path path = out_dir / "results.csv";
    const fs::path tmp = out_dir / "results.csv.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) {
            throw FormatError("cannot write " + tmp.string());
        }
        out << kCsvHeader << '\n';
        for (const auto &r : all) {
            out << format_record(r) << '\n';
        }
        if (!out) {
            throw FormatError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path);
    return path;
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw DataError("median of an empty sample");
    }
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<double> final_test_accuracies(
    const std::vector<RunRecord> &records,
    const std::function<bool(const RunRecord &)> &keep) {
    std::map<std::string, const RunRecord *> last;
    for (const auto &r : records) {
        if (!keep(r)) {
            continue;
        }
        auto &slot = last[r.run_id];
        if (slot == nullptr || r.epoch > slot->epoch) {
            slot = &r;
        }
    }
    std::vector<double> out;
    out.reserve(last.size());
    for (const auto &[id, r] : last) {
        out.push_back(r->test_acc);
    }
    return out;
}

} // namespace qhybrid::bench
