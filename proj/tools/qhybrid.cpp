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
// Command line front end: train one configuration, sweep a grid, or plot
// a results CSV.

#include <fmt/format.h>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qhybrid/bench.hpp"
#include "qhybrid/data.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/plot.hpp"

namespace fs = std::filesystem;
using namespace qhybrid;

namespace {

struct CommonFlags {
    bench::TrainingOptions training;
    std::string data_dir = QHYBRID_DEFAULT_DATA_DIR;
    std::string out = "out";
    int workers = 1;
    bool overwrite = false;
};

void add_common(CLI::App *cmd, CommonFlags &f) {
    cmd->add_option("--epochs", f.training.epochs, "Training epochs")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--batch", f.training.batch_size, "Batch size")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lr", f.training.learning_rate, "Adam learning rate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--train-samples", f.training.n_train, "Balanced training samples")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--test-samples", f.training.n_test, "Balanced test samples")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--data-dir", f.data_dir, "Directory with MNIST IDX files")
        ->capture_default_str();
    cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
    cmd->add_flag("--overwrite", f.overwrite, "Retrain runs that already completed");
    cmd->add_flag("--per-batch", f.training.per_batch_log,
                  "Also log loss and accuracy after every batch");
}

void print_record(const bench::RunRecord &r) {
    fmt::print("{} epoch {} train_loss {:.4f} train_acc {:.3f} test_acc {:.3f} ({} ms)\n",
               r.run_id, r.epoch, r.train_loss, r.train_acc, r.test_acc, r.wall_ms);
    std::fflush(stdout);
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::vector<std::string> &items, Parse parse) {
    std::vector<T> out;
    for (const auto &item : items) {
        out.push_back(parse(item));
    }
    return out;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Hybrid quantum-classical image classifiers on a statevector simulator"};
    app.require_subcommand(1);

    CommonFlags run_flags;
    std::string run_algo = "QuanNN";
    std::string run_entangler = "BE";
    int run_layers = 4;
    int run_qubits = 4;
    std::uint64_t run_seed = 0;
    auto *run_cmd = app.add_subcommand("run", "Train a single configuration");
    run_cmd->add_option("--algo", run_algo, "QuanNN, QCNN or QResNet")->capture_default_str();
    run_cmd->add_option("--entangler", run_entangler, "RC, BE or SE")->capture_default_str();
    run_cmd->add_option("--layers", run_layers, "Entangling layers (QCNN: stages)")
        ->capture_default_str();
    run_cmd->add_option("--qubits", run_qubits, "Circuit width")->capture_default_str();
    run_cmd->add_option("--seed", run_seed, "Seed for data split, init and order")
        ->capture_default_str();
    run_cmd->add_option("--workers", run_flags.workers, "Threads over samples")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_common(run_cmd, run_flags);

    CommonFlags grid_flags;
    std::vector<std::string> grid_algos{"QuanNN", "QCNN", "QResNet"};
    std::vector<std::string> grid_entanglers{"RC", "BE", "SE"};
    std::vector<int> grid_layers{1, 2, 3, 4, 5, 6};
    std::vector<int> grid_qubits{4, 8, 9};
    std::vector<std::uint64_t> grid_seeds{0, 1, 2};
    auto *grid_cmd = app.add_subcommand("grid", "Sweep every valid configuration");
    grid_cmd->add_option("--algo", grid_algos, "Algorithms")->capture_default_str();
    grid_cmd->add_option("--entangler", grid_entanglers, "Entanglers")->capture_default_str();
    grid_cmd->add_option("--layers", grid_layers, "Layer counts")->capture_default_str();
    grid_cmd->add_option("--qubits", grid_qubits, "Qubit counts")->capture_default_str();
    grid_cmd->add_option("--seeds,--seed", grid_seeds, "Seeds")->capture_default_str();
    grid_cmd->add_option("--workers", grid_flags.workers, "Grid cells trained concurrently")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_common(grid_cmd, grid_flags);

    std::string plot_csv = "out/results.csv";
    std::string plot_out = "out/plots";
    std::string plot_by = "entangler";
    std::string plot_algo;
    auto *plot_cmd = app.add_subcommand("plot", "Render SVG accuracy charts");
    plot_cmd->add_option("--csv", plot_csv, "Results CSV")->capture_default_str();
    plot_cmd->add_option("--out", plot_out, "Directory for SVG files")->capture_default_str();
    plot_cmd->add_option("--by", plot_by, "Series axis: entangler, layers or qubits")
        ->capture_default_str();
    plot_cmd->add_option("--algo", plot_algo, "Only plot this algorithm");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const models::ModelConfig cfg{models::parse_algo(run_algo),
                                          templates::parse_entangler(run_entangler),
                                          run_layers, run_qubits, run_seed};
            cfg.validate();
            run_flags.training.workers = run_flags.workers;
            const auto raw = data::load_mnist_dir(run_flags.data_dir);
            const auto records = bench::run(cfg, raw, run_flags.training, run_flags.out,
                                            run_flags.overwrite, print_record);
            const auto csv = bench::merge_results(run_flags.out);
            fmt::print("{}: final test_acc {:.3f}; results in {}\n", bench::run_id(cfg),
                       records.back().test_acc, csv.string());
        } else if (grid_cmd->parsed()) {
            bench::ExperimentGrid grid;
            grid.algos = parse_list<models::Algo>(
                grid_algos, [](const std::string &s) { return models::parse_algo(s); });
            grid.entanglers = parse_list<templates::EntanglerKind>(
                grid_entanglers,
                [](const std::string &s) { return templates::parse_entangler(s); });
            grid.layer_counts = grid_layers;
            grid.qubit_counts = grid_qubits;
            grid.seeds = grid_seeds;
            const auto expansion = bench::expand_grid(grid);
            for (const auto &msg : expansion.skipped) {
                fmt::print(stderr, "skip: {}\n", msg);
            }
            fmt::print("{} runs\n", expansion.cells.size());
            std::fflush(stdout);
            const auto raw = data::load_mnist_dir(grid_flags.data_dir);
            bench::run_grid(expansion.cells, raw, grid_flags.training, grid_flags.out,
                            grid_flags.overwrite, grid_flags.workers, print_record);
            const auto csv = bench::merge_results(grid_flags.out);
            fmt::print("results in {}\n", csv.string());
        } else if (plot_cmd->parsed()) {
            plot::Filter filter;
            if (!plot_algo.empty()) {
                filter.algo = models::parse_algo(plot_algo);
            }
            const auto files =
                plot::plot(plot_csv, plot::parse_axis(plot_by), plot_out, filter);
            for (const auto &f : files) {
                fmt::print("{}\n", f.string());
            }
        }
    } catch (const std::exception &e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
