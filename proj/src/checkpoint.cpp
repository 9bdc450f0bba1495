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
#include <fstream>
#include <string>

#include "json.hpp"
#include "qhybrid/error.hpp"
#include "qhybrid/models.hpp"

namespace qhybrid::models {

namespace {

constexpr const char *kFormat = "qhybrid.checkpoint";
constexpr int kVersion = 1;

} // namespace

void save_checkpoint(const HybridModel &model, const std::filesystem::path &path) {
    const auto &cfg = model.config();
    nlohmann::json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["config"] = {{"algo", to_string(cfg.algo)},
                     {"entangler", templates::to_string(cfg.entangler)},
                     {"layers", cfg.n_layers},
                     {"qubits", cfg.n_qubits},
                     {"seed", cfg.seed}};
    doc["input"] = {{"rows", model.input_shape().rows},
                    {"cols", model.input_shape().cols}};
    auto &tensors = doc["tensors"] = nlohmann::json::array();
    for (std::size_t i = 0; i < model.tensors().size(); ++i) {
        const Tensor &t = model.tensors()[i];
        tensors.push_back({{"name", model.tensor_names()[i]},
                           {"shape", t.shape()},
                           {"values", std::vector<double>(t.values().begin(),
                                                          t.values().end())}});
    }
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw FormatError("cannot write checkpoint " + tmp);
        }
        out << doc.dump() << '\n';
        if (!out) {
            throw FormatError("write failed for checkpoint " + tmp);
        }
    }
    std::filesystem::rename(tmp, path);
}

std::unique_ptr<HybridModel> load_checkpoint(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open checkpoint " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
        if (doc.at("format").get<std::string>() != kFormat) {
            throw FormatError(path.string() + ": not a qhybrid checkpoint");
        }
        if (doc.at("version").get<int>() != kVersion) {
            throw FormatError(path.string() + ": unsupported checkpoint version " +
                              std::to_string(doc.at("version").get<int>()));
        }
        const auto &c = doc.at("config");
        ModelConfig cfg;
        cfg.algo = parse_algo(c.at("algo").get<std::string>());
        cfg.entangler = templates::parse_entangler(c.at("entangler").get<std::string>());
        cfg.n_layers = c.at("layers").get<int>();
        cfg.n_qubits = c.at("qubits").get<int>();
        cfg.seed = c.at("seed").get<std::uint64_t>();
        ImageShape shape{doc.at("input").at("rows").get<std::size_t>(),
                         doc.at("input").at("cols").get<std::size_t>()};
        auto model = build_model(cfg, shape);
        const auto &tensors = doc.at("tensors");
        if (tensors.size() != model->tensors().size()) {
            throw FormatError(path.string() + ": tensor count mismatch");
        }
        for (const auto &entry : tensors) {
            Tensor &t = model->tensor(entry.at("name").get<std::string>());
            const auto shape_in = entry.at("shape").get<std::vector<std::size_t>>();
            const auto values = entry.at("values").get<std::vector<double>>();
            if (shape_in != t.shape() || values.size() != t.size()) {
                throw FormatError(path.string() + ": tensor '" +
                                  entry.at("name").get<std::string>() +
                                  "' has an unexpected shape");
            }
            std::copy(values.begin(), values.end(), t.values().begin());
        }
        return model;
    } catch (const nlohmann::json::exception &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

} // namespace qhybrid::models
