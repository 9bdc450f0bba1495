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
 * The three hybrid architectures (QuanNN, QCNN, QResNet) behind one
 * forward/backward contract, plus training and evaluation.
 *
 * Every model ends in a dense layer with kNumClasses outputs; softmax is
 * applied inside the loss.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qhybrid/data.hpp"
#include "qhybrid/nn.hpp"
#include "qhybrid/templates.hpp"
#include "qhybrid/tensor.hpp"

namespace qhybrid::models {

enum class Algo : std::uint8_t { QuanNN, QCNN, QResNet };

[[nodiscard]] std::string_view to_string(Algo algo);
/// Case-insensitive "QuanNN" / "QCNN" / "QResNet".
[[nodiscard]] Algo parse_algo(std::string_view text);

inline constexpr int kNumClasses = 4;
inline constexpr int kDefaultLayers = 4;

/// One grid cell. For QCNN, `n_layers` counts conv/pool stages.
struct ModelConfig {
    Algo algo{Algo::QuanNN};
    templates::EntanglerKind entangler{templates::EntanglerKind::BE};
    int n_layers{kDefaultLayers};
    int n_qubits{4};
    std::uint64_t seed{0};

    /// Throws ConfigError describing the first violated rule.
    void validate() const;

    bool operator==(const ModelConfig &) const = default;
};

/// Non-throwing form of ModelConfig::validate; fills `reason` on failure.
bool is_valid(const ModelConfig &config, std::string *reason = nullptr);

struct ImageShape {
    std::size_t rows{28};
    std::size_t cols{28};
};

/// One buffer per parameter tensor, in HybridModel::parameters() order.
using GradientSet = std::vector<std::vector<double>>;

struct SampleResult {
    double loss{0.0};
    Tensor logits;
};

class HybridModel {
  public:
    virtual ~HybridModel() = default;
    HybridModel(const HybridModel &) = delete;
    HybridModel &operator=(const HybridModel &) = delete;

    [[nodiscard]] const ModelConfig &config() const { return config_; }
    [[nodiscard]] const ImageShape &input_shape() const { return shape_; }
    [[nodiscard]] const templates::CircuitTemplate &circuit() const {
        return circuit_;
    }

    /// Logits for one row-major image.
    [[nodiscard]] virtual Tensor forward(std::span<const double> image) const = 0;

    /// Cross-entropy of one sample; adds d(loss)/d(param) into `grads`.
    /// Safe to call concurrently on distinct `grads`.
    virtual SampleResult backward(std::span<const double> image, int label,
                                  GradientSet &grads) const = 0;

    [[nodiscard]] std::vector<Tensor *> parameters();
    [[nodiscard]] const std::vector<Tensor> &tensors() const { return tensors_; }
    [[nodiscard]] const std::vector<std::string> &tensor_names() const {
        return names_;
    }
    [[nodiscard]] Tensor &tensor(std::string_view name);
    [[nodiscard]] GradientSet zero_gradients() const;
    [[nodiscard]] std::size_t parameter_count() const;

  protected:
    HybridModel(const ModelConfig &config, ImageShape shape,
                templates::CircuitTemplate circuit);

    std::size_t add_tensor(std::string name, Tensor t);
    void check_image(std::span<const double> image) const;

    ModelConfig config_;
    ImageShape shape_;
    templates::CircuitTemplate circuit_;
    std::vector<std::string> names_;
    std::vector<Tensor> tensors_;
};

/// Non-overlapping k x k tiling of an image zero-padded on the right and
/// bottom to a multiple of k.
struct PatchLayout {
    std::size_t k{0};
    std::size_t padded_rows{0};
    std::size_t padded_cols{0};
    std::size_t patch_rows{0};
    std::size_t patch_cols{0};
    /// Per patch, row-major indices into the padded image; patch order is
    /// row-major over the patch grid.
    std::vector<std::vector<std::size_t>> patches;
};

PatchLayout patch_layout(ImageShape shape, std::size_t k);

std::unique_ptr<HybridModel> build_quann(const ModelConfig &config,
                                         ImageShape shape = {});
std::unique_ptr<HybridModel> build_qcnn(const ModelConfig &config,
                                        ImageShape shape = {});
std::unique_ptr<HybridModel> build_qresnet(const ModelConfig &config,
                                           ImageShape shape = {});
/// Dispatches on config.algo.
std::unique_ptr<HybridModel> build_model(const ModelConfig &config,
                                         ImageShape shape = {});

/// Quanvolution feature map of a QuanNN model (patch-major, n_qubits
/// channels per patch). Throws ConfigError for other algorithms.
std::vector<double> quann_features(const HybridModel &model,
                                   std::span<const double> image);

/// Index of the first maximal logit.
[[nodiscard]] int predict(const Tensor &logits);

struct StepResult {
    double mean_loss{0.0};
    double accuracy{0.0};
};

/// Owns the optimizer state of one model.
class Trainer {
  public:
    Trainer(HybridModel &model, nn::AdamOptions options = {}, int workers = 1);

    /// Forward/backward over `batch` (indices into `data`), mean loss, one
    /// Adam step.
    StepResult train_step(const data::Dataset &data,
                          std::span<const std::size_t> batch);

    [[nodiscard]] const nn::Adam &optimizer() const { return adam_; }

  private:
    HybridModel &model_;
    nn::Adam adam_;
    int workers_;
};

/// Argmax accuracy over the whole dataset; no parameter updates.
double evaluate(const HybridModel &model, const data::Dataset &data,
                int workers = 1);

/// Versioned JSON record of config, input shape and every tensor.
void save_checkpoint(const HybridModel &model, const std::filesystem::path &path);
std::unique_ptr<HybridModel> load_checkpoint(const std::filesystem::path &path);

} // namespace qhybrid::models
