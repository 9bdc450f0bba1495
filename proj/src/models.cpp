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
#include "qhybrid/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

#include "qhybrid/error.hpp"
#include "qhybrid/grad.hpp"
#include "qhybrid/parallel.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid::models {

using templates::CircuitTemplate;
using templates::EntanglerKind;

namespace {

// Rng stream tags, one per initialised tensor.
enum InitStream : std::uint64_t {
    kQuantumStream = 1,
    kHeadStream = 2,
    kConvStream = 3,
    kEncoderStream = 4,
};

Tensor as_image(std::span<const double> image, ImageShape shape) {
    return Tensor({shape.rows, shape.cols, 1},
                  std::vector<double>(image.begin(), image.end()));
}

Tensor as_vector(std::span<const double> v) {
    return Tensor({v.size()}, std::vector<double>(v.begin(), v.end()));
}

void init_quantum(Tensor &t, std::uint64_t seed) {
    Rng rng = Rng::stream(seed, kQuantumStream);
    nn::init_uniform(t, 0.0, std::numbers::pi, rng);
}

void init_dense(Tensor &weight, Tensor &bias, std::uint64_t seed,
                std::uint64_t stream) {
    Rng rng = Rng::stream(seed, stream);
    const std::size_t fan_in = weight.dim(1);
    nn::init_fan_in(weight, fan_in, rng);
    nn::init_fan_in(bias, fan_in, rng);
}

// Adds sum_o upstream[o] * J(o, j) into out[j].
void accumulate_vjp(const grad::Jacobian &jac, std::span<const double> upstream,
                    std::span<double> out) {
    for (std::size_t o = 0; o < jac.rows; ++o) {
        const double g = upstream[o];
        for (std::size_t j = 0; j < jac.cols; ++j) {
            out[j] += g * jac(o, j);
        }
    }
}

CircuitTemplate encoded_entangler(const ModelConfig &config) {
    return templates::compose(
        templates::angle_encoding(config.n_qubits),
        templates::entangler(config.entangler, config.n_qubits, config.n_layers,
                             config.seed));
}

void require_algo(const ModelConfig &config, Algo algo) {
    config.validate();
    if (config.algo != algo) {
        throw ConfigError("config is for " + std::string(to_string(config.algo)) +
                          ", not " + std::string(to_string(algo)));
    }
}

// ---------------------------------------------------------------- QuanNN

class QuanNN final : public HybridModel {
  public:
    QuanNN(const ModelConfig &config, ImageShape shape)
        : HybridModel(config, shape, encoded_entangler(config)),
          layout_(patch_layout(shape, static_cast<std::size_t>(std::lround(
                                          std::sqrt(config.n_qubits))))) {
        const auto n = static_cast<std::size_t>(config.n_qubits);
        const std::size_t features = layout_.patches.size() * n;
        quantum_ = add_tensor("quantum",
                              Tensor({static_cast<std::size_t>(circuit_.n_params)}));
        head_w_ = add_tensor("head.weight",
                             Tensor({static_cast<std::size_t>(kNumClasses), features}));
        head_b_ = add_tensor("head.bias", Tensor({static_cast<std::size_t>(kNumClasses)}));
        init_quantum(tensors_[quantum_], config.seed);
        init_dense(tensors_[head_w_], tensors_[head_b_], config.seed, kHeadStream);
    }

    struct Quanvolution {
        std::vector<std::vector<double>> unique_inputs;
        std::vector<std::size_t> patch_to_unique;
        std::vector<double> features;
    };

    // Patches with identical pixels share one circuit evaluation.
    Quanvolution quanvolve(std::span<const double> image) const {
        check_image(image);
        Quanvolution q;
        std::map<std::vector<double>, std::size_t> seen;
        const std::size_t n_patches = layout_.patches.size();
        q.patch_to_unique.resize(n_patches);
        for (std::size_t p = 0; p < n_patches; ++p) {
            std::vector<double> inputs;
            inputs.reserve(layout_.patches[p].size());
            for (const std::size_t idx : layout_.patches[p]) {
                const std::size_t y = idx / layout_.padded_cols;
                const std::size_t x = idx % layout_.padded_cols;
                inputs.push_back(y < shape_.rows && x < shape_.cols
                                     ? image[y * shape_.cols + x]
                                     : 0.0);
            }
            const auto [it, inserted] = seen.try_emplace(inputs, q.unique_inputs.size());
            if (inserted) {
                q.unique_inputs.push_back(std::move(inputs));
            }
            q.patch_to_unique[p] = it->second;
        }
        grad::CircuitEvaluator evaluator(circuit_);
        std::vector<std::vector<double>> outputs;
        outputs.reserve(q.unique_inputs.size());
        for (const auto &inputs : q.unique_inputs) {
            outputs.push_back(evaluator.forward(tensors_[quantum_].values(), inputs));
        }
        const auto n = static_cast<std::size_t>(config_.n_qubits);
        q.features.resize(n_patches * n);
        for (std::size_t p = 0; p < n_patches; ++p) {
            const auto &out = outputs[q.patch_to_unique[p]];
            std::copy(out.begin(), out.end(), q.features.begin() + static_cast<std::ptrdiff_t>(p * n));
        }
        return q;
    }

    Tensor forward(std::span<const double> image) const override {
        const auto q = quanvolve(image);
        return nn::dense_forward(as_vector(q.features), tensors_[head_w_],
                                 tensors_[head_b_]);
    }

    SampleResult backward(std::span<const double> image, int label,
                          GradientSet &grads) const override {
        const auto q = quanvolve(image);
        const Tensor features = as_vector(q.features);
        Tensor logits = nn::dense_forward(features, tensors_[head_w_], tensors_[head_b_]);
        auto loss = nn::softmax_cross_entropy(logits, static_cast<std::size_t>(label));
        const Tensor g_features =
            nn::dense_backward(features, tensors_[head_w_], loss.grad_logits,
                               grads[head_w_], grads[head_b_]);

        const auto n = static_cast<std::size_t>(config_.n_qubits);
        std::vector<std::vector<double>> upstream(q.unique_inputs.size(),
                                                  std::vector<double>(n, 0.0));
        for (std::size_t p = 0; p < q.patch_to_unique.size(); ++p) {
            auto &u = upstream[q.patch_to_unique[p]];
            for (std::size_t o = 0; o < n; ++o) {
                u[o] += g_features[p * n + o];
            }
        }
        grad::CircuitEvaluator evaluator(circuit_);
        for (std::size_t u = 0; u < q.unique_inputs.size(); ++u) {
            const auto jac = evaluator.param_shift(tensors_[quantum_].values(),
                                                   q.unique_inputs[u], false);
            accumulate_vjp(jac.params, upstream[u], grads[quantum_]);
        }
        return {loss.loss, std::move(logits)};
    }

  private:
    PatchLayout layout_;
    std::size_t quantum_{0}, head_w_{0}, head_b_{0};
};

// ---------------------------------------------------------------- QCNN

class QCNN final : public HybridModel {
  public:
    QCNN(const ModelConfig &config, ImageShape shape)
        : HybridModel(config, shape,
                      templates::compose(templates::angle_encoding(config.n_qubits),
                                         templates::qcnn_block(config.n_qubits,
                                                               config.n_layers))) {
        // 4 qubits pool to a 2x2 grid, 8 qubits to 4x2.
        grid_rows_ = config.n_qubits == 4 ? 2 : 4;
        grid_cols_ = 2;
        // The image is padded by one pixel so the 3x3 conv keeps its size.
        if (shape.rows % grid_rows_ != 0 || shape.cols % grid_cols_ != 0) {
            throw ConfigError("QCNN input " + std::to_string(shape.rows) + "x" +
                              std::to_string(shape.cols) +
                              " cannot be pooled onto a " +
                              std::to_string(grid_rows_) + "x" +
                              std::to_string(grid_cols_) + " grid");
        }
        window_h_ = shape.rows / grid_rows_;
        window_w_ = shape.cols / grid_cols_;
        conv_k_ = add_tensor("conv.kernel", Tensor({3, 3, 1, 1}));
        conv_b_ = add_tensor("conv.bias", Tensor({1}));
        quantum_ = add_tensor("quantum",
                              Tensor({static_cast<std::size_t>(circuit_.n_params)}));
        const std::size_t width = circuit_.readout.wires.size();
        head_w_ = add_tensor("head.weight",
                             Tensor({static_cast<std::size_t>(kNumClasses), width}));
        head_b_ = add_tensor("head.bias", Tensor({static_cast<std::size_t>(kNumClasses)}));

        Rng conv_rng = Rng::stream(config.seed, kConvStream);
        nn::init_fan_in(tensors_[conv_k_], 9, conv_rng);
        nn::init_fan_in(tensors_[conv_b_], 9, conv_rng);
        init_quantum(tensors_[quantum_], config.seed);
        init_dense(tensors_[head_w_], tensors_[head_b_], config.seed, kHeadStream);
    }

    struct Activations {
        Tensor padded, conv, relu, pooled, squashed;
        std::vector<double> quantum;
        Tensor logits;
    };

    Activations run(std::span<const double> image) const {
        check_image(image);
        Activations a;
        a.padded = nn::pad2d(as_image(image, shape_), 1);
        a.conv = nn::conv2d_forward(a.padded, tensors_[conv_k_], 1);
        nn::add_channel_bias(a.conv, tensors_[conv_b_]);
        a.relu = nn::relu(a.conv);
        a.pooled = nn::avgpool2d(a.relu, window_h_, window_w_);
        a.squashed = nn::sigmoid(as_vector(a.pooled.values()));
        grad::CircuitEvaluator evaluator(circuit_);
        a.quantum = evaluator.forward(tensors_[quantum_].values(), a.squashed.values());
        a.logits = nn::dense_forward(as_vector(a.quantum), tensors_[head_w_],
                                     tensors_[head_b_]);
        return a;
    }

    Tensor forward(std::span<const double> image) const override {
        return run(image).logits;
    }

    SampleResult backward(std::span<const double> image, int label,
                          GradientSet &grads) const override {
        auto a = run(image);
        auto loss = nn::softmax_cross_entropy(a.logits, static_cast<std::size_t>(label));
        const Tensor g_q = nn::dense_backward(as_vector(a.quantum), tensors_[head_w_],
                                              loss.grad_logits, grads[head_w_],
                                              grads[head_b_]);
        grad::CircuitEvaluator evaluator(circuit_);
        const auto jac = evaluator.param_shift(tensors_[quantum_].values(),
                                               a.squashed.values(), true);
        accumulate_vjp(jac.params, g_q.values(), grads[quantum_]);
        Tensor g_s({a.squashed.size()});
        accumulate_vjp(jac.inputs, g_q.values(), g_s.values());

        const Tensor g_pooled_flat = nn::sigmoid_backward(a.squashed, g_s);
        const Tensor g_pooled(a.pooled.shape(),
                              std::vector<double>(g_pooled_flat.values().begin(),
                                                  g_pooled_flat.values().end()));
        const Tensor g_relu =
            nn::avgpool2d_backward(g_pooled, a.relu.shape(), window_h_, window_w_);
        const Tensor g_conv = nn::relu_backward(a.conv, g_relu);
        nn::channel_bias_backward(g_conv, grads[conv_b_]);
        nn::conv2d_backward(a.padded, tensors_[conv_k_], 1, g_conv, grads[conv_k_]);
        return {loss.loss, std::move(a.logits)};
    }

  private:
    std::size_t grid_rows_{0}, grid_cols_{0}, window_h_{0}, window_w_{0};
    std::size_t conv_k_{0}, conv_b_{0}, quantum_{0}, head_w_{0}, head_b_{0};
};

// ---------------------------------------------------------------- QResNet

class QResNet final : public HybridModel {
  public:
    QResNet(const ModelConfig &config, ImageShape shape)
        : HybridModel(config, shape, encoded_entangler(config)) {
        if (shape.rows < 4 || shape.cols < 4 || (shape.rows - 2) % 2 != 0 ||
            (shape.cols - 2) % 2 != 0) {
            throw ConfigError("QResNet input " + std::to_string(shape.rows) + "x" +
                              std::to_string(shape.cols) +
                              " does not give an even conv output");
        }
        const std::size_t features = ((shape.rows - 2) / 2) * ((shape.cols - 2) / 2);
        const auto n = static_cast<std::size_t>(config.n_qubits);
        conv_k_ = add_tensor("conv.kernel", Tensor({3, 3, 1, 1}));
        conv_b_ = add_tensor("conv.bias", Tensor({1}));
        enc_w_ = add_tensor("encoder.weight", Tensor({n, features}));
        enc_b_ = add_tensor("encoder.bias", Tensor({n}));
        quantum_ = add_tensor("quantum",
                              Tensor({static_cast<std::size_t>(circuit_.n_params)}));
        head_w_ = add_tensor("head.weight",
                             Tensor({static_cast<std::size_t>(kNumClasses), n}));
        head_b_ = add_tensor("head.bias", Tensor({static_cast<std::size_t>(kNumClasses)}));

        Rng conv_rng = Rng::stream(config.seed, kConvStream);
        nn::init_fan_in(tensors_[conv_k_], 9, conv_rng);
        nn::init_fan_in(tensors_[conv_b_], 9, conv_rng);
        init_dense(tensors_[enc_w_], tensors_[enc_b_], config.seed, kEncoderStream);
        init_quantum(tensors_[quantum_], config.seed);
        init_dense(tensors_[head_w_], tensors_[head_b_], config.seed, kHeadStream);
    }

    struct Activations {
        Tensor image, conv, relu, pooled, flat, encoded, features;
        std::vector<double> quantum;
        Tensor residual, logits;
    };

    Activations run(std::span<const double> image) const {
        check_image(image);
        Activations a;
        a.image = as_image(image, shape_);
        a.conv = nn::conv2d_forward(a.image, tensors_[conv_k_], 1);
        nn::add_channel_bias(a.conv, tensors_[conv_b_]);
        a.relu = nn::relu(a.conv);
        a.pooled = nn::avgpool2d(a.relu, 2);
        a.flat = as_vector(a.pooled.values());
        a.encoded = nn::dense_forward(a.flat, tensors_[enc_w_], tensors_[enc_b_]);
        a.features = nn::sigmoid(a.encoded);
        grad::CircuitEvaluator evaluator(circuit_);
        a.quantum = evaluator.forward(tensors_[quantum_].values(), a.features.values());
        a.residual = Tensor({a.features.size()});
        for (std::size_t i = 0; i < a.features.size(); ++i) {
            a.residual[i] = a.features[i] + a.quantum[i];
        }
        a.logits = nn::dense_forward(a.residual, tensors_[head_w_], tensors_[head_b_]);
        return a;
    }

    Tensor forward(std::span<const double> image) const override {
        return run(image).logits;
    }

    SampleResult backward(std::span<const double> image, int label,
                          GradientSet &grads) const override {
        auto a = run(image);
        auto loss = nn::softmax_cross_entropy(a.logits, static_cast<std::size_t>(label));
        const Tensor g_r = nn::dense_backward(a.residual, tensors_[head_w_],
                                              loss.grad_logits, grads[head_w_],
                                              grads[head_b_]);
        grad::CircuitEvaluator evaluator(circuit_);
        const auto jac = evaluator.param_shift(tensors_[quantum_].values(),
                                               a.features.values(), true);
        accumulate_vjp(jac.params, g_r.values(), grads[quantum_]);
        // Skip path plus the path through the circuit inputs.
        Tensor g_f = g_r;
        accumulate_vjp(jac.inputs, g_r.values(), g_f.values());

        const Tensor g_enc = nn::sigmoid_backward(a.features, g_f);
        const Tensor g_flat = nn::dense_backward(a.flat, tensors_[enc_w_], g_enc,
                                                 grads[enc_w_], grads[enc_b_]);
        const Tensor g_pooled(a.pooled.shape(),
                              std::vector<double>(g_flat.values().begin(),
                                                  g_flat.values().end()));
        const Tensor g_relu = nn::avgpool2d_backward(g_pooled, a.relu.shape(), 2, 2);
        const Tensor g_conv = nn::relu_backward(a.conv, g_relu);
        nn::channel_bias_backward(g_conv, grads[conv_b_]);
        nn::conv2d_backward(a.image, tensors_[conv_k_], 1, g_conv, grads[conv_k_]);
        return {loss.loss, std::move(a.logits)};
    }

  private:
    std::size_t conv_k_{0}, conv_b_{0}, enc_w_{0}, enc_b_{0};
    std::size_t quantum_{0}, head_w_{0}, head_b_{0};
};

} // namespace

std::string_view to_string(Algo algo) {
    switch (algo) {
    case Algo::QuanNN:
        return "QuanNN";
    case Algo::QCNN:
        return "QCNN";
    case Algo::QResNet:
        return "QResNet";
    }
    return "?";
}

Algo parse_algo(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (lower == "quann" || lower == "quannn") {
        return Algo::QuanNN;
    }
    if (lower == "qcnn") {
        return Algo::QCNN;
    }
    if (lower == "qresnet") {
        return Algo::QResNet;
    }
    throw ConfigError("unknown algorithm '" + std::string(text) +
                      "' (expected QuanNN, QCNN or QResNet)");
}

bool is_valid(const ModelConfig &config, std::string *reason) {
    auto fail = [&](std::string why) {
        if (reason != nullptr) {
            *reason = std::move(why);
        }
        return false;
    };
    const std::string name(to_string(config.algo));
    if (config.algo == Algo::QCNN) {
        if (config.entangler != EntanglerKind::BE) {
            return fail("QCNN only supports the BE entangler");
        }
        if (config.n_qubits != 4 && config.n_qubits != 8) {
            return fail("QCNN needs 4 or 8 qubits, got " +
                        std::to_string(config.n_qubits));
        }
        const int max_stages = templates::qcnn_max_stages(config.n_qubits);
        if (config.n_layers < 1 || config.n_layers > max_stages) {
            return fail("QCNN on " + std::to_string(config.n_qubits) +
                        " qubits supports 1.." + std::to_string(max_stages) +
                        " layers, got " + std::to_string(config.n_layers));
        }
        return true;
    }
    if (config.n_qubits != 4 && config.n_qubits != 9) {
        return fail(name + " needs a square qubit count (4 or 9), got " +
                    std::to_string(config.n_qubits));
    }
    if (config.n_layers < 1 || config.n_layers > templates::kMaxLayers) {
        return fail(name + " supports 1.." + std::to_string(templates::kMaxLayers) +
                    " layers, got " + std::to_string(config.n_layers));
    }
    return true;
}

void ModelConfig::validate() const {
    std::string reason;
    if (!is_valid(*this, &reason)) {
        throw ConfigError(reason);
    }
}

HybridModel::HybridModel(const ModelConfig &config, ImageShape shape,
                         CircuitTemplate circuit)
    : config_(config), shape_(shape), circuit_(std::move(circuit)) {
    if (shape.rows == 0 || shape.cols == 0) {
        throw ConfigError("image shape must be non-empty");
    }
    circuit_.validate();
}

std::size_t HybridModel::add_tensor(std::string name, Tensor t) {
    names_.push_back(std::move(name));
    tensors_.push_back(std::move(t));
    return tensors_.size() - 1;
}

void HybridModel::check_image(std::span<const double> image) const {
    if (image.size() != shape_.rows * shape_.cols) {
        throw DimensionError("image has " + std::to_string(image.size()) +
                             " pixels, model expects " +
                             std::to_string(shape_.rows * shape_.cols));
    }
}

std::vector<Tensor *> HybridModel::parameters() {
    std::vector<Tensor *> out;
    out.reserve(tensors_.size());
    for (auto &t : tensors_) {
        out.push_back(&t);
    }
    return out;
}

Tensor &HybridModel::tensor(std::string_view name) {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return tensors_[i];
        }
    }
    throw ConfigError("model has no tensor '" + std::string(name) + "'");
}

GradientSet HybridModel::zero_gradients() const {
    GradientSet g;
    g.reserve(tensors_.size());
    for (const auto &t : tensors_) {
        g.emplace_back(t.size(), 0.0);
    }
    return g;
}

std::size_t HybridModel::parameter_count() const {
    std::size_t total = 0;
    for (const auto &t : tensors_) {
        total += t.size();
    }
    return total;
}

PatchLayout patch_layout(ImageShape shape, std::size_t k) {
    if (k == 0) {
        throw ConfigError("patch size must be positive");
    }
    PatchLayout layout;
    layout.k = k;
    layout.patch_rows = (shape.rows + k - 1) / k;
    layout.patch_cols = (shape.cols + k - 1) / k;
    layout.padded_rows = layout.patch_rows * k;
    layout.padded_cols = layout.patch_cols * k;
    for (std::size_t pr = 0; pr < layout.patch_rows; ++pr) {
        for (std::size_t pc = 0; pc < layout.patch_cols; ++pc) {
            std::vector<std::size_t> idx;
            idx.reserve(k * k);
            for (std::size_t dy = 0; dy < k; ++dy) {
                for (std::size_t dx = 0; dx < k; ++dx) {
                    idx.push_back((pr * k + dy) * layout.padded_cols + pc * k + dx);
                }
            }
            layout.patches.push_back(std::move(idx));
        }
    }
    return layout;
}

std::unique_ptr<HybridModel> build_quann(const ModelConfig &config, ImageShape shape) {
    require_algo(config, Algo::QuanNN);
    return std::make_unique<QuanNN>(config, shape);
}

std::unique_ptr<HybridModel> build_qcnn(const ModelConfig &config, ImageShape shape) {
    require_algo(config, Algo::QCNN);
    return std::make_unique<QCNN>(config, shape);
}

std::unique_ptr<HybridModel> build_qresnet(const ModelConfig &config,
                                           ImageShape shape) {
    require_algo(config, Algo::QResNet);
    return std::make_unique<QResNet>(config, shape);
}

std::unique_ptr<HybridModel> build_model(const ModelConfig &config, ImageShape shape) {
    switch (config.algo) {
    case Algo::QuanNN:
        return build_quann(config, shape);
    case Algo::QCNN:
        return build_qcnn(config, shape);
    case Algo::QResNet:
        return build_qresnet(config, shape);
    }
    throw ConfigError("unknown algorithm");
}

std::vector<double> quann_features(const HybridModel &model,
                                   std::span<const double> image) {
    const auto *quann = dynamic_cast<const QuanNN *>(&model);
    if (quann == nullptr) {
        throw ConfigError("quanvolution features need a QuanNN model");
    }
    return quann->quanvolve(image).features;
}

int predict(const Tensor &logits) {
    const auto v = logits.values();
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

Trainer::Trainer(HybridModel &model, nn::AdamOptions options, int workers)
    : model_(model), adam_(model.parameters(), options), workers_(workers) {}

StepResult Trainer::train_step(const data::Dataset &data,
                               std::span<const std::size_t> batch) {
    if (batch.empty()) {
        throw DataError("empty training batch");
    }
    std::vector<GradientSet> per_sample(batch.size());
    std::vector<SampleResult> results(batch.size());
    parallel_for(batch.size(), workers_, [&](std::size_t i) {
        const std::size_t idx = batch[i];
        if (idx >= data.size()) {
            throw DataError("batch index " + std::to_string(idx) + " out of range");
        }
        per_sample[i] = model_.zero_gradients();
        results[i] = model_.backward(data.images[idx], data.labels[idx], per_sample[i]);
    });

    const double inv = 1.0 / static_cast<double>(batch.size());
    auto params = model_.parameters();
    StepResult step;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        for (std::size_t t = 0; t < params.size(); ++t) {
            auto g = params[t]->grad();
            const auto &src = per_sample[i][t];
            for (std::size_t j = 0; j < g.size(); ++j) {
                g[j] += src[j] * inv;
            }
        }
        step.mean_loss += results[i].loss * inv;
        if (predict(results[i].logits) == data.labels[batch[i]]) {
            step.accuracy += inv;
        }
    }
    adam_.step();
    return step;
}

double evaluate(const HybridModel &model, const data::Dataset &data, int workers) {
    if (data.empty()) {
        throw DataError("cannot evaluate on an empty dataset");
    }
    std::vector<int> correct(data.size(), 0);
    parallel_for(data.size(), workers, [&](std::size_t i) {
        correct[i] = predict(model.forward(data.images[i])) == data.labels[i] ? 1 : 0;
    });
    std::size_t hits = 0;
    for (const int c : correct) {
        hits += static_cast<std::size_t>(c);
    }
    return static_cast<double>(hits) / static_cast<double>(data.size());
}

} // namespace qhybrid::models
