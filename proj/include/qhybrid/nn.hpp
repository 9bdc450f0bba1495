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
 * Minimal classical layers with explicit forward/backward functions.
 *
 * Images are H x W x C tensors; convolution kernels are KH x KW x Cin x Cout;
 * dense weights are Out x In. Backward functions return the gradient with
 * respect to the layer input (as tensor values) and accumulate weight
 * gradients into caller-provided buffers, so per-sample gradients can be
 * reduced in a fixed order.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qhybrid/rng.hpp"
#include "qhybrid/tensor.hpp"

namespace qhybrid::nn {

/// Valid cross-correlation, no bias.
Tensor conv2d_forward(const Tensor &input, const Tensor &kernels,
                      std::size_t stride);
Tensor conv2d_backward(const Tensor &input, const Tensor &kernels,
                       std::size_t stride, const Tensor &grad_out,
                       std::span<double> kernel_grad);

/// Adds bias[c] to every spatial position of channel c.
void add_channel_bias(Tensor &x, const Tensor &bias);
void channel_bias_backward(const Tensor &grad_out, std::span<double> bias_grad);

/// Zero padding of `pad` pixels on every side.
Tensor pad2d(const Tensor &input, std::size_t pad);
Tensor pad2d_backward(const Tensor &grad_out, std::size_t pad);

Tensor avgpool2d(const Tensor &input, std::size_t window);
Tensor avgpool2d(const Tensor &input, std::size_t window_h, std::size_t window_w);
Tensor avgpool2d_backward(const Tensor &grad_out,
                          const std::vector<std::size_t> &input_shape,
                          std::size_t window_h, std::size_t window_w);

/// W x + b on a flat input.
Tensor dense_forward(const Tensor &input, const Tensor &weights,
                     const Tensor &bias);
Tensor dense_backward(const Tensor &input, const Tensor &weights,
                      const Tensor &grad_out, std::span<double> weight_grad,
                      std::span<double> bias_grad);

Tensor relu(const Tensor &x);
Tensor relu_backward(const Tensor &input, const Tensor &grad_out);

Tensor sigmoid(const Tensor &x);
/// Takes the forward *output*.
Tensor sigmoid_backward(const Tensor &output, const Tensor &grad_out);

std::vector<double> softmax(std::span<const double> logits);

struct LossResult {
    double loss{0.0};
    Tensor grad_logits;
};

/// -log softmax(logits)[label] and its gradient softmax - onehot.
LossResult softmax_cross_entropy(const Tensor &logits, std::size_t label);

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
void init_fan_in(Tensor &t, std::size_t fan_in, Rng &rng);
void init_uniform(Tensor &t, double lo, double hi, Rng &rng);

struct AdamOptions {
    double learning_rate{0.01};
    double beta1{0.9};
    double beta2{0.999};
    double epsilon{1e-8};
};

/// Adam with bias correction over a fixed list of tensors; reads
/// Tensor::grad and zeroes it after each step.
class Adam {
  public:
    Adam(std::vector<Tensor *> params, AdamOptions options = {});

    void step();

    [[nodiscard]] std::int64_t step_count() const { return step_count_; }
    [[nodiscard]] const AdamOptions &options() const { return options_; }

  private:
    std::vector<Tensor *> params_;
    AdamOptions options_;
    std::int64_t step_count_{0};
    std::vector<std::vector<double>> first_moment_;
    std::vector<std::vector<double>> second_moment_;
};

} // namespace qhybrid::nn
