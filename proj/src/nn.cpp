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
#include "qhybrid/nn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhybrid/error.hpp"

namespace qhybrid::nn {

namespace {

void require_rank(const Tensor &t, std::size_t rank, const char *what) {
    if (t.rank() != rank) {
        throw DimensionError(std::string(what) + " expects a rank-" +
                             std::to_string(rank) + " tensor, got rank " +
                             std::to_string(t.rank()));
    }
}

void require_same_size(const Tensor &a, const Tensor &b, const char *what) {
    if (a.size() != b.size()) {
        throw DimensionError(std::string(what) + ": size mismatch " +
                             std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
    }
}

struct ConvDims {
    std::size_t h, w, cin, kh, kw, cout, oh, ow;
};

ConvDims conv_dims(const Tensor &input, const Tensor &kernels, std::size_t stride) {
    require_rank(input, 3, "conv2d input");
    require_rank(kernels, 4, "conv2d kernels");
    if (stride == 0) {
        throw DimensionError("conv2d stride must be positive");
    }
    ConvDims d{input.dim(0), input.dim(1), input.dim(2), kernels.dim(0),
               kernels.dim(1), kernels.dim(3), 0, 0};
    if (kernels.dim(2) != d.cin) {
        throw DimensionError("conv2d kernel input channels " +
                             std::to_string(kernels.dim(2)) +
                             " do not match input channels " +
                             std::to_string(d.cin));
    }
    if (d.h < d.kh || d.w < d.kw) {
        throw DimensionError("conv2d input smaller than kernel");
    }
    d.oh = (d.h - d.kh) / stride + 1;
    d.ow = (d.w - d.kw) / stride + 1;
    return d;
}

} // namespace

Tensor conv2d_forward(const Tensor &input, const Tensor &kernels,
                      std::size_t stride) {
    const auto d = conv_dims(input, kernels, stride);
    Tensor out({d.oh, d.ow, d.cout});
    for (std::size_t oy = 0; oy < d.oh; ++oy) {
        for (std::size_t ox = 0; ox < d.ow; ++ox) {
            for (std::size_t co = 0; co < d.cout; ++co) {
                double acc = 0.0;
                for (std::size_t ky = 0; ky < d.kh; ++ky) {
                    for (std::size_t kx = 0; kx < d.kw; ++kx) {
                        const std::size_t iy = oy * stride + ky;
                        const std::size_t ix = ox * stride + kx;
                        for (std::size_t ci = 0; ci < d.cin; ++ci) {
                            acc += input[(iy * d.w + ix) * d.cin + ci] *
                                   kernels[((ky * d.kw + kx) * d.cin + ci) * d.cout + co];
                        }
                    }
                }
                out[(oy * d.ow + ox) * d.cout + co] = acc;
            }
        }
    }
    return out;
}

Tensor conv2d_backward(const Tensor &input, const Tensor &kernels,
                       std::size_t stride, const Tensor &grad_out,
                       std::span<double> kernel_grad) {
    const auto d = conv_dims(input, kernels, stride);
    if (grad_out.size() != d.oh * d.ow * d.cout) {
        throw DimensionError("conv2d grad_out has the wrong size");
    }
    if (kernel_grad.size() != kernels.size()) {
        throw DimensionError("conv2d kernel gradient buffer has the wrong size");
    }
    Tensor grad_in(input.shape());
    for (std::size_t oy = 0; oy < d.oh; ++oy) {
        for (std::size_t ox = 0; ox < d.ow; ++ox) {
            for (std::size_t co = 0; co < d.cout; ++co) {
                const double g = grad_out[(oy * d.ow + ox) * d.cout + co];
                for (std::size_t ky = 0; ky < d.kh; ++ky) {
                    for (std::size_t kx = 0; kx < d.kw; ++kx) {
                        const std::size_t iy = oy * stride + ky;
                        const std::size_t ix = ox * stride + kx;
                        for (std::size_t ci = 0; ci < d.cin; ++ci) {
                            const std::size_t ii = (iy * d.w + ix) * d.cin + ci;
                            const std::size_t ki =
                                ((ky * d.kw + kx) * d.cin + ci) * d.cout + co;
                            kernel_grad[ki] += g * input[ii];
                            grad_in[ii] += g * kernels[ki];
                        }
                    }
                }
            }
        }
    }
    return grad_in;
}

void add_channel_bias(Tensor &x, const Tensor &bias) {
    require_rank(x, 3, "channel bias");
    const std::size_t c = x.dim(2);
    if (bias.size() != c) {
        throw DimensionError("bias length does not match channel count");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] += bias[i % c];
    }
}

void channel_bias_backward(const Tensor &grad_out, std::span<double> bias_grad) {
    require_rank(grad_out, 3, "channel bias backward");
    const std::size_t c = grad_out.dim(2);
    if (bias_grad.size() != c) {
        throw DimensionError("bias gradient length does not match channel count");
    }
    for (std::size_t i = 0; i < grad_out.size(); ++i) {
        bias_grad[i % c] += grad_out[i];
    }
}

Tensor pad2d(const Tensor &input, std::size_t pad) {
    require_rank(input, 3, "pad2d");
    const std::size_t h = input.dim(0), w = input.dim(1), c = input.dim(2);
    const std::size_t ph = h + 2 * pad, pw = w + 2 * pad;
    Tensor out({ph, pw, c});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t k = 0; k < c; ++k) {
                out[((y + pad) * pw + (x + pad)) * c + k] = input[(y * w + x) * c + k];
            }
        }
    }
    return out;
}

Tensor pad2d_backward(const Tensor &grad_out, std::size_t pad) {
    require_rank(grad_out, 3, "pad2d backward");
    const std::size_t ph = grad_out.dim(0), pw = grad_out.dim(1), c = grad_out.dim(2);
    if (ph < 2 * pad || pw < 2 * pad) {
        throw DimensionError("pad2d backward: gradient smaller than padding");
    }
    const std::size_t h = ph - 2 * pad, w = pw - 2 * pad;
    Tensor out({h, w, c});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t k = 0; k < c; ++k) {
                out[(y * w + x) * c + k] = grad_out[((y + pad) * pw + (x + pad)) * c + k];
            }
        }
    }
    return out;
}

Tensor avgpool2d(const Tensor &input, std::size_t window) {
    return avgpool2d(input, window, window);
}

Tensor avgpool2d(const Tensor &input, std::size_t window_h, std::size_t window_w) {
    require_rank(input, 3, "avgpool2d");
    const std::size_t h = input.dim(0), w = input.dim(1), c = input.dim(2);
    if (window_h == 0 || window_w == 0 || h % window_h != 0 || w % window_w != 0) {
        throw DimensionError("avgpool2d: " + std::to_string(h) + "x" +
                             std::to_string(w) + " not divisible by window " +
                             std::to_string(window_h) + "x" +
                             std::to_string(window_w));
    }
    const std::size_t oh = h / window_h, ow = w / window_w;
    const double inv = 1.0 / static_cast<double>(window_h * window_w);
    Tensor out({oh, ow, c});
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t k = 0; k < c; ++k) {
                out[((y / window_h) * ow + x / window_w) * c + k] +=
                    input[(y * w + x) * c + k] * inv;
            }
        }
    }
    return out;
}

Tensor avgpool2d_backward(const Tensor &grad_out,
                          const std::vector<std::size_t> &input_shape,
                          std::size_t window_h, std::size_t window_w) {
    if (input_shape.size() != 3) {
        throw DimensionError("avgpool2d backward expects a rank-3 input shape");
    }
    const std::size_t h = input_shape[0], w = input_shape[1], c = input_shape[2];
    const std::size_t ow = w / window_w;
    if (grad_out.size() != (h / window_h) * ow * c) {
        throw DimensionError("avgpool2d backward: gradient has the wrong size");
    }
    const double inv = 1.0 / static_cast<double>(window_h * window_w);
    Tensor grad_in(input_shape);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            for (std::size_t k = 0; k < c; ++k) {
                grad_in[(y * w + x) * c + k] =
                    grad_out[((y / window_h) * ow + x / window_w) * c + k] * inv;
            }
        }
    }
    return grad_in;
}

Tensor dense_forward(const Tensor &input, const Tensor &weights,
                     const Tensor &bias) {
    require_rank(weights, 2, "dense weights");
    const std::size_t out_dim = weights.dim(0), in_dim = weights.dim(1);
    if (input.size() != in_dim || bias.size() != out_dim) {
        throw DimensionError("dense: input " + std::to_string(input.size()) +
                             " / bias " + std::to_string(bias.size()) +
                             " do not match weights " + std::to_string(out_dim) +
                             "x" + std::to_string(in_dim));
    }
    Tensor out({out_dim});
    for (std::size_t r = 0; r < out_dim; ++r) {
        double acc = bias[r];
        const double *row = weights.values().data() + r * in_dim;
        for (std::size_t c = 0; c < in_dim; ++c) {
            acc += row[c] * input[c];
        }
        out[r] = acc;
    }
    return out;
}

Tensor dense_backward(const Tensor &input, const Tensor &weights,
                      const Tensor &grad_out, std::span<double> weight_grad,
                      std::span<double> bias_grad) {
    require_rank(weights, 2, "dense weights");
    const std::size_t out_dim = weights.dim(0), in_dim = weights.dim(1);
    if (input.size() != in_dim || grad_out.size() != out_dim ||
        weight_grad.size() != weights.size() || bias_grad.size() != out_dim) {
        throw DimensionError("dense backward: shape mismatch");
    }
    Tensor grad_in(input.shape());
    for (std::size_t r = 0; r < out_dim; ++r) {
        const double g = grad_out[r];
        bias_grad[r] += g;
        const double *row = weights.values().data() + r * in_dim;
        double *grow = weight_grad.data() + r * in_dim;
        for (std::size_t c = 0; c < in_dim; ++c) {
            grow[c] += g * input[c];
            grad_in[c] += g * row[c];
        }
    }
    return grad_in;
}

Tensor relu(const Tensor &x) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = x[i] > 0.0 ? x[i] : 0.0;
    }
    return out;
}

Tensor relu_backward(const Tensor &input, const Tensor &grad_out) {
    require_same_size(input, grad_out, "relu backward");
    Tensor out(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) {
        out[i] = input[i] > 0.0 ? grad_out[i] : 0.0;
    }
    return out;
}

Tensor sigmoid(const Tensor &x) {
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = 1.0 / (1.0 + std::exp(-x[i]));
    }
    return out;
}

Tensor sigmoid_backward(const Tensor &output, const Tensor &grad_out) {
    require_same_size(output, grad_out, "sigmoid backward");
    Tensor out(output.shape());
    for (std::size_t i = 0; i < output.size(); ++i) {
        out[i] = grad_out[i] * output[i] * (1.0 - output[i]);
    }
    return out;
}

std::vector<double> softmax(std::span<const double> logits) {
    std::vector<double> p(logits.begin(), logits.end());
    if (p.empty()) {
        return p;
    }
    const double top = *std::max_element(p.begin(), p.end());
    double total = 0.0;
    for (double &v : p) {
        v = std::exp(v - top);
        total += v;
    }
    for (double &v : p) {
        v /= total;
    }
    return p;
}

LossResult softmax_cross_entropy(const Tensor &logits, std::size_t label) {
    if (label >= logits.size()) {
        throw DataError("label " + std::to_string(label) + " out of range for " +
                        std::to_string(logits.size()) + " classes");
    }
    const auto values = logits.values();
    const double top = *std::max_element(values.begin(), values.end());
    double total = 0.0;
    for (const double v : values) {
        total += std::exp(v - top);
    }
    const double log_z = top + std::log(total);
    LossResult result{log_z - values[label], Tensor(logits.shape())};
    for (std::size_t i = 0; i < values.size(); ++i) {
        result.grad_logits[i] = std::exp(values[i] - log_z);
    }
    result.grad_logits[label] -= 1.0;
    return result;
}

void init_uniform(Tensor &t, double lo, double hi, Rng &rng) {
    for (double &v : t.values()) {
        v = rng.uniform(lo, hi);
    }
}

void init_fan_in(Tensor &t, std::size_t fan_in, Rng &rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    init_uniform(t, -bound, bound, rng);
}

Adam::Adam(std::vector<Tensor *> params, AdamOptions options)
    : params_(std::move(params)), options_(options) {
    for (const Tensor *p : params_) {
        first_moment_.emplace_back(p->size(), 0.0);
        second_moment_.emplace_back(p->size(), 0.0);
    }
}

void Adam::step() {
    ++step_count_;
    const double t = static_cast<double>(step_count_);
    const double correction1 = 1.0 - std::pow(options_.beta1, t);
    const double correction2 = 1.0 - std::pow(options_.beta2, t);
    for (std::size_t k = 0; k < params_.size(); ++k) {
        Tensor &p = *params_[k];
        auto &m = first_moment_[k];
        auto &v = second_moment_[k];
        auto values = p.values();
        auto grad = p.grad();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double g = grad[i];
            m[i] = options_.beta1 * m[i] + (1.0 - options_.beta1) * g;
            v[i] = options_.beta2 * v[i] + (1.0 - options_.beta2) * g * g;
            const double m_hat = m[i] / correction1;
            const double v_hat = v[i] / correction2;
            values[i] -= options_.learning_rate * m_hat /
                         (std::sqrt(v_hat) + options_.epsilon);
        }
        p.zero_grad();
    }
}

} // namespace qhybrid::nn
