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
#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "qhybrid/error.hpp"
#include "qhybrid/nn.hpp"
#include "qhybrid/rng.hpp"

namespace {

using namespace qhybrid;

Tensor random_tensor(std::vector<std::size_t> shape, std::uint64_t seed) {
    Tensor t(shape);
    Rng rng(seed);
    nn::init_uniform(t, -1.0, 1.0, rng);
    return t;
}

// Scalar objective: sum(w .* f(x)) with fixed random weights w.
double weighted_sum(const Tensor &out, const Tensor &w) {
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        s += out[i] * w[i];
    }
    return s;
}

void expect_close(double fd, double an, double rel) {
    const double scale = std::max({1.0, std::abs(fd), std::abs(an)});
    EXPECT_LE(std::abs(fd - an) / scale, rel) << "fd " << fd << " analytic " << an;
}

// Checks d(objective)/d(values of `target`) against central differences.
void check_fd(Tensor &target, std::span<const double> analytic,
              const std::function<double()> &objective, double rel = 1e-6,
              double h = 1e-5) {
    auto v = target.values();
    ASSERT_EQ(v.size(), analytic.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double saved = v[i];
        v[i] = saved + h;
        const double up = objective();
        v[i] = saved - h;
        const double down = objective();
        v[i] = saved;
        expect_close((up - down) / (2.0 * h), analytic[i], rel);
    }
}

TEST(Tensor, ShapeAndCount) {
    Tensor t({2, 3, 4});
    EXPECT_EQ(t.size(), 24u);
    EXPECT_EQ(t.grad().size(), 24u);
    EXPECT_THROW(Tensor({2, 2}, std::vector<double>(3)), DimensionError);
}

TEST(Conv2d, BoxFilterStrideTwo) {
    std::vector<double> v(16);
    for (std::size_t i = 0; i < 16; ++i) {
        v[i] = static_cast<double>(i);
    }
    const Tensor in({4, 4, 1}, v);
    const Tensor k({2, 2, 1, 1}, std::vector<double>(4, 1.0));
    const auto out = nn::conv2d_forward(in, k, 2);
    ASSERT_EQ(out.shape(), (std::vector<std::size_t>{2, 2, 1}));
    EXPECT_DOUBLE_EQ(out[0], 0 + 1 + 4 + 5);
    EXPECT_DOUBLE_EQ(out[1], 2 + 3 + 6 + 7);
    EXPECT_DOUBLE_EQ(out[2], 8 + 9 + 12 + 13);
    EXPECT_DOUBLE_EQ(out[3], 10 + 11 + 14 + 15);
}

TEST(Conv2d, IdentityKernel) {
    const auto in = random_tensor({5, 4, 1}, 1);
    const Tensor k({1, 1, 1, 1}, {1.0});
    const auto out = nn::conv2d_forward(in, k, 1);
    EXPECT_EQ(out.shape(), in.shape());
    for (std::size_t i = 0; i < in.size(); ++i) {
        EXPECT_EQ(out[i], in[i]);
    }
}

TEST(Conv2d, OutputSize) {
    const auto out = nn::conv2d_forward(Tensor({28, 28, 1}), Tensor({3, 3, 1, 1}), 1);
    EXPECT_EQ(out.shape(), (std::vector<std::size_t>{26, 26, 1}));
    EXPECT_THROW(nn::conv2d_forward(Tensor({2, 2, 1}), Tensor({3, 3, 1, 1}), 1),
                 DimensionError);
    EXPECT_THROW(nn::conv2d_forward(Tensor({5, 5, 2}), Tensor({3, 3, 1, 1}), 1),
                 DimensionError);
}

TEST(Conv2d, BackwardMatchesFiniteDifferences) {
    auto in = random_tensor({6, 5, 2}, 2);
    auto k = random_tensor({3, 3, 2, 3}, 3);
    for (const std::size_t stride : {1u, 2u}) {
        const auto probe = nn::conv2d_forward(in, k, stride);
        const auto w = random_tensor(probe.shape(), 4);
        std::vector<double> kgrad(k.size(), 0.0);
        const auto gin = nn::conv2d_backward(in, k, stride, w, kgrad);
        auto objective = [&] { return weighted_sum(nn::conv2d_forward(in, k, stride), w); };
        check_fd(k, kgrad, objective);
        check_fd(in, gin.values(), objective);
    }
}

TEST(Bias, BackwardSumsPerChannel) {
    auto x = random_tensor({3, 3, 2}, 5);
    auto b = random_tensor({2}, 6);
    const auto w = random_tensor({3, 3, 2}, 7);
    std::vector<double> bgrad(2, 0.0);
    nn::channel_bias_backward(w, bgrad);
    check_fd(b, bgrad, [&] {
        Tensor y = x;
        nn::add_channel_bias(y, b);
        return weighted_sum(y, w);
    });
}

TEST(Pad, RoundTrip) {
    auto x = random_tensor({3, 4, 1}, 8);
    const auto p = nn::pad2d(x, 1);
    EXPECT_EQ(p.shape(), (std::vector<std::size_t>{5, 6, 1}));
    EXPECT_EQ(p[0], 0.0);
    EXPECT_EQ(p[6 + 1], x[0]);
    const auto back = nn::pad2d_backward(p, 1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_EQ(back[i], x[i]);
    }
}

TEST(AvgPool, Examples) {
    const Tensor c({4, 4, 1}, std::vector<double>(16, 2.5));
    const auto pooled = nn::avgpool2d(c, 2);
    for (const double v : pooled.values()) {
        EXPECT_DOUBLE_EQ(v, 2.5);
    }
    const Tensor m({2, 2, 1}, {1, 3, 5, 7});
    EXPECT_DOUBLE_EQ(nn::avgpool2d(m, 2)[0], 4.0);
    EXPECT_EQ(nn::avgpool2d(Tensor({28, 28, 1}), 2).shape(),
              (std::vector<std::size_t>{14, 14, 1}));
    EXPECT_EQ(nn::avgpool2d(Tensor({28, 28, 1}), 7, 14).shape(),
              (std::vector<std::size_t>{4, 2, 1}));
    EXPECT_THROW(nn::avgpool2d(Tensor({5, 4, 1}), 2), DimensionError);
}

TEST(AvgPool, BackwardSpreadsUniformly) {
    const Tensor g({1, 1, 1}, {1.0});
    const auto back = nn::avgpool2d_backward(g, {2, 2, 1}, 2, 2);
    for (const double v : back.values()) {
        EXPECT_DOUBLE_EQ(v, 0.25);
    }
    auto x = random_tensor({6, 4, 2}, 9);
    const auto w = random_tensor({2, 2, 2}, 10);
    const auto gin = nn::avgpool2d_backward(w, x.shape(), 3, 2);
    check_fd(x, gin.values(), [&] { return weighted_sum(nn::avgpool2d(x, 3, 2), w); });
}

TEST(Dense, Examples) {
    const Tensor eye({2, 2}, {1, 0, 0, 1});
    const Tensor x({2}, {2, 3});
    const auto y = nn::dense_forward(x, eye, Tensor({2}));
    EXPECT_DOUBLE_EQ(y[0], 2.0);
    EXPECT_DOUBLE_EQ(y[1], 3.0);
    const auto b = nn::dense_forward(Tensor({3}), Tensor({4, 3}), Tensor({4}, {1, 2, 3, 4}));
    EXPECT_EQ(std::vector<double>(b.values().begin(), b.values().end()),
              (std::vector<double>{1, 2, 3, 4}));
    const auto z = nn::dense_forward(x, Tensor({2, 2}, {1, 1, 1, -1}), Tensor({2}));
    EXPECT_DOUBLE_EQ(z[0], 5.0);
    EXPECT_DOUBLE_EQ(z[1], -1.0);
    EXPECT_THROW(nn::dense_forward(Tensor({3}), eye, Tensor({2})), DimensionError);
}

TEST(Dense, BackwardIsOuterProduct) {
    auto x = random_tensor({5}, 11);
    auto wt = random_tensor({3, 5}, 12);
    auto b = random_tensor({3}, 13);
    const auto g = random_tensor({3}, 14);
    std::vector<double> wgrad(15, 0.0), bgrad(3, 0.0);
    const auto gin = nn::dense_backward(x, wt, g, wgrad, bgrad);
    for (std::size_t o = 0; o < 3; ++o) {
        EXPECT_DOUBLE_EQ(bgrad[o], g[o]);
        for (std::size_t i = 0; i < 5; ++i) {
            EXPECT_DOUBLE_EQ(wgrad[o * 5 + i], g[o] * x[i]);
        }
    }
    auto objective = [&] { return weighted_sum(nn::dense_forward(x, wt, b), g); };
    check_fd(x, gin.values(), objective);
    check_fd(wt, wgrad, objective);
}

TEST(Activations, BackwardMatchesFiniteDifferences) {
    auto x = random_tensor({7}, 15);
    const auto w = random_tensor({7}, 16);
    check_fd(x, nn::relu_backward(x, w).values(),
             [&] { return weighted_sum(nn::relu(x), w); });
    check_fd(x, nn::sigmoid_backward(nn::sigmoid(x), w).values(),
             [&] { return weighted_sum(nn::sigmoid(x), w); });
}

TEST(Loss, Examples) {
    EXPECT_NEAR(nn::softmax_cross_entropy(Tensor({4}, {2, 2, 2, 2}), 1).loss, std::log(4.0),
                1e-12);
    EXPECT_NEAR(nn::softmax_cross_entropy(Tensor({4}, {800, 0, 0, 0}), 0).loss, 0.0, 1e-12);
    const auto r = nn::softmax_cross_entropy(Tensor({4}, {1, 0, 0, 0}), 0);
    EXPECT_NEAR(r.loss, std::log(1.0 + 3.0 * std::exp(-1.0)), 1e-12);
    EXPECT_NEAR(r.loss, 0.7437, 5e-5);
    EXPECT_THROW(nn::softmax_cross_entropy(Tensor({4}), 4), DataError);
}

TEST(Loss, GradientIsSoftmaxMinusOneHot) {
    auto logits = random_tensor({4}, 17);
    const auto r = nn::softmax_cross_entropy(logits, 2);
    const auto p = nn::softmax(logits.values());
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        sum += p[i];
        EXPECT_NEAR(r.grad_logits[i], p[i] - (i == 2 ? 1.0 : 0.0), 1e-15);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_GE(r.loss, 0.0);
    check_fd(logits, r.grad_logits.values(),
             [&] { return nn::softmax_cross_entropy(logits, 2).loss; });
}

TEST(Adam, ZeroGradientLeavesParams) {
    auto p = random_tensor({3}, 18);
    const auto before = std::vector<double>(p.values().begin(), p.values().end());
    nn::Adam opt({&p});
    opt.step();
    EXPECT_EQ(std::vector<double>(p.values().begin(), p.values().end()), before);
}

TEST(Adam, FirstStepMovesByLearningRate) {
    for (const double g : {1.0, -1.0, 37.0}) {
        Tensor p({1}, {0.5});
        nn::Adam opt({&p});
        p.grad()[0] = g;
        opt.step();
        EXPECT_NEAR(p[0] - 0.5, g > 0 ? -0.01 : 0.01, 1e-9);
        EXPECT_EQ(p.grad()[0], 0.0);
        EXPECT_EQ(opt.step_count(), 1);
    }
}

TEST(Adam, IdenticalRunsIdenticalTrajectories) {
    auto run = [] {
        Tensor p({2}, {0.1, -0.2});
        nn::Adam opt({&p});
        for (int s = 0; s < 10; ++s) {
            p.grad()[0] = std::sin(p[0] * 3.0);
            p.grad()[1] = p[1] * p[1] - 0.3;
            opt.step();
        }
        return std::vector<double>(p.values().begin(), p.values().end());
    };
    EXPECT_EQ(run(), run());
}

TEST(Init, FanInBounds) {
    Tensor t({200});
    Rng rng(1);
    nn::init_fan_in(t, 16, rng);
    for (const double v : t.values()) {
        EXPECT_LE(std::abs(v), 0.25);
    }
}

} // namespace
