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
 * Expectation values of circuit templates and their exact gradients.
 *
 * Inputs are features in [0, 1]; they enter the circuit as angles
 * kEncodingScale * x. Trainable values are angles in radians.
 */
#pragma once

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "qhybrid/qsim.hpp"
#include "qhybrid/templates.hpp"
#include "qhybrid/tensor.hpp"

namespace qhybrid::grad {

using ParamTensor = Tensor;

inline constexpr double kEncodingScale = std::numbers::pi;

/// Row-major n_outputs x n_columns matrix.
struct Jacobian {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<double> data;

    Jacobian() = default;
    Jacobian(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double &operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const {
        return data[r * cols + c];
    }
};

struct Jacobians {
    Jacobian params;
    Jacobian inputs;
};

/**
 * Reusable evaluator for one template. Owns its scratch states, so a
 * single instance must not be shared between threads; the template itself
 * may be.
 */
class CircuitEvaluator {
  public:
    explicit CircuitEvaluator(const templates::CircuitTemplate &tmpl);

    [[nodiscard]] const templates::CircuitTemplate &circuit() const {
        return *tmpl_;
    }

    std::vector<double> forward(std::span<const double> trainable,
                                std::span<const double> inputs);

    /**
     * Parameter-shift Jacobians. Rotation components use the two-term rule
     * at +-pi/2. Controlled rotations are differentiated through the
     * decomposition CR(t) = R(t/2) C R(-t/2) C, which turns each half-angle
     * rotation into a two-term shift (four evaluations per slot).
     * With `with_inputs` false the input Jacobian is left empty.
     */
    Jacobians param_shift(std::span<const double> trainable,
                          std::span<const double> inputs, bool with_inputs);

  private:
    void prepare(std::span<const double> trainable, std::span<const double> inputs);
    void run_from(qsim::StateVector &state, std::size_t first_gate) const;
    void readout(const qsim::StateVector &state, std::span<double> out) const;

    const templates::CircuitTemplate *tmpl_;
    std::vector<double> angles_;
    std::vector<std::array<double, 3>> gate_angles_;
    std::vector<qsim::Mat2> gate_mats_;
    qsim::StateVector prefix_;
    qsim::StateVector work_;
};

/// <Z> on the template readout for the given trainables and inputs.
std::vector<double> forward(const templates::CircuitTemplate &tmpl,
                            const ParamTensor &trainable,
                            std::span<const double> inputs);

Jacobians param_shift_grad(const templates::CircuitTemplate &tmpl,
                           const ParamTensor &trainable,
                           std::span<const double> inputs,
                           bool with_inputs = true);

/// Central differences with step `h` on every trainable and input; test
/// oracle only.
Jacobians finite_diff_grad(const templates::CircuitTemplate &tmpl,
                           const ParamTensor &trainable,
                           std::span<const double> inputs, double h);

} // namespace qhybrid::grad
