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
#include "qhybrid/grad.hpp"

#include <numbers>
#include <string>

#include "qhybrid/error.hpp"

namespace qhybrid::grad {

using qsim::GateKind;
using qsim::GateOp;
using qsim::StateVector;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

struct ShiftTerm {
    double coefficient;
    double delta;      // added to the shifted component's angle
    double post_angle; // extra rotation on the target after the gate
    bool has_post;
};

// Two-term rule for a plain rotation angle.
constexpr ShiftTerm kRotationTerms[] = {
    {0.5, kHalfPi, 0.0, false},
    {-0.5, -kHalfPi, 0.0, false},
};

// Controlled rotation CR(t) = R(t/2) C R(-t/2) C. Shifting the outer half
// angle by s gives R(s) CR(t); shifting the inner one gives R(s) CR(t - 2s).
// d/dt = (1/2) d/d(outer) - (1/2) d/d(inner).
constexpr ShiftTerm kControlledTerms[] = {
    {0.25, 0.0, kHalfPi, true},
    {-0.25, 0.0, -kHalfPi, true},
    {-0.25, -std::numbers::pi, kHalfPi, true},
    {0.25, std::numbers::pi, -kHalfPi, true},
};

qsim::Mat2 gate_matrix(const GateOp &gate, const std::array<double, 3> &a) {
    switch (gate.kind) {
    case GateKind::ROT:
        return qsim::rot_matrix(a[0], a[1], a[2]);
    case GateKind::CNOT:
        return {};
    default:
        return qsim::rotation_matrix(gate.kind, a[0]);
    }
}

void apply_with_matrix(StateVector &state, const GateOp &gate,
                       const qsim::Mat2 &m) {
    switch (gate.kind) {
    case GateKind::CNOT:
        qsim::apply_cnot(state, gate.wires[0], gate.wires[1]);
        break;
    case GateKind::CRX:
    case GateKind::CRZ:
        qsim::apply_controlled(state, gate.wires[0], gate.wires[1], m);
        break;
    default:
        qsim::apply_single(state, gate.wires[0], m);
        break;
    }
}

void check_lengths(const templates::CircuitTemplate &tmpl,
                   std::span<const double> trainable,
                   std::span<const double> inputs) {
    if (trainable.size() != static_cast<std::size_t>(tmpl.n_params)) {
        throw ParameterError("expected " + std::to_string(tmpl.n_params) +
                             " trainable values, got " +
                             std::to_string(trainable.size()));
    }
    if (inputs.size() != static_cast<std::size_t>(tmpl.n_inputs)) {
        throw ParameterError("expected " + std::to_string(tmpl.n_inputs) +
                             " inputs, got " + std::to_string(inputs.size()));
    }
}

} // namespace

CircuitEvaluator::CircuitEvaluator(const templates::CircuitTemplate &tmpl)
    : tmpl_(&tmpl), angles_(static_cast<std::size_t>(tmpl.n_slots())),
      gate_angles_(tmpl.gates.size()), gate_mats_(tmpl.gates.size()),
      prefix_(tmpl.n_qubits), work_(tmpl.n_qubits) {
    tmpl.validate();
}

void CircuitEvaluator::prepare(std::span<const double> trainable,
                               std::span<const double> inputs) {
    check_lengths(*tmpl_, trainable, inputs);
    std::copy(trainable.begin(), trainable.end(), angles_.begin());
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        angles_[trainable.size() + i] = kEncodingScale * inputs[i];
    }
    for (std::size_t k = 0; k < tmpl_->gates.size(); ++k) {
        const auto &gate = tmpl_->gates[k];
        auto &a = gate_angles_[k];
        for (std::size_t c = 0; c < gate.param_slots.size(); ++c) {
            a[c] = angles_[static_cast<std::size_t>(gate.param_slots[c])];
        }
        gate_mats_[k] = gate_matrix(gate, a);
    }
}

void CircuitEvaluator::run_from(StateVector &state, std::size_t first_gate) const {
    for (std::size_t k = first_gate; k < tmpl_->gates.size(); ++k) {
        apply_with_matrix(state, tmpl_->gates[k], gate_mats_[k]);
    }
}

void CircuitEvaluator::readout(const StateVector &state,
                               std::span<double> out) const {
    const int n = state.n_qubits();
    const auto &wires = tmpl_->readout.wires;
    std::fill(out.begin(), out.end(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        for (std::size_t o = 0; o < wires.size(); ++o) {
            const auto bit = std::size_t{1} << static_cast<unsigned>(n - 1 - wires[o]);
            out[o] += (i & bit) ? -p : p;
        }
    }
}

std::vector<double> CircuitEvaluator::forward(std::span<const double> trainable,
                                              std::span<const double> inputs) {
    prepare(trainable, inputs);
    work_.reset();
    run_from(work_, 0);
    std::vector<double> out(tmpl_->readout.wires.size());
    readout(work_, out);
    return out;
}

Jacobians CircuitEvaluator::param_shift(std::span<const double> trainable,
                                        std::span<const double> inputs,
                                        bool with_inputs) {
    prepare(trainable, inputs);
    const std::size_t n_out = tmpl_->readout.wires.size();
    const auto n_params = static_cast<std::size_t>(tmpl_->n_params);
    Jacobians jac{Jacobian(n_out, n_params),
                  with_inputs ? Jacobian(n_out, static_cast<std::size_t>(tmpl_->n_inputs))
                              : Jacobian()};
    std::vector<double> shifted(n_out);

    prefix_.reset();
    for (std::size_t k = 0; k < tmpl_->gates.size(); ++k) {
        const GateOp &gate = tmpl_->gates[k];
        const std::span<const ShiftTerm> terms =
            qsim::is_controlled(gate.kind) ? std::span<const ShiftTerm>(kControlledTerms)
                                           : std::span<const ShiftTerm>(kRotationTerms);
        for (std::size_t c = 0; c < gate.param_slots.size(); ++c) {
            const auto slot = static_cast<std::size_t>(gate.param_slots[c]);
            Jacobian *target = &jac.params;
            std::size_t column = slot;
            double scale = 1.0;
            if (slot >= n_params) {
                if (!with_inputs) {
                    continue;
                }
                target = &jac.inputs;
                column = slot - n_params;
                scale = kEncodingScale;
            }
            for (const auto &term : terms) {
                std::copy(prefix_.amplitudes().begin(), prefix_.amplitudes().end(),
                          work_.amplitudes().begin());
                auto angles = gate_angles_[k];
                angles[c] += term.delta;
                apply_with_matrix(work_, gate, gate_matrix(gate, angles));
                if (term.has_post) {
                    const auto axis = gate.kind == GateKind::CRX ? GateKind::RX
                                                                 : GateKind::RZ;
                    qsim::apply_single(work_, gate.wires[1],
                                       qsim::rotation_matrix(axis, term.post_angle));
                }
                run_from(work_, k + 1);
                readout(work_, shifted);
                for (std::size_t o = 0; o < n_out; ++o) {
                    (*target)(o, column) += scale * term.coefficient * shifted[o];
                }
            }
        }
        apply_with_matrix(prefix_, gate, gate_mats_[k]);
    }
    return jac;
}

std::vector<double> forward(const templates::CircuitTemplate &tmpl,
                            const ParamTensor &trainable,
                            std::span<const double> inputs) {
    CircuitEvaluator evaluator(tmpl);
    return evaluator.forward(trainable.values(), inputs);
}

Jacobians param_shift_grad(const templates::CircuitTemplate &tmpl,
                           const ParamTensor &trainable,
                           std::span<const double> inputs, bool with_inputs) {
    CircuitEvaluator evaluator(tmpl);
    return evaluator.param_shift(trainable.values(), inputs, with_inputs);
}

Jacobians finite_diff_grad(const templates::CircuitTemplate &tmpl,
                           const ParamTensor &trainable,
                           std::span<const double> inputs, double h) {
    if (!(h > 0.0)) {
        throw ConfigError("finite-difference step must be positive");
    }
    check_lengths(tmpl, trainable.values(), inputs);
    std::vector<double> theta(trainable.values().begin(), trainable.values().end());
    std::vector<double> x(inputs.begin(), inputs.end());
    const std::size_t n_out = tmpl.readout.wires.size();
    Jacobians jac{Jacobian(n_out, theta.size()), Jacobian(n_out, x.size())};

    auto eval = [&]() {
        return qsim::expval_z(
            qsim::run_circuit(tmpl.n_qubits, tmpl.gates, [&] {
                std::vector<double> angles = theta;
                for (const double v : x) {
                    angles.push_back(kEncodingScale * v);
                }
                return angles;
            }()),
            tmpl.readout);
    };
    auto central = [&](std::vector<double> &values, std::size_t i, Jacobian &out) {
        const double saved = values[i];
        values[i] = saved + h;
        const auto plus = eval();
        values[i] = saved - h;
        const auto minus = eval();
        values[i] = saved;
        for (std::size_t o = 0; o < n_out; ++o) {
            out(o, i) = (plus[o] - minus[o]) / (2.0 * h);
        }
    };
    for (std::size_t i = 0; i < theta.size(); ++i) {
        central(theta, i, jac.params);
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        central(x, i, jac.inputs);
    }
    return jac;
}

} // namespace qhybrid::grad
