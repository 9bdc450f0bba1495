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
 * Circuit families used by the hybrid models: angle encoding, the three
 * entangling layer families, and QCNN convolution/pooling stages.
 *
 * Slot layout of a CircuitTemplate: trainable slots occupy [0, n_params)
 * and input-encoding slots occupy [n_params, n_params + n_inputs).
 */
#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qhybrid/qsim.hpp"

namespace qhybrid::templates {

enum class EntanglerKind : std::uint8_t { RC, BE, SE };

[[nodiscard]] std::string_view to_string(EntanglerKind kind);
/// Accepts "RC"/"BE"/"SE" in any case; throws ConfigError otherwise.
[[nodiscard]] EntanglerKind parse_entangler(std::string_view text);

inline constexpr int kMaxLayers = 6;
/// Share of CNOTs among randomly placed gates in random_circuit.
inline constexpr double kRandomCnotRatio = 0.3;

struct CircuitTemplate {
    int n_qubits{0};
    std::vector<qsim::GateOp> gates;
    int n_params{0};
    int n_inputs{0};
    qsim::Observable readout;

    [[nodiscard]] int n_slots() const { return n_params + n_inputs; }

    /// Throws if any gate is invalid, a slot is out of range, or a slot in
    /// [0, n_slots) is never referenced.
    void validate() const;
};

/// RY(angle_i) on wire i with input slot i.
CircuitTemplate angle_encoding(int n_qubits);

/// RX on every wire then a CNOT ring, per layer.
CircuitTemplate basic_entangling(int n_qubits, int n_layers);

/// ROT on every wire then CNOTs (i, i + r_l mod n) with
/// r_l = (l mod (n - 1)) + 1, per layer.
CircuitTemplate strongly_entangling(int n_qubits, int n_layers);

/// n_qubits seeded random gates per layer; see kRandomCnotRatio.
CircuitTemplate random_circuit(int n_qubits, int n_layers, std::uint64_t seed);

/// QCNN convolution + pooling stages on a halving set of active wires.
CircuitTemplate qcnn_block(int n_qubits, int n_stages);

/// Maximum stage count of qcnn_block for a given width: floor(log2 n).
[[nodiscard]] int qcnn_max_stages(int n_qubits);

/// Entangler of the requested family; `seed` only matters for RC.
CircuitTemplate entangler(EntanglerKind kind, int n_qubits, int n_layers,
                          std::uint64_t seed);

/// `encoding` followed by `body` on the same register. The result keeps the
/// body's trainable slots and readout and the encoding's input slots.
CircuitTemplate compose(const CircuitTemplate &encoding,
                        const CircuitTemplate &body);

} // namespace qhybrid::templates
