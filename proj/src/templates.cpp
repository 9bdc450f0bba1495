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
#include "qhybrid/templates.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <string>

#include "qhybrid/error.hpp"
#include "qhybrid/rng.hpp"

namespace qhybrid::templates {

using qsim::GateOp;

namespace {

void check_entangler_sizes(std::string_view name, int n_qubits, int n_layers,
                           int max_layers) {
    if (n_qubits < 2 || n_qubits > qsim::kMaxQubits) {
        throw ConfigError(std::string(name) + " needs 2.." +
                          std::to_string(qsim::kMaxQubits) + " qubits, got " +
                          std::to_string(n_qubits));
    }
    if (n_layers < 1 || n_layers > max_layers) {
        throw ConfigError(std::string(name) + " needs 1.." +
                          std::to_string(max_layers) + " layers, got " +
                          std::to_string(n_layers));
    }
}

std::vector<int> all_wires(int n) {
    std::vector<int> wires(static_cast<std::size_t>(n));
    std::iota(wires.begin(), wires.end(), 0);
    return wires;
}

// CNOT ring over `wires`; two wires get a single CNOT instead of a 2-cycle.
void append_ring(std::vector<GateOp> &gates, const std::vector<int> &wires) {
    const std::size_t n = wires.size();
    if (n < 2) {
        return;
    }
    if (n == 2) {
        gates.push_back(GateOp::cnot(wires[0], wires[1]));
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        gates.push_back(GateOp::cnot(wires[i], wires[(i + 1) % n]));
    }
}

} // namespace

std::string_view to_string(EntanglerKind kind) {
    switch (kind) {
    case EntanglerKind::RC:
        return "RC";
    case EntanglerKind::BE:
        return "BE";
    case EntanglerKind::SE:
        return "SE";
    }
    return "?";
}

EntanglerKind parse_entangler(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (upper == "RC") {
        return EntanglerKind::RC;
    }
    if (upper == "BE") {
        return EntanglerKind::BE;
    }
    if (upper == "SE") {
        return EntanglerKind::SE;
    }
    throw ConfigError("unknown entangler '" + std::string(text) +
                      "' (expected RC, BE or SE)");
}

void CircuitTemplate::validate() const {
    if (n_params < 0 || n_inputs < 0) {
        throw ConfigError("negative slot count in circuit template");
    }
    std::vector<bool> used(static_cast<std::size_t>(n_slots()), false);
    for (const auto &gate : gates) {
        qsim::validate_gate(gate, n_qubits);
        for (const int slot : gate.param_slots) {
            if (slot < 0 || slot >= n_slots()) {
                throw ParameterError("slot " + std::to_string(slot) +
                                     " outside template range");
            }
            used[static_cast<std::size_t>(slot)] = true;
        }
    }
    const auto unused = std::find(used.begin(), used.end(), false);
    if (unused != used.end()) {
        throw ParameterError("slot " + std::to_string(unused - used.begin()) +
                             " is never referenced");
    }
    for (const int w : readout.wires) {
        if (w < 0 || w >= n_qubits) {
            throw DimensionError("readout wire " + std::to_string(w) +
                                 " out of range");
        }
    }
}

CircuitTemplate angle_encoding(int n_qubits) {
    if (n_qubits < 1 || n_qubits > qsim::kMaxQubits) {
        throw ConfigError("angle encoding needs 1.." +
                          std::to_string(qsim::kMaxQubits) + " qubits");
    }
    CircuitTemplate t;
    t.n_qubits = n_qubits;
    t.n_inputs = n_qubits;
    for (int w = 0; w < n_qubits; ++w) {
        t.gates.push_back(GateOp::ry(w, w));
    }
    t.readout.wires = all_wires(n_qubits);
    return t;
}

CircuitTemplate basic_entangling(int n_qubits, int n_layers) {
    check_entangler_sizes("basic entangling", n_qubits, n_layers, kMaxLayers);
    CircuitTemplate t;
    t.n_qubits = n_qubits;
    const auto wires = all_wires(n_qubits);
    for (int l = 0; l < n_layers; ++l) {
        for (int w = 0; w < n_qubits; ++w) {
            t.gates.push_back(GateOp::rx(w, t.n_params++));
        }
        append_ring(t.gates, wires);
    }
    t.readout.wires = wires;
    return t;
}

CircuitTemplate strongly_entangling(int n_qubits, int n_layers) {
    check_entangler_sizes("strongly entangling", n_qubits, n_layers, kMaxLayers);
    CircuitTemplate t;
    t.n_qubits = n_qubits;
    for (int l = 0; l < n_layers; ++l) {
        for (int w = 0; w < n_qubits; ++w) {
            const int base = t.n_params;
            t.gates.push_back(GateOp::rot(w, base, base + 1, base + 2));
            t.n_params += 3;
        }
        const int range = (l % (n_qubits - 1)) + 1;
        for (int w = 0; w < n_qubits; ++w) {
            t.gates.push_back(GateOp::cnot(w, (w + range) % n_qubits));
        }
    }
    t.readout.wires = all_wires(n_qubits);
    return t;
}

CircuitTemplate random_circuit(int n_qubits, int n_layers, std::uint64_t seed) {
    check_entangler_sizes("random circuit", n_qubits, n_layers, 1 << 16);
    Rng rng(seed);
    CircuitTemplate t;
    t.n_qubits = n_qubits;
    const auto n = static_cast<std::uint64_t>(n_qubits);
    constexpr qsim::GateKind kRotations[] = {
        qsim::GateKind::RX, qsim::GateKind::RY, qsim::GateKind::RZ};
    for (int l = 0; l < n_layers; ++l) {
        for (int g = 0; g < n_qubits; ++g) {
            if (rng.uniform() < kRandomCnotRatio) {
                const auto control = static_cast<int>(rng.below(n));
                // Draw the target from the other n - 1 wires.
                auto target = static_cast<int>(rng.below(n - 1));
                if (target >= control) {
                    ++target;
                }
                t.gates.push_back(GateOp::cnot(control, target));
            } else {
                const auto kind = kRotations[rng.below(3)];
                const auto wire = static_cast<int>(rng.below(n));
                t.gates.push_back(GateOp{kind, {wire}, {t.n_params++}});
            }
        }
    }
    t.readout.wires = all_wires(n_qubits);
    return t;
}

int qcnn_max_stages(int n_qubits) {
    int stages = 0;
    while ((2 << stages) <= n_qubits) {
        ++stages;
    }
    return stages;
}

CircuitTemplate qcnn_block(int n_qubits, int n_stages) {
    if (n_qubits != 4 && n_qubits != 8) {
        throw ConfigError("QCNN block supports 4 or 8 qubits, got " +
                          std::to_string(n_qubits));
    }
    if (n_stages < 1 || n_stages > qcnn_max_stages(n_qubits)) {
        throw ConfigError("QCNN block on " + std::to_string(n_qubits) +
                          " qubits supports 1.." +
                          std::to_string(qcnn_max_stages(n_qubits)) +
                          " stages, got " + std::to_string(n_stages));
    }
    CircuitTemplate t;
    t.n_qubits = n_qubits;
    auto active = all_wires(n_qubits);
    for (int s = 0; s < n_stages; ++s) {
        // convolution
        for (const int w : active) {
            const int base = t.n_params;
            t.gates.push_back(GateOp::rot(w, base, base + 1, base + 2));
            t.n_params += 3;
        }
        append_ring(t.gates, active);
        // pooling: CRZ(a) * CRX(b) from each source into its sink
        std::vector<int> sinks;
        for (std::size_t i = 0; i + 1 < active.size(); i += 2) {
            const int source = active[i];
            const int sink = active[i + 1];
            t.gates.push_back(GateOp::crx(source, sink, t.n_params++));
            t.gates.push_back(GateOp::crz(source, sink, t.n_params++));
            sinks.push_back(sink);
        }
        active = std::move(sinks);
    }
    t.readout.wires = active;
    return t;
}

CircuitTemplate entangler(EntanglerKind kind, int n_qubits, int n_layers,
                          std::uint64_t seed) {
    switch (kind) {
    case EntanglerKind::RC:
        return random_circuit(n_qubits, n_layers, seed);
    case EntanglerKind::BE:
        return basic_entangling(n_qubits, n_layers);
    case EntanglerKind::SE:
        return strongly_entangling(n_qubits, n_layers);
    }
    throw ConfigError("unknown entangler kind");
}

CircuitTemplate compose(const CircuitTemplate &encoding,
                        const CircuitTemplate &body) {
    if (encoding.n_qubits != body.n_qubits) {
        throw DimensionError("cannot compose templates on " +
                             std::to_string(encoding.n_qubits) + " and " +
                             std::to_string(body.n_qubits) + " qubits");
    }
    if (encoding.n_params != 0 || body.n_inputs != 0) {
        throw ConfigError("compose expects an input-only encoding and a "
                          "trainable-only body");
    }
    CircuitTemplate out;
    out.n_qubits = body.n_qubits;
    out.n_params = body.n_params;
    out.n_inputs = encoding.n_inputs;
    out.gates.reserve(encoding.gates.size() + body.gates.size());
    for (auto gate : encoding.gates) {
        for (int &slot : gate.param_slots) {
            slot += body.n_params;
        }
        out.gates.push_back(std::move(gate));
    }
    out.gates.insert(out.gates.end(), body.gates.begin(), body.gates.end());
    out.readout = body.readout;
    return out;
}

} // namespace qhybrid::templates
