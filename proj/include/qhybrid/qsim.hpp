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
 * Dense statevector simulation of small qubit registers.
 *
 * Bit convention: wire 0 is the most significant bit of a basis index, so
 * on 2 qubits index 2 (binary 10) is |1>|0>.
 */
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace qhybrid::qsim {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 12;
inline constexpr int kMaxOracleQubits = 6;

/// Gate set used by every circuit in the library. CRX/CRZ are needed by
/// the QCNN pooling blocks.
enum class GateKind : std::uint8_t { RX, RY, RZ, ROT, CNOT, CRX, CRZ };

[[nodiscard]] std::string_view to_string(GateKind kind);
[[nodiscard]] std::size_t wire_arity(GateKind kind);
[[nodiscard]] std::size_t param_arity(GateKind kind);
[[nodiscard]] bool is_controlled(GateKind kind);

/// One gate in a circuit program. Angles are looked up through
/// `param_slots` in the angle vector handed to the simulator.
struct GateOp {
    GateKind kind{GateKind::RX};
    std::vector<int> wires;
    std::vector<int> param_slots;

    static GateOp rx(int wire, int slot) { return {GateKind::RX, {wire}, {slot}}; }
    static GateOp ry(int wire, int slot) { return {GateKind::RY, {wire}, {slot}}; }
    static GateOp rz(int wire, int slot) { return {GateKind::RZ, {wire}, {slot}}; }
    static GateOp rot(int wire, int phi, int theta, int omega) {
        return {GateKind::ROT, {wire}, {phi, theta, omega}};
    }
    static GateOp cnot(int control, int target) {
        return {GateKind::CNOT, {control, target}, {}};
    }
    static GateOp crx(int control, int target, int slot) {
        return {GateKind::CRX, {control, target}, {slot}};
    }
    static GateOp crz(int control, int target, int slot) {
        return {GateKind::CRZ, {control, target}, {slot}};
    }

    bool operator==(const GateOp &) const = default;
};

/// Single-qubit Pauli-Z readout on a list of distinct wires.
struct Observable {
    std::vector<int> wires;
};

class StateVector {
  public:
    /// |0...0> on `n_qubits` wires.
    explicit StateVector(int n_qubits);

    [[nodiscard]] int n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }

    [[nodiscard]] std::span<Complex> amplitudes() { return amps_; }
    [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }

    Complex &operator[](std::size_t i) { return amps_[i]; }
    const Complex &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm_squared() const;

    /// Reset to |0...0> without reallocating.
    void reset();

  private:
    int n_qubits_;
    std::vector<Complex> amps_;
};

/// Row-major 2x2 matrix {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

[[nodiscard]] Mat2 rotation_matrix(GateKind axis, double angle);
/// RZ(omega) * RY(theta) * RZ(phi).
[[nodiscard]] Mat2 rot_matrix(double phi, double theta, double omega);

StateVector zero_state(int n_qubits);

/// Checks wire range/distinctness against `n_qubits` and slot arity.
void validate_gate(const GateOp &gate, int n_qubits);

/// Applies `gate` in place, reading its angles from `params` via the slots.
void apply_gate(StateVector &state, const GateOp &gate,
                std::span<const double> params);

/// Applies `gate` with explicitly supplied angles (one per slot), skipping
/// the slot lookup. Wires are assumed validated.
void apply_gate_angles(StateVector &state, const GateOp &gate,
                       std::span<const double> angles);

void apply_single(StateVector &state, int wire, const Mat2 &m);
void apply_controlled(StateVector &state, int control, int target,
                      const Mat2 &m);
void apply_cnot(StateVector &state, int control, int target);

StateVector run_circuit(int n_qubits, std::span<const GateOp> gates,
                        std::span<const double> params);

/// <Z> per observable wire.
std::vector<double> expval_z(const StateVector &state,
                             const Observable &observable);

/// Square complex matrix, row-major.
struct DenseMatrix {
    std::size_t dim{0};
    std::vector<Complex> data;

    Complex &operator()(std::size_t r, std::size_t c) { return data[r * dim + c]; }
    Complex operator()(std::size_t r, std::size_t c) const {
        return data[r * dim + c];
    }
};

/// Explicit product of Kronecker-embedded gate unitaries. Test oracle only;
/// limited to kMaxOracleQubits.
DenseMatrix dense_unitary(int n_qubits, std::span<const GateOp> gates,
                          std::span<const double> params);

} // namespace qhybrid::qsim
