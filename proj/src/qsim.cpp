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
#include "qhybrid/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qhybrid/error.hpp"

namespace qhybrid::qsim {

namespace {

// std::complex operator* goes through the Annex G NaN recovery path;
// the kernels only ever see finite values.
inline Complex cmul(const Complex &a, const Complex &b) {
    return {a.real() * b.real() - a.imag() * b.imag(),
            a.real() * b.imag() + a.imag() * b.real()};
}

inline std::size_t wire_bit(int n_qubits, int wire) {
    return std::size_t{1} << static_cast<unsigned>(n_qubits - 1 - wire);
}

Mat2 matmul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

void check_qubit_count(int n_qubits, int limit) {
    if (n_qubits < 1 || n_qubits > limit) {
        throw ConfigError("qubit count " + std::to_string(n_qubits) +
                          " outside [1, " + std::to_string(limit) + "]");
    }
}

} // namespace

std::string_view to_string(GateKind kind) {
    switch (kind) {
    case GateKind::RX:
        return "RX";
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    case GateKind::ROT:
        return "ROT";
    case GateKind::CNOT:
        return "CNOT";
    case GateKind::CRX:
        return "CRX";
    case GateKind::CRZ:
        return "CRZ";
    }
    return "?";
}

std::size_t wire_arity(GateKind kind) {
    switch (kind) {
    case GateKind::CNOT:
    case GateKind::CRX:
    case GateKind::CRZ:
        return 2;
    default:
        return 1;
    }
}

std::size_t param_arity(GateKind kind) {
    switch (kind) {
    case GateKind::CNOT:
        return 0;
    case GateKind::ROT:
        return 3;
    default:
        return 1;
    }
}

bool is_controlled(GateKind kind) {
    return kind == GateKind::CRX || kind == GateKind::CRZ;
}

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    check_qubit_count(n_qubits, kMaxQubits);
    amps_.assign(std::size_t{1} << static_cast<unsigned>(n_qubits), Complex{});
    amps_[0] = 1.0;
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::reset() {
    std::fill(amps_.begin(), amps_.end(), Complex{});
    amps_[0] = 1.0;
}

Mat2 rotation_matrix(GateKind axis, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    switch (axis) {
    case GateKind::RX:
    case GateKind::CRX:
        return {Complex{c, 0}, Complex{0, -s}, Complex{0, -s}, Complex{c, 0}};
    case GateKind::RY:
        return {Complex{c, 0}, Complex{-s, 0}, Complex{s, 0}, Complex{c, 0}};
    case GateKind::RZ:
    case GateKind::CRZ:
        return {Complex{c, -s}, Complex{}, Complex{}, Complex{c, s}};
    default:
        throw ConfigError("no rotation axis for gate " +
                          std::string(to_string(axis)));
    }
}

Mat2 rot_matrix(double phi, double theta, double omega) {
    return matmul(rotation_matrix(GateKind::RZ, omega),
                  matmul(rotation_matrix(GateKind::RY, theta),
                         rotation_matrix(GateKind::RZ, phi)));
}

StateVector zero_state(int n_qubits) { return StateVector(n_qubits); }

void validate_gate(const GateOp &gate, int n_qubits) {
    if (gate.wires.size() != wire_arity(gate.kind)) {
        throw DimensionError(std::string(to_string(gate.kind)) + " expects " +
                             std::to_string(wire_arity(gate.kind)) + " wires");
    }
    for (std::size_t i = 0; i < gate.wires.size(); ++i) {
        const int w = gate.wires[i];
        if (w < 0 || w >= n_qubits) {
            throw DimensionError("wire " + std::to_string(w) +
                                 " out of range for " +
                                 std::to_string(n_qubits) + " qubits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (gate.wires[j] == w) {
                throw DimensionError("repeated wire " + std::to_string(w));
            }
        }
    }
    if (gate.param_slots.size() != param_arity(gate.kind)) {
        throw ParameterError(std::string(to_string(gate.kind)) + " expects " +
                             std::to_string(param_arity(gate.kind)) +
                             " parameter slots");
    }
}

void apply_single(StateVector &state, int wire, const Mat2 &m) {
    auto amps = state.amplitudes();
    const std::size_t stride = wire_bit(state.n_qubits(), wire);
    const std::size_t dim = amps.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Complex a = amps[i];
            const Complex b = amps[i + stride];
            amps[i] = cmul(m[0], a) + cmul(m[1], b);
            amps[i + stride] = cmul(m[2], a) + cmul(m[3], b);
        }
    }
}

void apply_controlled(StateVector &state, int control, int target,
                      const Mat2 &m) {
    auto amps = state.amplitudes();
    const std::size_t cbit = wire_bit(state.n_qubits(), control);
    const std::size_t tbit = wire_bit(state.n_qubits(), target);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cbit) == 0 || (i & tbit) != 0) {
            continue;
        }
        const Complex a = amps[i];
        const Complex b = amps[i | tbit];
        amps[i] = cmul(m[0], a) + cmul(m[1], b);
        amps[i | tbit] = cmul(m[2], a) + cmul(m[3], b);
    }
}

void apply_cnot(StateVector &state, int control, int target) {
    auto amps = state.amplitudes();
    const std::size_t cbit = wire_bit(state.n_qubits(), control);
    const std::size_t tbit = wire_bit(state.n_qubits(), target);
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            std::swap(amps[i], amps[i | tbit]);
        }
    }
}

void apply_gate_angles(StateVector &state, const GateOp &gate,
                       std::span<const double> angles) {
    switch (gate.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
        apply_single(state, gate.wires[0],
                     rotation_matrix(gate.kind, angles[0]));
        break;
    case GateKind::ROT:
        apply_single(state, gate.wires[0],
                     rot_matrix(angles[0], angles[1], angles[2]));
        break;
    case GateKind::CNOT:
        apply_cnot(state, gate.wires[0], gate.wires[1]);
        break;
    case GateKind::CRX:
    case GateKind::CRZ:
        apply_controlled(state, gate.wires[0], gate.wires[1],
                         rotation_matrix(gate.kind, angles[0]));
        break;
    }
}

void apply_gate(StateVector &state, const GateOp &gate,
                std::span<const double> params) {
    validate_gate(gate, state.n_qubits());
    std::array<double, 3> angles{};
    for (std::size_t i = 0; i < gate.param_slots.size(); ++i) {
        const int slot = gate.param_slots[i];
        if (slot < 0 || static_cast<std::size_t>(slot) >= params.size()) {
            throw ParameterError("parameter slot " + std::to_string(slot) +
                                 " not supplied (have " +
                                 std::to_string(params.size()) + ")");
        }
        angles[i] = params[static_cast<std::size_t>(slot)];
    }
    apply_gate_angles(state, gate, angles);
}

StateVector run_circuit(int n_qubits, std::span<const GateOp> gates,
                        std::span<const double> params) {
    StateVector state(n_qubits);
    for (const auto &gate : gates) {
        apply_gate(state, gate, params);
    }
    return state;
}

std::vector<double> expval_z(const StateVector &state,
                             const Observable &observable) {
    const int n = state.n_qubits();
    std::vector<double> out;
    out.reserve(observable.wires.size());
    for (std::size_t k = 0; k < observable.wires.size(); ++k) {
        const int w = observable.wires[k];
        if (w < 0 || w >= n) {
            throw DimensionError("observable wire " + std::to_string(w) +
                                 " out of range for " + std::to_string(n) +
                                 " qubits");
        }
        for (std::size_t j = 0; j < k; ++j) {
            if (observable.wires[j] == w) {
                throw DimensionError("repeated observable wire " +
                                     std::to_string(w));
            }
        }
    }
    for (const int w : observable.wires) {
        const std::size_t bit = wire_bit(n, w);
        double total = 0.0;
        for (std::size_t i = 0; i < state.dim(); ++i) {
            const double p = std::norm(state[i]);
            total += (i & bit) ? -p : p;
        }
        out.push_back(total);
    }
    return out;
}

namespace {

DenseMatrix identity(std::size_t dim) {
    DenseMatrix m{dim, std::vector<Complex>(dim * dim)};
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

// Kronecker product of one 2x2 factor per wire, wire 0 leftmost.
DenseMatrix kron_chain(const std::vector<Mat2> &factors) {
    DenseMatrix acc{1, {Complex{1.0}}};
    for (const auto &f : factors) {
        DenseMatrix next{acc.dim * 2, std::vector<Complex>(acc.dim * acc.dim * 4)};
        for (std::size_t r = 0; r < acc.dim; ++r) {
            for (std::size_t c = 0; c < acc.dim; ++c) {
                for (std::size_t fr = 0; fr < 2; ++fr) {
                    for (std::size_t fc = 0; fc < 2; ++fc) {
                        next(r * 2 + fr, c * 2 + fc) = acc(r, c) * f[fr * 2 + fc];
                    }
                }
            }
        }
        acc = std::move(next);
    }
    return acc;
}

DenseMatrix add(const DenseMatrix &a, const DenseMatrix &b) {
    DenseMatrix out = a;
    for (std::size_t i = 0; i < out.data.size(); ++i) {
        out.data[i] += b.data[i];
    }
    return out;
}

DenseMatrix multiply(const DenseMatrix &a, const DenseMatrix &b) {
    DenseMatrix out{a.dim, std::vector<Complex>(a.dim * a.dim)};
    for (std::size_t r = 0; r < a.dim; ++r) {
        for (std::size_t k = 0; k < a.dim; ++k) {
            const Complex x = a(r, k);
            if (x == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < a.dim; ++c) {
                out(r, c) += x * b(k, c);
            }
        }
    }
    return out;
}

constexpr Mat2 kIdentity{Complex{1}, Complex{}, Complex{}, Complex{1}};
constexpr Mat2 kProj0{Complex{1}, Complex{}, Complex{}, Complex{}};
constexpr Mat2 kProj1{Complex{}, Complex{}, Complex{}, Complex{1}};
constexpr Mat2 kPauliX{Complex{}, Complex{1}, Complex{1}, Complex{}};

DenseMatrix embed_single(int n, int wire, const Mat2 &m) {
    std::vector<Mat2> factors(static_cast<std::size_t>(n), kIdentity);
    factors[static_cast<std::size_t>(wire)] = m;
    return kron_chain(factors);
}

DenseMatrix embed_controlled(int n, int control, int target, const Mat2 &m) {
    std::vector<Mat2> off(static_cast<std::size_t>(n), kIdentity);
    off[static_cast<std::size_t>(control)] = kProj0;
    std::vector<Mat2> on(static_cast<std::size_t>(n), kIdentity);
    on[static_cast<std::size_t>(control)] = kProj1;
    on[static_cast<std::size_t>(target)] = m;
    return add(kron_chain(off), kron_chain(on));
}

} // namespace

DenseMatrix dense_unitary(int n_qubits, std::span<const GateOp> gates,
                          std::span<const double> params) {
    check_qubit_count(n_qubits, kMaxOracleQubits);
    DenseMatrix u = identity(std::size_t{1} << static_cast<unsigned>(n_qubits));
    auto angle = [&](const GateOp &g, std::size_t i) {
        const int slot = g.param_slots[i];
        if (slot < 0 || static_cast<std::size_t>(slot) >= params.size()) {
            throw ParameterError("parameter slot " + std::to_string(slot) +
                                 " not supplied");
        }
        return params[static_cast<std::size_t>(slot)];
    };
    for (const auto &g : gates) {
        validate_gate(g, n_qubits);
        std::vector<DenseMatrix> factors;
        switch (g.kind) {
        case GateKind::RX:
        case GateKind::RY:
        case GateKind::RZ:
            factors.push_back(
                embed_single(n_qubits, g.wires[0], rotation_matrix(g.kind, angle(g, 0))));
            break;
        case GateKind::ROT:
            // Applied right to left: RZ(phi) first.
            factors.push_back(embed_single(
                n_qubits, g.wires[0], rotation_matrix(GateKind::RZ, angle(g, 0))));
            factors.push_back(embed_single(
                n_qubits, g.wires[0], rotation_matrix(GateKind::RY, angle(g, 1))));
            factors.push_back(embed_single(
                n_qubits, g.wires[0], rotation_matrix(GateKind::RZ, angle(g, 2))));
            break;
        case GateKind::CNOT:
            factors.push_back(
                embed_controlled(n_qubits, g.wires[0], g.wires[1], kPauliX));
            break;
        case GateKind::CRX:
        case GateKind::CRZ:
            factors.push_back(embed_controlled(n_qubits, g.wires[0], g.wires[1],
                                               rotation_matrix(g.kind, angle(g, 0))));
            break;
        }
        for (const auto &f : factors) {
            u = multiply(f, u);
        }
    }
    return u;
}

} // namespace qhybrid::qsim
