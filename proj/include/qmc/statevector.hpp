// Copyright 2026 The qmc Authors
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
 * Exact dense state-vector simulation.
 *
 * Conventions:
 *  - qubit 0 is the least-significant bit of the basis index, so |q1 q0> = |10>
 *    is index 2;
 *  - rotations use the half-angle form R_a(theta) = exp(-i theta sigma_a / 2);
 *  - global phase is never normalized away.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace qmc {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 20;

enum class GateKind { RX, RY, RZ, H, CNOT, CPHASE, SWAP };

std::string_view to_string(GateKind kind) noexcept;

/// One gate. `control` is the control qubit for CNOT/CPHASE and the second
/// swapped qubit for SWAP; `angle` is used by RX/RY/RZ/CPHASE.
struct GateOp {
  GateKind kind = GateKind::H;
  std::size_t target = 0;
  std::optional<std::size_t> control;
  double angle = 0.0;

  static GateOp rx(std::size_t q, double theta) { return {GateKind::RX, q, {}, theta}; }
  static GateOp ry(std::size_t q, double theta) { return {GateKind::RY, q, {}, theta}; }
  static GateOp rz(std::size_t q, double theta) { return {GateKind::RZ, q, {}, theta}; }
  static GateOp h(std::size_t q) { return {GateKind::H, q, {}, 0.0}; }
  static GateOp cnot(std::size_t control, std::size_t target) {
    return {GateKind::CNOT, target, control, 0.0};
  }
  static GateOp cphase(std::size_t control, std::size_t target, double phi) {
    return {GateKind::CPHASE, target, control, phi};
  }
  static GateOp swap(std::size_t a, std::size_t b) { return {GateKind::SWAP, a, b, 0.0}; }

  bool is_rotation() const noexcept {
    return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
  }
  /// Throws Error{Index} / Error{InvalidInput} if the gate cannot act on n qubits.
  void validate(std::size_t n_qubits) const;
  GateOp inverse() const;

  friend bool operator==(const GateOp&, const GateOp&) = default;
};

class Circuit {
 public:
  explicit Circuit(std::size_t n_qubits);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::span<const GateOp> gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  /// Appends a gate after validating it against n_qubits().
  Circuit& add(const GateOp& gate);
  Circuit& append(const Circuit& other);

  /// Reversed order with every gate inverted.
  Circuit inverse() const;

  /// Mutable access to the angle of gate `index` (used by shift rules).
  double& angle_at(std::size_t index) { return gates_.at(index).angle; }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t n_qubits_;
  std::vector<GateOp> gates_;
};

struct Observable {
  std::size_t qubit = 0;  // Pauli-Z on this qubit

  friend bool operator==(const Observable&, const Observable&) = default;
};

class QuantumState {
 public:
  /// |0...0> on n qubits. Throws Error{CapExceeded} outside [1, kMaxQubits].
  explicit QuantumState(std::size_t n_qubits);

  /// Wraps explicit amplitudes; length must be 2^n_qubits and the norm 1
  /// within 1e-10.
  static QuantumState from_amplitudes(std::size_t n_qubits, std::vector<Complex> amps);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }

  QuantumState& apply(const GateOp& gate);
  QuantumState& run(const Circuit& circuit);

  double norm_squared() const noexcept;

 private:
  QuantumState(std::size_t n_qubits, std::vector<Complex> amps)
      : n_qubits_(n_qubits), amps_(std::move(amps)) {}

  std::size_t n_qubits_;
  std::vector<Complex> amps_;
};

QuantumState new_zero_state(std::size_t n_qubits);
QuantumState apply_gate(QuantumState state, const GateOp& gate);
QuantumState run_circuit(QuantumState state, const Circuit& circuit);

/// Hadamard + controlled-phase ladder + bit-reversal swaps. On |x> produces
/// sum_k omega^{kx} |k> / sqrt(N) with omega = exp(2 pi i / N).
Circuit qft_circuit(std::size_t n_qubits);

double expectation_z(const QuantumState& state, const Observable& obs);
std::vector<double> probabilities(const QuantumState& state);
Complex inner_product(const QuantumState& a, const QuantumState& b);

/// The 2x2 matrix of a single-qubit gate (RX, RY, RZ, H).
struct GateMatrix {
  Complex m00, m01, m10, m11;
};
GateMatrix single_qubit_matrix(GateKind kind, double angle);

}  // namespace qmc
