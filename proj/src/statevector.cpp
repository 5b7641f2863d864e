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

#include "qmc/statevector.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qmc/error.hpp"
#include "qmc/kernels.hpp"

namespace qmc {
namespace {

void check_qubit_count(std::size_t n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error(ErrorKind::CapExceeded, "qubit count " + std::to_string(n_qubits) +
                                            " outside [1, " + std::to_string(kMaxQubits) +
                                            "]");
  }
}

bool needs_control(GateKind kind) {
  return kind == GateKind::CNOT || kind == GateKind::CPHASE || kind == GateKind::SWAP;
}

}  // namespace

std::string_view to_string(GateKind kind) noexcept {
  switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::H: return "H";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CPHASE: return "CPHASE";
    case GateKind::SWAP: return "SWAP";
  }
  return "?";
}

void GateOp::validate(std::size_t n_qubits) const {
  if (target >= n_qubits) {
    throw Error(ErrorKind::Index, std::string(to_string(kind)) + ": target qubit " +
                                      std::to_string(target) + " >= " +
                                      std::to_string(n_qubits));
  }
  if (needs_control(kind)) {
    if (!control) {
      throw Error(ErrorKind::InvalidInput,
                  std::string(to_string(kind)) + " requires a second qubit");
    }
    if (*control >= n_qubits) {
      throw Error(ErrorKind::Index, std::string(to_string(kind)) + ": control qubit " +
                                        std::to_string(*control) + " >= " +
                                        std::to_string(n_qubits));
    }
    if (*control == target) {
      throw Error(ErrorKind::InvalidInput,
                  std::string(to_string(kind)) + ": control equals target");
    }
  } else if (control) {
    throw Error(ErrorKind::InvalidInput,
                std::string(to_string(kind)) + " takes no control qubit");
  }
  if (!std::isfinite(angle)) {
    throw Error(ErrorKind::InvalidInput, "non-finite gate angle");
  }
}

GateOp GateOp::inverse() const {
  GateOp inv = *this;
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::CPHASE:
      inv.angle = -angle;
      break;
    case GateKind::H:
    case GateKind::CNOT:
    case GateKind::SWAP:
      break;
  }
  return inv;
}

Circuit::Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
}

Circuit& Circuit::add(const GateOp& gate) {
  gate.validate(n_qubits_);
  gates_.push_back(gate);
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.n_qubits_ != n_qubits_) {
    throw Error(ErrorKind::Shape, "cannot append a " + std::to_string(other.n_qubits_) +
                                      "-qubit circuit to a " + std::to_string(n_qubits_) +
                                      "-qubit circuit");
  }
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

Circuit Circuit::inverse() const {
  Circuit inv(n_qubits_);
  inv.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) inv.gates_.push_back(it->inverse());
  return inv;
}

GateMatrix single_qubit_matrix(GateKind kind, double angle) {
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  switch (kind) {
    case GateKind::RX:
      return {{c, 0.0}, {0.0, -s}, {0.0, -s}, {c, 0.0}};
    case GateKind::RY:
      return {{c, 0.0}, {-s, 0.0}, {s, 0.0}, {c, 0.0}};
    case GateKind::RZ:
      return {{c, -s}, {0.0, 0.0}, {0.0, 0.0}, {c, s}};
    case GateKind::H: {
      const double r = std::numbers::sqrt2 / 2.0;
      return {{r, 0.0}, {r, 0.0}, {r, 0.0}, {-r, 0.0}};
    }
    default:
      throw Error(ErrorKind::InvalidInput,
                  std::string(to_string(kind)) + " is not a single-qubit gate");
  }
}

QuantumState::QuantumState(std::size_t n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
  amps_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
  amps_[0] = 1.0;
}

QuantumState QuantumState::from_amplitudes(std::size_t n_qubits, std::vector<Complex> amps) {
  check_qubit_count(n_qubits);
  if (amps.size() != (std::size_t{1} << n_qubits)) {
    throw Error(ErrorKind::Shape, "expected " + std::to_string(std::size_t{1} << n_qubits) +
                                      " amplitudes, got " + std::to_string(amps.size()));
  }
  QuantumState s(n_qubits, std::move(amps));
  if (std::abs(s.norm_squared() - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidInput, "amplitudes are not unit-norm");
  }
  return s;
}

QuantumState& QuantumState::apply(const GateOp& gate) {
  gate.validate(n_qubits_);
  std::span<Complex> view(amps_);
  switch (gate.kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::H: {
      const GateMatrix g = single_qubit_matrix(gate.kind, gate.angle);
      kernels::parallel::apply_1q(view, gate.target, {g.m00, g.m01, g.m10, g.m11});
      break;
    }
    case GateKind::CNOT:
      kernels::parallel::apply_cnot(view, *gate.control, gate.target);
      break;
    case GateKind::CPHASE:
      kernels::parallel::apply_cphase(view, *gate.control, gate.target, gate.angle);
      break;
    case GateKind::SWAP:
      kernels::parallel::apply_swap(view, gate.target, *gate.control);
      break;
  }
  return *this;
}

QuantumState& QuantumState::run(const Circuit& circuit) {
  if (circuit.n_qubits() != n_qubits_) {
    throw Error(ErrorKind::Shape, std::to_string(circuit.n_qubits()) +
                                      "-qubit circuit run on a " + std::to_string(n_qubits_) +
                                      "-qubit state");
  }
  for (const GateOp& g : circuit.gates()) apply(g);
  return *this;
}

double QuantumState::norm_squared() const noexcept {
  double acc = 0.0;
  for (const Complex& a : amps_) acc += std::norm(a);
  return acc;
}

QuantumState new_zero_state(std::size_t n_qubits) { return QuantumState(n_qubits); }

QuantumState apply_gate(QuantumState state, const GateOp& gate) {
  state.apply(gate);
  return state;
}

QuantumState run_circuit(QuantumState state, const Circuit& circuit) {
  state.run(circuit);
  return state;
}

Circuit qft_circuit(std::size_t n_qubits) {
  Circuit c(n_qubits);
  // Most-significant qubit first; each receives phases from the lower ones.
  for (std::size_t j = n_qubits; j-- > 0;) {
    c.add(GateOp::h(j));
    for (std::size_t k = j; k-- > 0;) {
      const double phi = std::numbers::pi / static_cast<double>(std::size_t{1} << (j - k));
      c.add(GateOp::cphase(k, j, phi));
    }
  }
  for (std::size_t i = 0; i < n_qubits / 2; ++i) c.add(GateOp::swap(i, n_qubits - 1 - i));
  return c;
}

double expectation_z(const QuantumState& state, const Observable& obs) {
  if (obs.qubit >= state.n_qubits()) {
    throw Error(ErrorKind::Index, "observable qubit " + std::to_string(obs.qubit) +
                                      " >= " + std::to_string(state.n_qubits()));
  }
  return kernels::parallel::expectation_z(state.amplitudes(), obs.qubit);
}

std::vector<double> probabilities(const QuantumState& state) {
  std::vector<double> p(state.dimension());
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(amps[i]);
  return p;
}

Complex inner_product(const QuantumState& a, const QuantumState& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw Error(ErrorKind::Shape, "inner product of " + std::to_string(a.n_qubits()) +
                                      "- and " + std::to_string(b.n_qubits()) +
                                      "-qubit states");
  }
  Complex acc{0.0, 0.0};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

}  // namespace qmc
