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

#include "qmc/encoding.hpp"

#include <cmath>
#include <string>

#include "qmc/error.hpp"

namespace qmc {
namespace {

constexpr double kMinNorm = 1e-12;

std::size_t qubits_for(std::size_t dim) {
  std::size_t n = 1;
  while ((std::size_t{1} << n) < dim) ++n;
  return n;
}

}  // namespace

std::string_view to_string(Encoding e) noexcept {
  return e == Encoding::Angle ? "angle" : "amplitude";
}

Encoding encoding_from_string(std::string_view s) {
  if (s == "angle") return Encoding::Angle;
  if (s == "amplitude") return Encoding::Amplitude;
  throw Error(ErrorKind::Config, "unknown encoding '" + std::string(s) + "'");
}

void FeatureMapSpec::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error(ErrorKind::CapExceeded,
                "feature map qubit count " + std::to_string(n_qubits) + " outside [1, " +
                    std::to_string(kMaxQubits) + "]");
  }
  if (repetitions < 1) throw Error(ErrorKind::InvalidInput, "repetitions must be >= 1");
}

std::size_t FeatureMapSpec::max_features() const noexcept {
  return encoding == Encoding::Angle ? n_qubits : (std::size_t{1} << n_qubits);
}

void check_finite(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw Error(ErrorKind::InvalidInput,
                  "feature " + std::to_string(i) + " is not a finite number");
    }
  }
}

QuantumState amplitude_encode(std::span<const double> x) {
  if (x.empty()) throw Error(ErrorKind::DegenerateInput, "empty feature vector");
  return amplitude_encode(x, qubits_for(x.size()));
}

QuantumState amplitude_encode(std::span<const double> x, std::size_t n_qubits) {
  if (x.empty()) throw Error(ErrorKind::DegenerateInput, "empty feature vector");
  check_finite(x);
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error(ErrorKind::CapExceeded, "amplitude encoding needs " +
                                            std::to_string(n_qubits) + " qubits");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  if (x.size() > dim) {
    throw Error(ErrorKind::Shape, std::to_string(x.size()) + " features exceed " +
                                      std::to_string(dim) + " amplitudes");
  }
  double sq = 0.0;
  for (double v : x) sq += v * v;
  const double norm = std::sqrt(sq);
  if (!(norm > kMinNorm)) {
    throw Error(ErrorKind::DegenerateInput, "feature vector norm below 1e-12");
  }
  std::vector<Complex> amps(dim, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i) amps[i] = x[i] / norm;
  return QuantumState::from_amplitudes(n_qubits, std::move(amps));
}

void append_cnot_ring(Circuit& circuit) {
  const std::size_t n = circuit.n_qubits();
  if (n < 2) return;
  for (std::size_t q = 0; q < n; ++q) circuit.add(GateOp::cnot(q, (q + 1) % n));
}

Circuit feature_map_circuit(std::span<const double> x, const FeatureMapSpec& spec) {
  spec.validate();
  if (spec.encoding != Encoding::Angle) {
    throw Error(ErrorKind::InvalidInput, "amplitude encoding has no feature-map circuit");
  }
  if (x.size() > spec.n_qubits) {
    throw Error(ErrorKind::Shape, std::to_string(x.size()) + " features exceed " +
                                      std::to_string(spec.n_qubits) + " qubits");
  }
  check_finite(x);
  Circuit c(spec.n_qubits);
  for (std::size_t r = 0; r < spec.repetitions; ++r) {
    for (std::size_t q = 0; q < spec.n_qubits; ++q) {
      c.add(GateOp::ry(q, q < x.size() ? x[q] : 0.0));
    }
    if (spec.entangling) append_cnot_ring(c);
  }
  return c;
}

QuantumState apply_feature_map(std::span<const double> x, const FeatureMapSpec& spec) {
  return run_circuit(QuantumState(spec.n_qubits), feature_map_circuit(x, spec));
}

QuantumState encode(std::span<const double> x, const FeatureMapSpec& spec) {
  if (spec.encoding == Encoding::Amplitude) {
    spec.validate();
    return amplitude_encode(x, spec.n_qubits);
  }
  return apply_feature_map(x, spec);
}

}  // namespace qmc
