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
 * Classical-to-quantum data encodings.
 *
 * Amplitude encoding normalizes a zero-padded feature vector into the
 * amplitudes of ceil(log2 d) qubits. The angle feature map loads feature j as
 * RY(x_j) on qubit j, follows with a circular CNOT ring
 * (q0->q1, ..., q_{n-1}->q0), and repeats the block `repetitions` times.
 * Feature values are used directly as radians, so values with |x| > pi alias.
 */
#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "qmc/statevector.hpp"

namespace qmc {

using FeatureVector = std::vector<double>;

enum class Encoding { Angle, Amplitude };

std::string_view to_string(Encoding e) noexcept;
Encoding encoding_from_string(std::string_view s);

struct FeatureMapSpec {
  std::size_t n_qubits = 8;
  std::size_t repetitions = 2;
  Encoding encoding = Encoding::Angle;
  /// When false the CNOT rings are omitted (diagnostic configurations only).
  bool entangling = true;

  void validate() const;
  /// Largest feature dimension accepted by this spec.
  std::size_t max_features() const noexcept;

  friend bool operator==(const FeatureMapSpec&, const FeatureMapSpec&) = default;
};

/// Throws Error{InvalidInput} on NaN / infinite entries.
void check_finite(std::span<const double> x);

/// Eq.-style amplitude encoding on the minimal register (at least 1 qubit).
QuantumState amplitude_encode(std::span<const double> x);
/// Amplitude encoding zero-padded to a register of `n_qubits`.
QuantumState amplitude_encode(std::span<const double> x, std::size_t n_qubits);

/// Appends CNOT(q, q+1 mod n) for every q; no-op on a single qubit.
void append_cnot_ring(Circuit& circuit);

Circuit feature_map_circuit(std::span<const double> x, const FeatureMapSpec& spec);
QuantumState apply_feature_map(std::span<const double> x, const FeatureMapSpec& spec);

/// Dispatches on spec.encoding: angle feature map or padded amplitude encoding.
QuantumState encode(std::span<const double> x, const FeatureMapSpec& spec);

}  // namespace qmc
