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
 * Variational quantum classifier.
 *
 * Forward pass: |0...0> -> feature map U_phi(x) -> ansatz U(theta) -> <Z_0>,
 * mapped to p(malicious) = (1 + <Z_0>) / 2. Each ansatz layer applies
 * RX, RY, RZ on every qubit (three fresh parameters per qubit) followed by a
 * circular CNOT ring. Gradients use the two-term parameter-shift rule.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qmc/dataset.hpp"
#include "qmc/encoding.hpp"
#include "qmc/statevector.hpp"

namespace qmc {

/// Upper bound on ansatz layers plus feature-map repetitions.
inline constexpr std::size_t kMaxCircuitBlocks = 12;

enum class Optimizer { GD, Adam };

std::string_view to_string(Optimizer o) noexcept;
Optimizer optimizer_from_string(std::string_view s);

struct TrainConfig {
  std::size_t epochs = 100;
  double learning_rate = 0.01;
  std::size_t batch_size = 0;  // 0 = full batch
  Optimizer optimizer = Optimizer::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

struct VqcModel {
  std::size_t n_qubits = 8;
  std::size_t n_layers = 4;
  std::vector<double> params;  // 3 * n_qubits * n_layers radians
  FeatureMapSpec feature_map{};
  Observable readout{0};
  /// When false the ansatz CNOT rings are omitted (diagnostic configurations).
  bool entangling = true;
  std::uint64_t rng_seed = 0;
  std::vector<std::string> feature_names;
  std::optional<TrainConfig> training;  // optimizer metadata, when trained

  static std::size_t param_count(std::size_t n_qubits, std::size_t n_layers) {
    return 3 * n_qubits * n_layers;
  }
  /// Architecture-only model with zeroed parameters.
  static VqcModel make(std::size_t n_qubits, std::size_t n_layers,
                       std::size_t feature_repetitions = 2);

  /// Checks parameter count, qubit cap, readout and the 12-block depth cap.
  void validate() const;
};

struct Prediction {
  double probability_malicious = 0.0;
  int label = 0;
};

/// p >= 0.5 is malicious (ties go to the malicious class).
int label_from_probability(double p) noexcept;

Circuit build_ansatz(const VqcModel& model);

/// <Z_readout> after feature map and ansatz.
double expectation(const VqcModel& model, std::span<const double> x);
Prediction forward(const VqcModel& model, std::span<const double> x);

/// d<Z_readout>/d theta_i for every parameter, two simulations per entry.
std::vector<double> param_shift_grad(const VqcModel& model, std::span<const double> x);

/// Mean binary cross-entropy with p clamped to [1e-9, 1 - 1e-9].
double bce_loss(const VqcModel& model, const Dataset& data);

struct VqcTrainResult {
  VqcModel model;
  double initial_loss = 0.0;
  std::vector<double> loss_history;  // full-data loss after each epoch
};

/// `arch` supplies the shape (qubits, layers, feature map, entangling flag);
/// parameters are drawn uniformly from [-pi, pi) with cfg.seed.
VqcTrainResult train_vqc(const Dataset& data, const VqcModel& arch, const TrainConfig& cfg);

double accuracy(const VqcModel& model, const Dataset& data);

}  // namespace qmc
