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

#include "qmc/vqc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>

#include "qmc/error.hpp"
#include "qmc/random.hpp"

namespace qmc {
namespace {

constexpr double kProbClamp = 1e-9;
constexpr double kShift = std::numbers::pi / 2.0;

/// Ansatz plus, for every parameter, the index of the gate that carries it.
Circuit build_ansatz_indexed(const VqcModel& model, std::vector<std::size_t>* param_gate) {
  model.validate();
  Circuit c(model.n_qubits);
  std::size_t p = 0;
  for (std::size_t layer = 0; layer < model.n_layers; ++layer) {
    for (std::size_t q = 0; q < model.n_qubits; ++q) {
      for (GateKind kind : {GateKind::RX, GateKind::RY, GateKind::RZ}) {
        if (param_gate) param_gate->push_back(c.size());
        c.add(GateOp{kind, q, {}, model.params[p++]});
      }
    }
    if (model.entangling) append_cnot_ring(c);
  }
  return c;
}

void check_input(const VqcModel& model, std::span<const double> x) {
  if (x.size() > model.feature_map.max_features()) {
    throw Error(ErrorKind::Shape, std::to_string(x.size()) + " features exceed the " +
                                      std::to_string(model.feature_map.max_features()) +
                                      " accepted by the feature map");
  }
}

double clamp_prob(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

double sample_loss(double p, int y) {
  const double pc = clamp_prob(p);
  return y == 1 ? -std::log(pc) : -std::log(1.0 - pc);
}

}  // namespace

std::string_view to_string(Optimizer o) noexcept { return o == Optimizer::GD ? "gd" : "adam"; }

Optimizer optimizer_from_string(std::string_view s) {
  if (s == "gd") return Optimizer::GD;
  if (s == "adam") return Optimizer::Adam;
  throw Error(ErrorKind::Config, "unknown optimizer '" + std::string(s) + "'");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(ErrorKind::InvalidInput, "epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw Error(ErrorKind::InvalidInput, "learning rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "invalid ADAM hyperparameters");
  }
}

VqcModel VqcModel::make(std::size_t n_qubits, std::size_t n_layers,
                        std::size_t feature_repetitions) {
  VqcModel m;
  m.n_qubits = n_qubits;
  m.n_layers = n_layers;
  m.params.assign(param_count(n_qubits, n_layers), 0.0);
  m.feature_map.n_qubits = n_qubits;
  m.feature_map.repetitions = feature_repetitions;
  return m;
}

void VqcModel::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw Error(ErrorKind::CapExceeded, "model qubit count " + std::to_string(n_qubits) +
                                            " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (n_layers < 1) throw Error(ErrorKind::InvalidInput, "n_layers must be >= 1");
  feature_map.validate();
  if (feature_map.n_qubits != n_qubits) {
    throw Error(ErrorKind::Shape, "feature map width differs from model width");
  }
  if (n_layers + feature_map.repetitions > kMaxCircuitBlocks) {
    throw Error(ErrorKind::InvalidInput,
                "depth cap exceeded: n_layers + repetitions = " +
                    std::to_string(n_layers + feature_map.repetitions) + " > " +
                    std::to_string(kMaxCircuitBlocks));
  }
  if (params.size() != param_count(n_qubits, n_layers)) {
    throw Error(ErrorKind::Shape, "expected " + std::to_string(param_count(n_qubits, n_layers)) +
                                      " parameters, got " + std::to_string(params.size()));
  }
  if (readout.qubit >= n_qubits) throw Error(ErrorKind::Index, "readout qubit out of range");
}

int label_from_probability(double p) noexcept { return p >= 0.5 ? 1 : 0; }

Circuit build_ansatz(const VqcModel& model) { return build_ansatz_indexed(model, nullptr); }

double expectation(const VqcModel& model, std::span<const double> x) {
  check_input(model, x);
  QuantumState state = encode(x, model.feature_map);
  state.run(build_ansatz(model));
  return expectation_z(state, model.readout);
}

Prediction forward(const VqcModel& model, std::span<const double> x) {
  const double z = expectation(model, x);
  const double p = std::clamp((1.0 + z) / 2.0, 0.0, 1.0);
  return {p, label_from_probability(p)};
}

std::vector<double> param_shift_grad(const VqcModel& model, std::span<const double> x) {
  check_input(model, x);
  std::vector<std::size_t> param_gate;
  const Circuit ansatz = build_ansatz_indexed(model, &param_gate);
  const QuantumState encoded = encode(x, model.feature_map);

  std::vector<double> grad(param_gate.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(param_gate.size()); ++i) {
    const std::size_t gate = param_gate[static_cast<std::size_t>(i)];
    Circuit shifted = ansatz;
    const double theta = shifted.angle_at(gate);

    shifted.angle_at(gate) = theta + kShift;
    const double plus = expectation_z(run_circuit(encoded, shifted), model.readout);
    shifted.angle_at(gate) = theta - kShift;
    const double minus = expectation_z(run_circuit(encoded, shifted), model.readout);

    grad[static_cast<std::size_t>(i)] = 0.5 * (plus - minus);
  }
  return grad;
}

double bce_loss(const VqcModel& model, const Dataset& data) {
  if (data.empty()) throw Error(ErrorKind::DegenerateInput, "loss over an empty dataset");
  std::vector<double> losses(data.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(data.size()); ++r) {
    const auto i = static_cast<std::size_t>(r);
    losses[i] = sample_loss(forward(model, data.row(i)).probability_malicious, data.labels[i]);
  }
  return std::accumulate(losses.begin(), losses.end(), 0.0) / static_cast<double>(data.size());
}

double accuracy(const VqcModel& model, const Dataset& data) {
  if (data.empty()) throw Error(ErrorKind::DegenerateInput, "accuracy over an empty dataset");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (forward(model, data.row(i)).label == data.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

VqcTrainResult train_vqc(const Dataset& data, const VqcModel& arch, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) throw Error(ErrorKind::DegenerateInput, "training on an empty dataset");
  data.validate();

  VqcModel model = arch;
  model.params.assign(VqcModel::param_count(arch.n_qubits, arch.n_layers), 0.0);
  model.rng_seed = cfg.seed;
  model.training = cfg;
  model.validate();
  if (data.dim() > model.feature_map.max_features()) {
    throw Error(ErrorKind::Shape, std::to_string(data.dim()) + " features exceed the " +
                                      std::to_string(model.feature_map.max_features()) +
                                      " accepted by the feature map");
  }
  if (model.feature_names.empty()) model.feature_names = data.feature_names;

  Rng init(cfg.seed);
  for (double& p : model.params) p = uniform(init, -std::numbers::pi, std::numbers::pi);

  const std::size_t n_params = model.params.size();
  const std::size_t batch = cfg.batch_size == 0 ? data.size() : std::min(cfg.batch_size, data.size());
  std::vector<double> m1(n_params, 0.0), m2(n_params, 0.0);
  std::size_t step = 0;

  VqcTrainResult result;
  result.initial_loss = bce_loss(model, data);

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::vector<double>> sample_grads;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (batch < data.size()) {
      Rng shuffler(mix_seed(cfg.seed, epoch + 1));
      shuffle(std::span<std::size_t>(order), shuffler);
    }
    for (std::size_t start = 0; start < data.size(); start += batch) {
      const std::size_t end = std::min(start + batch, data.size());
      sample_grads.assign(end - start, {});

#pragma omp parallel for schedule(static)
      for (std::int64_t b = 0; b < static_cast<std::int64_t>(end - start); ++b) {
        const std::size_t i = order[start + static_cast<std::size_t>(b)];
        const auto x = data.row(i);
        const double p = clamp_prob(forward(model, x).probability_malicious);
        const int y = data.labels[i];
        const double dloss_dp = y == 1 ? -1.0 / p : 1.0 / (1.0 - p);
        auto g = param_shift_grad(model, x);
        for (double& v : g) v *= dloss_dp * 0.5;
        sample_grads[static_cast<std::size_t>(b)] = std::move(g);
      }

      std::vector<double> grad(n_params, 0.0);
      for (const auto& g : sample_grads) {
        for (std::size_t k = 0; k < n_params; ++k) grad[k] += g[k];
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double& v : grad) v *= scale;

      ++step;
      if (cfg.optimizer == Optimizer::GD) {
        for (std::size_t k = 0; k < n_params; ++k) model.params[k] -= cfg.learning_rate * grad[k];
      } else {
        const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
        for (std::size_t k = 0; k < n_params; ++k) {
          m1[k] = cfg.beta1 * m1[k] + (1.0 - cfg.beta1) * grad[k];
          m2[k] = cfg.beta2 * m2[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
          const double mhat = m1[k] / c1;
          const double vhat = m2[k] / c2;
          model.params[k] -= cfg.learning_rate * mhat / (std::sqrt(vhat) + cfg.epsilon);
        }
      }
    }
    result.loss_history.push_back(bce_loss(model, data));
  }
  result.model = std::move(model);
  return result;
}

}  // namespace qmc
