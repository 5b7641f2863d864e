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

#include "qmc/qkernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>

#include "qmc/error.hpp"

namespace qmc {
namespace {

constexpr double kTau = 1e-12;  // curvature floor for non-positive pair directions
constexpr double kKernelTol = 1e-10;

}  // namespace

double kernel_entry(std::span<const double> x_i, std::span<const double> x_j,
                    const FeatureMapSpec& spec) {
  if (spec.encoding == Encoding::Amplitude) {
    return std::norm(inner_product(encode(x_i, spec), encode(x_j, spec)));
  }
  QuantumState state = apply_feature_map(x_j, spec);
  state.run(feature_map_circuit(x_i, spec).inverse());
  return std::norm(state[0]);
}

Matrix kernel_matrix(const Matrix& rows, const FeatureMapSpec& spec) {
  const std::size_t m = rows.rows();
  if (m == 0) throw Error(ErrorKind::DegenerateInput, "kernel matrix of an empty dataset");
  Matrix k(m, m);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(m); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    for (std::size_t j = i; j < m; ++j) k(i, j) = kernel_entry(rows.row(i), rows.row(j), spec);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) k(i, j) = k(j, i);
  }
  return k;
}

Matrix kernel_matrix(const Dataset& data, const FeatureMapSpec& spec) {
  return kernel_matrix(data.features, spec);
}

KernelDiagnostics diagnose_kernel(const Matrix& k) {
  KernelDiagnostics d;
  d.min_entry = std::numeric_limits<double>::infinity();
  d.max_entry = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < k.rows(); ++i) {
    d.max_diagonal_error = std::max(d.max_diagonal_error, std::abs(k(i, i) - 1.0));
    for (std::size_t j = 0; j < k.cols(); ++j) {
      d.max_asymmetry = std::max(d.max_asymmetry, std::abs(k(i, j) - k(j, i)));
      d.min_entry = std::min(d.min_entry, k(i, j));
      d.max_entry = std::max(d.max_entry, k(i, j));
    }
  }
  return d;
}

void validate_kernel(const Matrix& k) {
  if (k.rows() != k.cols()) throw Error(ErrorKind::Shape, "kernel matrix is not square");
  const KernelDiagnostics d = diagnose_kernel(k);
  if (d.max_asymmetry > kKernelTol || d.max_diagonal_error > kKernelTol ||
      d.min_entry < -kKernelTol || d.max_entry > 1.0 + kKernelTol) {
    throw Error(ErrorKind::Numerical,
                "kernel matrix invalid: asymmetry " + std::to_string(d.max_asymmetry) +
                    ", diagonal error " + std::to_string(d.max_diagonal_error) + ", range [" +
                    std::to_string(d.min_entry) + ", " + std::to_string(d.max_entry) + "]");
  }
}

void write_kernel_csv(const std::filesystem::path& path, const Matrix& k) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (std::size_t i = 0; i < k.rows(); ++i) {
    for (std::size_t j = 0; j < k.cols(); ++j) {
      if (j) out << ',';
      out << format_double(k(i, j));
    }
    out << '\n';
  }
}

void SvmParams::validate() const {
  if (!(C > 0.0)) throw Error(ErrorKind::InvalidInput, "C must be positive");
  if (!(tolerance > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerance must be positive");
  if (max_passes < 1) throw Error(ErrorKind::InvalidInput, "max_passes must be >= 1");
}

double dual_objective(const Matrix& k, std::span<const int> y, std::span<const double> alpha) {
  double linear = 0.0;
  double quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i];
    if (alpha[i] == 0.0) continue;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
      quad += alpha[i] * alpha[j] * y[i] * y[j] * k(i, j);
    }
  }
  return linear - 0.5 * quad;
}

SmoSolution train_qsvm(const Matrix& k, std::span<const int> y, const SvmParams& params) {
  params.validate();
  const std::size_t m = k.rows();
  if (k.cols() != m || y.size() != m) {
    throw Error(ErrorKind::Shape, "kernel is " + std::to_string(k.rows()) + "x" +
                                      std::to_string(k.cols()) + " with " +
                                      std::to_string(y.size()) + " labels");
  }
  bool has_pos = false, has_neg = false;
  for (int v : y) {
    if (v == 1) has_pos = true;
    else if (v == -1) has_neg = true;
    else throw Error(ErrorKind::InvalidInput, "SVM labels must be +1 or -1");
  }
  if (!has_pos || !has_neg) {
    throw Error(ErrorKind::InvalidInput, "SVM training needs both classes");
  }

  const double C = params.C;
  SmoSolution sol;
  sol.alpha.assign(m, 0.0);
  auto& alpha = sol.alpha;
  // Gradient of the minimized form 1/2 a'Qa - e'a, Q_ij = y_i y_j K_ij.
  std::vector<double> grad(m, -1.0);
  auto q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * k(i, j); };
  auto in_up = [&](std::size_t t) {
    return (y[t] == 1 && alpha[t] < C) || (y[t] == -1 && alpha[t] > 0.0);
  };
  auto in_low = [&](std::size_t t) {
    return (y[t] == -1 && alpha[t] < C) || (y[t] == 1 && alpha[t] > 0.0);
  };

  while (true) {
    std::size_t i = m, j = m;
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < m; ++t) {
      const double v = -y[t] * grad[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    sol.final_gap = (i == m || j == m) ? 0.0 : g_max - g_min;
    if (i == m || j == m || sol.final_gap < params.tolerance) {
      sol.converged = true;
      break;
    }
    if (sol.iterations == params.max_passes) break;
    ++sol.iterations;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < m; ++t) grad[t] += q(i, t) * di + q(j, t) * dj;

    if (params.record_objective) sol.objective_trace.push_back(dual_objective(k, y, alpha));
  }

  // Bias from free support vectors; midpoint of the feasible interval otherwise.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < m; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= C) {
      if (y[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      ++n_free;
      free_sum += yg;
    }
  }
  const double rho = n_free > 0 ? free_sum / static_cast<double>(n_free) : (ub + lb) / 2.0;
  sol.bias = -rho;
  return sol;
}

std::vector<int> to_signed_labels(std::span<const int> labels) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    if (l != 0 && l != 1) throw Error(ErrorKind::InvalidInput, "labels must be 0 or 1");
    out.push_back(l == 1 ? 1 : -1);
  }
  return out;
}

QsvmFit fit_qsvm(const Dataset& data, const FeatureMapSpec& spec, const SvmParams& params) {
  spec.validate();
  params.validate();
  data.validate();
  if (data.dim() > spec.max_features()) {
    throw Error(ErrorKind::Shape, std::to_string(data.dim()) + " features exceed the " +
                                      std::to_string(spec.max_features()) +
                                      " accepted by the feature map");
  }
  QsvmFit fit;
  fit.gram = kernel_matrix(data, spec);
  validate_kernel(fit.gram);
  const auto y = to_signed_labels(data.labels);
  fit.solution = train_qsvm(fit.gram, y, params);

  SvmModel& model = fit.model;
  model.bias = fit.solution.bias;
  model.feature_map = spec;
  model.params = params;
  model.params.record_objective = false;
  model.converged = fit.solution.converged;
  model.feature_names = data.feature_names;
  model.support_vectors = Matrix(0, data.dim());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (fit.solution.alpha[i] > 0.0) {
      model.support_indices.push_back(i);
      model.dual_coeffs.push_back(fit.solution.alpha[i] * y[i]);
      model.support_vectors.append_row(data.row(i));
    }
  }
  return fit;
}

double svm_decision(const SvmModel& model, std::span<const double> x) {
  double f = model.bias;
  for (std::size_t s = 0; s < model.dual_coeffs.size(); ++s) {
    f += model.dual_coeffs[s] * kernel_entry(model.support_vectors.row(s), x, model.feature_map);
  }
  return f;
}

int svm_label(double decision) noexcept { return decision >= 0.0 ? 1 : 0; }

double svm_probability(const SvmModel& model, std::span<const double> x) {
  return 1.0 / (1.0 + std::exp(-svm_decision(model, x)));
}

}  // namespace qmc
