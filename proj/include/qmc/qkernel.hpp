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
 * Fidelity quantum kernel and a dual soft-margin SVM trained on it.
 *
 * K(x_i, x_j) = |<0| U_phi(x_i)^dagger U_phi(x_j) |0>|^2, evaluated by running
 * the feature map of x_j followed by the inverse feature map of x_i and
 * reading the all-zeros probability. The SVM dual is solved with SMO:
 * pairwise analytic updates on the maximal KKT-violating pair.
 */
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qmc/dataset.hpp"
#include "qmc/encoding.hpp"
#include "qmc/linalg.hpp"

namespace qmc {

double kernel_entry(std::span<const double> x_i, std::span<const double> x_j,
                    const FeatureMapSpec& spec);

/// Gram matrix over the rows of `rows`; upper triangle computed (in parallel)
/// and mirrored.
Matrix kernel_matrix(const Matrix& rows, const FeatureMapSpec& spec);
Matrix kernel_matrix(const Dataset& data, const FeatureMapSpec& spec);

struct KernelDiagnostics {
  double max_asymmetry = 0.0;
  double max_diagonal_error = 0.0;
  double min_entry = 0.0;
  double max_entry = 0.0;
};
KernelDiagnostics diagnose_kernel(const Matrix& k);
/// Throws Error{Numerical} when symmetry, unit diagonal or range fail at 1e-10.
void validate_kernel(const Matrix& k);

/// Row-major CSV, shortest round-trip decimals, no header.
void write_kernel_csv(const std::filesystem::path& path, const Matrix& k);

struct SvmParams {
  double C = 1.0;
  double tolerance = 1e-3;
  std::size_t max_passes = 10000;  // cap on SMO pair updates
  bool record_objective = false;

  void validate() const;
};

struct SmoSolution {
  std::vector<double> alpha;  // one per training sample
  double bias = 0.0;          // f(x) = sum_i alpha_i y_i K(x_i, x) + bias
  bool converged = false;
  std::size_t iterations = 0;
  double final_gap = 0.0;               // max KKT violation at exit
  std::vector<double> objective_trace;  // dual objective after each update
};

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const Matrix& k, std::span<const int> labels_pm,
                      std::span<const double> alpha);

/// SMO on a precomputed kernel; labels are +1 / -1.
SmoSolution train_qsvm(const Matrix& k, std::span<const int> labels_pm, const SvmParams& params);

struct SvmModel {
  std::vector<double> dual_coeffs;  // alpha_i * y_i per support vector
  double bias = 0.0;
  std::vector<std::size_t> support_indices;  // into the training set
  Matrix support_vectors;
  FeatureMapSpec feature_map{};
  SvmParams params{};
  bool converged = true;
  std::vector<std::string> feature_names;
};

/// Computes the training Gram matrix, runs SMO and keeps alpha > 0 rows.
struct QsvmFit {
  SvmModel model;
  SmoSolution solution;
  Matrix gram;
};
QsvmFit fit_qsvm(const Dataset& data, const FeatureMapSpec& spec, const SvmParams& params);

/// sum_i coeff_i K(sv_i, x) + bias.
double svm_decision(const SvmModel& model, std::span<const double> x);
/// decision >= 0 is malicious.
int svm_label(double decision) noexcept;
/// Logistic squashing 1 / (1 + exp(-decision)).
double svm_probability(const SvmModel& model, std::span<const double> x);

/// 0/1 labels to -1/+1.
std::vector<int> to_signed_labels(std::span<const int> labels);

}  // namespace qmc
