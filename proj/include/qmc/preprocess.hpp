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
 * Classical preprocessing: standardization, outlier removal, correlation
 * pruning, PCA and stratified splitting.
 *
 * The composite fit runs the stages in a fixed order:
 *   standardize -> remove outliers -> re-standardize -> prune correlated -> PCA
 * and captures everything needed to replay the transform at inference time in
 * a PreprocessModel.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmc/dataset.hpp"
#include "qmc/linalg.hpp"

namespace qmc {

/// Per-column z-scoring with the sample (n-1) standard deviation. Columns
/// with std < 1e-12 are dropped.
struct Standardizer {
  std::vector<std::size_t> kept_columns;  // indices into the fitted dataset
  std::vector<std::size_t> dropped_columns;
  std::vector<double> means;     // per kept column
  std::vector<double> std_devs;  // per kept column
};

Standardizer fit_standardize(const Dataset& data);
Dataset apply_standardize(const Standardizer& model, const Dataset& data);

struct PcaModel {
  std::vector<double> mean;  // per input column
  Matrix basis;              // d x k, orthonormal columns
  std::vector<double> explained_variance;
  std::vector<double> all_eigenvalues;  // full descending spectrum
};

/// k = 0 keeps every component.
PcaModel fit_pca(const Dataset& data, std::size_t k);
Dataset apply_pca(const PcaModel& model, const Dataset& data);
/// Maps projected rows back to the (uncentered) input space.
Matrix reconstruct_pca(const PcaModel& model, const Matrix& projected);

struct PruneResult {
  Dataset data;
  std::vector<std::size_t> kept;
  std::vector<std::size_t> dropped;
};

/// Greedy scan in column order: a column is dropped when |Pearson r| with an
/// already-kept column reaches `threshold`.
PruneResult prune_correlated(const Dataset& data, double threshold);

struct OutlierResult {
  Dataset data;
  std::vector<std::size_t> removed_rows;
};

/// Drops rows holding any value with |z| > z_cap (input must be standardized).
OutlierResult remove_outliers(const Dataset& data, double z_cap);

/// Seeded, stratified split; returns (train, test).
std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed);
/// Same split as train_test_split, as row indices (train, test).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::span<const int> labels, double test_fraction, std::uint64_t seed);

struct PreprocessConfig {
  double z_cap = 5.0;
  double correlation_threshold = 0.95;
  std::size_t pca_components = 8;  // 0 disables PCA
  bool remove_outliers = true;
  bool prune_correlated = true;

  void validate() const;
};

/// Everything needed to map a raw feature row to model inputs.
struct PreprocessModel {
  std::vector<std::string> input_features;  // raw column names, in order
  std::vector<std::size_t> columns;         // raw columns consumed
  std::vector<double> means;                // per consumed column
  std::vector<double> std_devs;             // per consumed column
  std::optional<PcaModel> pca;
  std::vector<std::string> output_features;
  std::vector<std::size_t> removed_rows;  // rows dropped while fitting

  std::vector<double> transform(std::span<const double> raw_row) const;
  /// Selects input_features from `raw` by name and transforms every row.
  Dataset apply(const Dataset& raw) const;
};

struct PreprocessFit {
  PreprocessModel model;
  Dataset data;  // the fitted, transformed dataset
};

PreprocessFit fit_preprocess(const Dataset& raw, const PreprocessConfig& config);

}  // namespace qmc
