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
 * End-to-end orchestration: configuration, training dispatch, batch
 * prediction, evaluation reports and the full experiment run
 * (preprocess -> split -> train -> predict -> evaluate).
 *
 * Every random choice derives from PipelineConfig::seed:
 *   training init/shuffles  seed
 *   train/test split        mix_seed(seed, 1)
 *   bootstrap resampling    mix_seed(seed, 2)
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qmc/dataset.hpp"
#include "qmc/ensemble.hpp"
#include "qmc/evalstats.hpp"
#include "qmc/preprocess.hpp"

namespace qmc {

enum class ModelChoice { Vqc, Qsvm, Ensemble };

std::string_view to_string(ModelChoice c) noexcept;
ModelChoice model_choice_from_string(std::string_view s);

struct PipelineConfig {
  std::uint64_t seed = 42;

  // Raw-data ingestion.
  std::string label_column = "label";
  std::string positive_label = "1";
  std::vector<std::string> ignore_columns;

  PreprocessConfig preprocess{};  // pca_components defaults to n_qubits

  ModelChoice model = ModelChoice::Vqc;
  std::size_t n_qubits = 8;
  std::size_t n_layers = 4;
  std::size_t repetitions = 2;
  Encoding encoding = Encoding::Angle;
  SvmParams svm{};
  std::vector<double> ensemble_weights{0.5, 0.5};  // (vqc, qsvm)

  TrainConfig train{};

  std::size_t bootstrap_iterations = 1000;
  double test_fraction = 0.2;

  /// Rejects every invalid field combination before any compute starts.
  void validate() const;

  FeatureMapSpec feature_map() const;
  VqcModel vqc_architecture() const;
  std::uint64_t split_seed() const;
  std::uint64_t bootstrap_seed() const;

  nlohmann::json to_json() const;
  /// Missing keys keep their defaults; unknown keys are rejected.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::filesystem::path& path);
};

/// Options for reading preprocessed CSVs written by write_csv.
CsvOptions processed_csv_options();

/// Reorders / selects the columns of `data` to match `names` (no-op when
/// names is empty).
Dataset align_features(const Dataset& data, const std::vector<std::string>& names);

struct TrainOutcome {
  AnyModel model;
  nlohmann::json info;  // loss history, SMO status, ...
};

TrainOutcome train_model(const Dataset& train, const PipelineConfig& cfg, ModelChoice choice);

std::vector<Prediction> predict_all(const AnyModel& model, const Dataset& data);

/// Columns: sample_index, probability, label.
void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<Prediction>& preds);

/// Metrics, bootstrap CI and (for ensembles) a paired comparison of the
/// members. Contains no timings, so identical inputs give identical bytes.
nlohmann::json evaluation_report(const AnyModel& model, const Dataset& test,
                                 const std::vector<Prediction>& preds,
                                 const PipelineConfig& cfg);

void print_report_table(std::ostream& os, const nlohmann::json& report);

/// Exclusive lock file guarding an output directory.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir);
  ~DirectoryLock();
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
};

struct ExperimentResult {
  nlohmann::json report;
  std::filesystem::path out_dir;
};

/// Writes preprocess_model.json, processed.csv, model.json,
/// predictions.csv, report.json and config.json into out_dir. A failure is
/// rethrown with the name of the stage that raised it.
ExperimentResult run_experiment(const PipelineConfig& cfg, const std::filesystem::path& data,
                                const std::filesystem::path& out_dir);

}  // namespace qmc
