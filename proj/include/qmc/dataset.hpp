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

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qmc/linalg.hpp"

namespace qmc {

/// Feature matrix (one row per sample) with binary labels: 1 malicious, 0 benign.
struct Dataset {
  std::vector<std::string> feature_names;
  Matrix features;
  std::vector<int> labels;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t dim() const noexcept { return feature_names.size(); }
  bool empty() const noexcept { return labels.empty(); }
  std::span<const double> row(std::size_t i) const { return features.row(i); }

  /// Throws on shape mismatch, non-finite values or non-binary labels.
  void validate() const;

  Dataset subset(std::span<const std::size_t> rows) const;
  Dataset select_features(std::span<const std::size_t> cols) const;
};

struct CsvOptions {
  std::string label_column = "label";
  std::string positive_label = "1";
  /// Non-feature columns skipped during ingestion (ids, family names, ...).
  std::vector<std::string> ignore_columns;
  /// Accept files without the label column (labels read as 0).
  bool allow_missing_label = false;
};

/// Reads a headered CSV. Cells equal to positive_label map to 1, any other
/// label to 0. Every non-ignored, non-label column must be numeric.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes features plus a trailing `label` column with shortest round-trip
/// decimal formatting.
void write_csv(const std::filesystem::path& path, const Dataset& data);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Splits one CSV record; double-quoted fields may contain commas.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace qmc
