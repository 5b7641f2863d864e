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
 * Feature attribution for quantum classifiers.
 *
 * GRAD: the parameter-shift rule applied to the encoding angles. Feature j
 * enters once per feature-map repetition as RY(x_j); the raw score sums the
 * shift differences over those occurrences, which is exactly dp/dx_j. The
 * weighted score keeps positive evidence only: max(raw, 0) * x_j.
 *
 * SCORE: occlusion. score_j = p(x) - p(x with x_j replaced by baseline_j).
 * Works for any model with a probability output.
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmc/vqc.hpp"

namespace qmc {

enum class AttributionMethod { Grad, Score };

std::string_view to_string(AttributionMethod m) noexcept;
AttributionMethod attribution_method_from_string(std::string_view s);

struct AttributionReport {
  std::vector<std::size_t> feature_indices;
  std::vector<double> scores;    // raw: dp/dx_j (GRAD) or confidence delta (SCORE)
  std::vector<double> weighted;  // GRAD: max(raw, 0) * x_j; SCORE: same as raw
  AttributionMethod method = AttributionMethod::Score;
  double base_probability = 0.0;
};

using ProbabilityFn = std::function<double(std::span<const double>)>;

/// Throws Error{InvalidInput} for amplitude-encoded models.
AttributionReport grad_attribution(const VqcModel& model, std::span<const double> x);

/// An empty baseline means all zeros (the standardized mean).
AttributionReport score_attribution(const ProbabilityFn& model, std::span<const double> x,
                                    std::span<const double> baseline = {});

/// (index, score) sorted by |score| descending, ties by ascending index.
std::vector<std::pair<std::size_t, double>> rank_features(const AttributionReport& report,
                                                          std::size_t top_k);

/// Columns: feature_name, raw_score, weighted_score, rank (1 = most important).
void write_attribution_csv(const std::filesystem::path& path, const AttributionReport& report,
                           std::span<const std::string> feature_names);

void print_attribution_summary(std::ostream& os, const AttributionReport& report,
                               std::span<const std::string> feature_names, std::size_t top_k);

}  // namespace qmc
