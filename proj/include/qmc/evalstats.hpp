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
 * Binary classification metrics and statistical validation.
 *
 * Ratios whose denominator is zero are reported as std::nullopt rather than
 * a conventional 0 or 1.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace qmc {

struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

/// Label 1 (malicious) is the positive class.
ConfusionMatrix confusion(std::span<const int> preds, std::span<const int> labels);

struct MetricsReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  std::optional<double> precision, recall, f1, fpr, fnr;
};

MetricsReport metrics(const ConfusionMatrix& cm);

struct StatReport {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::optional<double> coeff_variation;  // std / mean of the bootstrap distribution
  std::vector<double> distribution;       // resampled means, in iteration order
};

/// Indices of bootstrap resample `iteration` of a size-n sample. Each
/// iteration draws from its own substream mix_seed(seed, iteration), so
/// iterations are independent of evaluation order.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed,
                                           std::size_t iteration);

/// Percentile (2.5%, 97.5%, linear interpolation) bootstrap of the mean of a
/// 0/1 correctness vector.
StatReport bootstrap_ci(std::span<const int> per_sample_correct, std::size_t iterations,
                        std::uint64_t seed);

/// Bootstrap accuracy distributions of two classifiers on shared resamples.
std::pair<std::vector<double>, std::vector<double>> paired_bootstrap(
    std::span<const int> correct_a, std::span<const int> correct_b, std::size_t iterations,
    std::uint64_t seed);

/// (mean(a) - mean(b)) / pooled sample std; nullopt if pooled std is 0.
std::optional<double> cohens_d(std::span<const double> a, std::span<const double> b);

struct TTestResult {
  double t_statistic = 0.0;  // +/-inf when the differences are constant and nonzero
  double p_value = 1.0;
};

/// Two-sided paired t-test with n-1 degrees of freedom.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

/// nullopt when chance agreement is 1.
std::optional<double> cohens_kappa(std::span<const int> p1, std::span<const int> p2);

/// Regularized incomplete beta I_x(a, b) by Lentz continued fractions.
double regularized_incomplete_beta(double a, double b, double x);
/// Student-t CDF with `dof` degrees of freedom.
double student_t_cdf(double t, double dof);

/// Fixed-width human-readable table of a metrics report.
void print_metrics_table(std::ostream& os, const MetricsReport& m, const StatReport* boot);

}  // namespace qmc
