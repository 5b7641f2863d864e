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

#include "qmc/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>

#include "qmc/error.hpp"

namespace qmc {
namespace {

std::string feature_label(std::span<const std::string> names, std::size_t idx) {
  return idx < names.size() ? names[idx] : "f" + std::to_string(idx);
}

}  // namespace

std::string_view to_string(AttributionMethod m) noexcept {
  return m == AttributionMethod::Grad ? "grad" : "score";
}

AttributionMethod attribution_method_from_string(std::string_view s) {
  if (s == "grad") return AttributionMethod::Grad;
  if (s == "score") return AttributionMethod::Score;
  throw Error(ErrorKind::Config, "unknown attribution method '" + std::string(s) + "'");
}

AttributionReport grad_attribution(const VqcModel& model, std::span<const double> x) {
  model.validate();
  if (model.feature_map.encoding != Encoding::Angle) {
    throw Error(ErrorKind::InvalidInput,
                "gradient attribution needs angle encoding; use the score method for "
                "amplitude-encoded models");
  }
  const Circuit fmap = feature_map_circuit(x, model.feature_map);
  const Circuit ansatz = build_ansatz(model);

  // Gate positions of every RY that loads feature j.
  std::vector<std::vector<std::size_t>> occurrences(x.size());
  for (std::size_t g = 0; g < fmap.size(); ++g) {
    const GateOp& op = fmap.gates()[g];
    if (op.kind == GateKind::RY && op.target < x.size()) occurrences[op.target].push_back(g);
  }

  auto probability = [&](const Circuit& encoding) {
    QuantumState s(model.n_qubits);
    s.run(encoding).run(ansatz);
    return (1.0 + expectation_z(s, model.readout)) / 2.0;
  };

  AttributionReport report;
  report.method = AttributionMethod::Grad;
  report.base_probability = probability(fmap);
  report.feature_indices.resize(x.size());
  std::iota(report.feature_indices.begin(), report.feature_indices.end(), 0);
  report.scores.assign(x.size(), 0.0);
  report.weighted.assign(x.size(), 0.0);

#pragma omp parallel for schedule(static)
  for (std::int64_t jj = 0; jj < static_cast<std::int64_t>(x.size()); ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    Circuit shifted = fmap;
    double raw = 0.0;
    for (std::size_t g : occurrences[j]) {
      const double angle = shifted.angle_at(g);
      shifted.angle_at(g) = angle + std::numbers::pi / 2.0;
      const double plus = probability(shifted);
      shifted.angle_at(g) = angle - std::numbers::pi / 2.0;
      const double minus = probability(shifted);
      shifted.angle_at(g) = angle;
      raw += 0.5 * (plus - minus);
    }
    report.scores[j] = raw;
    report.weighted[j] = std::max(raw, 0.0) * x[j];
  }
  return report;
}

AttributionReport score_attribution(const ProbabilityFn& model, std::span<const double> x,
                                    std::span<const double> baseline) {
  std::vector<double> zeros;
  if (baseline.empty()) {
    zeros.assign(x.size(), 0.0);
    baseline = zeros;
  }
  if (baseline.size() != x.size()) {
    throw Error(ErrorKind::Shape, "baseline length " + std::to_string(baseline.size()) +
                                      " differs from input length " + std::to_string(x.size()));
  }
  check_finite(x);
  check_finite(baseline);

  AttributionReport report;
  report.method = AttributionMethod::Score;
  report.base_probability = model(x);
  report.feature_indices.resize(x.size());
  std::iota(report.feature_indices.begin(), report.feature_indices.end(), 0);
  report.scores.assign(x.size(), 0.0);

  std::vector<double> masked(x.begin(), x.end());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] == baseline[j]) continue;  // no perturbation, exactly zero
    masked[j] = baseline[j];
    report.scores[j] = report.base_probability - model(masked);
    masked[j] = x[j];
  }
  report.weighted = report.scores;
  return report;
}

std::vector<std::pair<std::size_t, double>> rank_features(const AttributionReport& report,
                                                          std::size_t top_k) {
  const std::size_t n = report.scores.size();
  if (top_k > n) {
    throw Error(ErrorKind::InvalidInput, "top_k " + std::to_string(top_k) + " exceeds " +
                                             std::to_string(n) + " features");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(report.scores[a]) > std::abs(report.scores[b]);
  });
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t r = 0; r < top_k; ++r) {
    out.emplace_back(report.feature_indices[order[r]], report.scores[order[r]]);
  }
  return out;
}

void write_attribution_csv(const std::filesystem::path& path, const AttributionReport& report,
                           std::span<const std::string> feature_names) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  const auto ranked = rank_features(report, report.scores.size());
  std::vector<std::size_t> rank(report.scores.size());
  for (std::size_t r = 0; r < ranked.size(); ++r) {
    const auto pos = std::find(report.feature_indices.begin(), report.feature_indices.end(),
                               ranked[r].first) -
                     report.feature_indices.begin();
    rank[static_cast<std::size_t>(pos)] = r + 1;
  }
  out << "feature_name,raw_score,weighted_score,rank\n";
  for (std::size_t j = 0; j < report.scores.size(); ++j) {
    out << feature_label(feature_names, report.feature_indices[j]) << ','
        << format_double(report.scores[j]) << ',' << format_double(report.weighted[j]) << ','
        << rank[j] << '\n';
  }
}

void print_attribution_summary(std::ostream& os, const AttributionReport& report,
                               std::span<const std::string> feature_names, std::size_t top_k) {
  top_k = std::min(top_k, report.scores.size());
  os << "method: " << to_string(report.method) << '\n'
     << "p(malicious): " << std::fixed << std::setprecision(6) << report.base_probability
     << '\n'
     << "rank  feature                         raw_score   weighted\n";
  std::size_t r = 0;
  for (const auto& [idx, score] : rank_features(report, top_k)) {
    const auto pos = static_cast<std::size_t>(
        std::find(report.feature_indices.begin(), report.feature_indices.end(), idx) -
        report.feature_indices.begin());
    os << std::setw(4) << ++r << "  " << std::left << std::setw(30)
       << feature_label(feature_names, idx) << std::right << std::setw(11) << score
       << std::setw(11) << report.weighted[pos] << '\n';
  }
  os.unsetf(std::ios::floatfield);
}

}  // namespace qmc
