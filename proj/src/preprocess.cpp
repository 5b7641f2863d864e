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

#include "qmc/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qmc/error.hpp"
#include "qmc/random.hpp"

namespace qmc {
namespace {

constexpr double kConstantStd = 1e-12;
constexpr double kCorrelationSlack = 1e-12;

double pearson(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;  // constant column: no correlation
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

Standardizer fit_standardize(const Dataset& data) {
  const std::size_t m = data.size();
  if (m < 2) {
    throw Error(ErrorKind::DegenerateInput, "standardization needs at least 2 rows, got " +
                                                std::to_string(m));
  }
  Standardizer s;
  for (std::size_t c = 0; c < data.dim(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < m; ++r) mean += data.features(r, c);
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
      const double d = data.features(r, c) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));
    if (sd < kConstantStd) {
      s.dropped_columns.push_back(c);
      continue;
    }
    s.kept_columns.push_back(c);
    s.means.push_back(mean);
    s.std_devs.push_back(sd);
  }
  return s;
}

Dataset apply_standardize(const Standardizer& model, const Dataset& data) {
  Dataset out = data.select_features(model.kept_columns);
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto row = out.features.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = (row[c] - model.means[c]) / model.std_devs[c];
    }
  }
  return out;
}

PcaModel fit_pca(const Dataset& data, std::size_t k) {
  const std::size_t d = data.dim();
  if (k > d) {
    throw Error(ErrorKind::Shape, "PCA with k=" + std::to_string(k) + " on " +
                                      std::to_string(d) + " features");
  }
  if (k == 0) k = d;
  const Matrix cov = sample_covariance(data.features);
  const EigenDecomposition eig = jacobi_eigen(cov);

  PcaModel pca;
  pca.mean.assign(d, 0.0);
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < d; ++c) pca.mean[c] += data.features(r, c);
  }
  for (double& v : pca.mean) v /= static_cast<double>(data.size());
  pca.basis = Matrix(d, k);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < k; ++c) pca.basis(r, c) = eig.vectors(r, c);
  }
  pca.explained_variance.assign(eig.values.begin(), eig.values.begin() + k);
  pca.all_eigenvalues = eig.values;
  return pca;
}

Dataset apply_pca(const PcaModel& model, const Dataset& data) {
  const std::size_t d = model.basis.rows();
  const std::size_t k = model.basis.cols();
  if (data.dim() != d) {
    throw Error(ErrorKind::Shape, "PCA fitted on " + std::to_string(d) +
                                      " features applied to " + std::to_string(data.dim()));
  }
  Dataset out;
  for (std::size_t c = 0; c < k; ++c) out.feature_names.push_back("pc" + std::to_string(c));
  out.features = Matrix(data.size(), k);
  out.labels = data.labels;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    for (std::size_t j = 0; j < k; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < d; ++i) acc += (row[i] - model.mean[i]) * model.basis(i, j);
      out.features(r, j) = acc;
    }
  }
  return out;
}

Matrix reconstruct_pca(const PcaModel& model, const Matrix& projected) {
  const std::size_t d = model.basis.rows();
  const std::size_t k = model.basis.cols();
  if (projected.cols() != k) throw Error(ErrorKind::Shape, "projected width != k");
  Matrix out(projected.rows(), d);
  for (std::size_t r = 0; r < projected.rows(); ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      double acc = model.mean[i];
      for (std::size_t j = 0; j < k; ++j) acc += projected(r, j) * model.basis(i, j);
      out(r, i) = acc;
    }
  }
  return out;
}

PruneResult prune_correlated(const Dataset& data, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::InvalidInput, "correlation threshold must lie in (0, 1]");
  }
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < data.dim(); ++c) cols.push_back(data.features.column(c));

  PruneResult res;
  for (std::size_t c = 0; c < data.dim(); ++c) {
    const bool redundant = std::any_of(res.kept.begin(), res.kept.end(), [&](std::size_t k) {
      return std::abs(pearson(cols[k], cols[c])) >= threshold - kCorrelationSlack;
    });
    (redundant ? res.dropped : res.kept).push_back(c);
  }
  res.data = data.select_features(res.kept);
  return res;
}

OutlierResult remove_outliers(const Dataset& data, double z_cap) {
  if (!(z_cap > 0.0)) throw Error(ErrorKind::InvalidInput, "z_cap must be positive");
  OutlierResult res;
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    const bool outlier =
        std::any_of(row.begin(), row.end(), [&](double z) { return std::abs(z) > z_cap; });
    (outlier ? res.removed_rows : keep).push_back(r);
  }
  if (keep.empty()) {
    throw Error(ErrorKind::DegenerateInput, "outlier removal discarded every row");
  }
  res.data = data.subset(keep);
  return res;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    std::span<const int> labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "test fraction must lie in (0, 1)");
  }
  const std::size_t m = labels.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(m)));
  if (n_test == 0 || n_test >= m) {
    throw Error(ErrorKind::InvalidInput,
                "test fraction " + std::to_string(test_fraction) + " on " + std::to_string(m) +
                    " samples leaves an empty part");
  }

  Rng rng(seed);
  std::vector<std::size_t> train, test;
  for (int cls : {0, 1}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < m; ++i) {
      if (labels[i] == cls) idx.push_back(i);
    }
    shuffle(std::span<std::size_t>(idx), rng);
    auto take = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(idx.size())));
    if (idx.size() >= 2) take = std::clamp<std::size_t>(take, 1, idx.size() - 1);
    test.insert(test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take));
    train.insert(train.end(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end());
  }
  if (train.empty() || test.empty()) {
    throw Error(ErrorKind::InvalidInput, "stratified split left an empty part");
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data, double test_fraction,
                                             std::uint64_t seed) {
  auto [train, test] = split_indices(data.labels, test_fraction, seed);
  return {data.subset(train), data.subset(test)};
}

void PreprocessConfig::validate() const {
  if (!(z_cap > 0.0)) throw Error(ErrorKind::Config, "z_cap must be positive");
  if (!(correlation_threshold > 0.0 && correlation_threshold <= 1.0)) {
    throw Error(ErrorKind::Config, "correlation_threshold must lie in (0, 1]");
  }
}

std::vector<double> PreprocessModel::transform(std::span<const double> raw_row) const {
  if (raw_row.size() != input_features.size()) {
    throw Error(ErrorKind::Shape, "row has " + std::to_string(raw_row.size()) +
                                      " features, preprocessing expects " +
                                      std::to_string(input_features.size()));
  }
  std::vector<double> z(columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    z[j] = (raw_row[columns[j]] - means[j]) / std_devs[j];
  }
  if (!pca) return z;
  const std::size_t k = pca->basis.cols();
  std::vector<double> out(k, 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) acc += (z[i] - pca->mean[i]) * pca->basis(i, j);
    out[j] = acc;
  }
  return out;
}

Dataset PreprocessModel::apply(const Dataset& raw) const {
  std::vector<std::size_t> order;
  for (const auto& name : input_features) {
    const auto it = std::find(raw.feature_names.begin(), raw.feature_names.end(), name);
    if (it == raw.feature_names.end()) {
      throw Error(ErrorKind::Shape, "input is missing feature column '" + name + "'");
    }
    order.push_back(static_cast<std::size_t>(it - raw.feature_names.begin()));
  }
  Dataset out;
  out.feature_names = output_features;
  out.features = Matrix(raw.size(), output_features.size());
  out.labels = raw.labels;
  std::vector<double> row(order.size());
  for (std::size_t r = 0; r < raw.size(); ++r) {
    for (std::size_t j = 0; j < order.size(); ++j) row[j] = raw.features(r, order[j]);
    const auto t = transform(row);
    std::copy(t.begin(), t.end(), out.features.row(r).begin());
  }
  return out;
}

PreprocessFit fit_preprocess(const Dataset& raw, const PreprocessConfig& config) {
  config.validate();
  raw.validate();

  const Standardizer first = fit_standardize(raw);
  if (first.kept_columns.empty()) {
    throw Error(ErrorKind::DegenerateInput, "every feature column is constant");
  }
  std::vector<std::size_t> rows(raw.size());
  std::iota(rows.begin(), rows.end(), 0);
  PreprocessModel model;
  if (config.remove_outliers) {
    const OutlierResult out = remove_outliers(apply_standardize(first, raw), config.z_cap);
    model.removed_rows = out.removed_rows;
    rows.clear();
    std::size_t next_removed = 0;
    for (std::size_t r = 0; r < raw.size(); ++r) {
      if (next_removed < out.removed_rows.size() && out.removed_rows[next_removed] == r) {
        ++next_removed;
        continue;
      }
      rows.push_back(r);
    }
  }
  const Dataset cleaned = raw.subset(rows).select_features(first.kept_columns);

  const Standardizer second = fit_standardize(cleaned);
  if (second.kept_columns.empty()) {
    throw Error(ErrorKind::DegenerateInput, "every feature column is constant after outlier removal");
  }
  const Dataset z = apply_standardize(second, cleaned);

  std::vector<std::size_t> kept(z.dim());
  std::iota(kept.begin(), kept.end(), 0);
  if (config.prune_correlated) kept = prune_correlated(z, config.correlation_threshold).kept;

  model.input_features = raw.feature_names;
  for (std::size_t j : kept) {
    model.columns.push_back(first.kept_columns[second.kept_columns[j]]);
    model.means.push_back(second.means[j]);
    model.std_devs.push_back(second.std_devs[j]);
  }
  if (config.pca_components > 0) {
    const std::size_t k = std::min(config.pca_components, kept.size());
    model.pca = fit_pca(z.select_features(kept), k);
    for (std::size_t c = 0; c < k; ++c) model.output_features.push_back("pc" + std::to_string(c));
  } else {
    for (std::size_t c : model.columns) model.output_features.push_back(raw.feature_names[c]);
  }

  PreprocessFit fit;
  fit.data = model.apply(raw.subset(rows));
  fit.model = std::move(model);
  return fit;
}

}  // namespace qmc
