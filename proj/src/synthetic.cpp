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

#include "qmc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmc/error.hpp"
#include "qmc/qkernel.hpp"
#include "qmc/random.hpp"

namespace qmc {

Dataset gaussian_features(std::size_t m, std::size_t d, std::uint64_t seed, double scale) {
  Dataset out;
  Rng rng(seed);
  for (std::size_t j = 0; j < d; ++j) out.feature_names.push_back("f" + std::to_string(j));
  out.features = Matrix(m, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < d; ++j) out.features(i, j) = scale * normal(rng);
  }
  out.labels.assign(m, 0);
  return out;
}

VqcModel random_vqc(std::size_t n_qubits, std::size_t n_layers, std::size_t repetitions,
                    std::uint64_t seed) {
  VqcModel m = VqcModel::make(n_qubits, n_layers, repetitions);
  Rng rng(seed);
  for (double& p : m.params) p = uniform(rng, -std::numbers::pi, std::numbers::pi);
  m.rng_seed = seed;
  return m;
}

namespace {

Dataset keep_rows(const Dataset& data, const std::vector<std::size_t>& rows,
                  const std::vector<int>& labels) {
  Dataset out = data.subset(rows);
  out.labels = labels;
  return out;
}

}  // namespace

Dataset label_with_vqc(const Dataset& data, const VqcModel& teacher, double margin) {
  std::vector<std::size_t> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double p = forward(teacher, data.row(i)).probability_malicious;
    if (std::abs(p - 0.5) < margin) continue;
    rows.push_back(i);
    labels.push_back(label_from_probability(p));
  }
  if (rows.empty()) throw Error(ErrorKind::DegenerateInput, "margin removed every row");
  return keep_rows(data, rows, labels);
}

Dataset vqc_teacher_dataset(const VqcModel& teacher, std::size_t m, std::size_t dim,
                            double margin, std::uint64_t seed) {
  if (m == 0) throw Error(ErrorKind::InvalidInput, "need at least one sample");
  Dataset out;
  for (std::size_t j = 0; j < dim; ++j) out.feature_names.push_back("f" + std::to_string(j));
  out.features = Matrix(0, dim);
  Rng rng(seed);
  std::vector<double> x(dim);
  for (std::size_t tries = 0; out.size() < m; ++tries) {
    if (tries > 1000 * m) {
      throw Error(ErrorKind::DegenerateInput, "teacher rarely clears the requested margin");
    }
    for (double& v : x) v = normal(rng);
    const double p = forward(teacher, x).probability_malicious;
    if (std::abs(p - 0.5) < margin) continue;
    out.features.append_row(x);
    out.labels.push_back(label_from_probability(p));
  }
  return out;
}

Dataset label_with_kernel_expansion(const Dataset& data, const FeatureMapSpec& spec,
                                    std::size_t n_anchors, std::uint64_t seed, double margin) {
  if (n_anchors == 0 || n_anchors > data.size()) {
    throw Error(ErrorKind::InvalidInput, "anchor count must lie in [1, rows]");
  }
  Rng rng(seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle(std::span<std::size_t>(order), rng);
  std::vector<double> coeff(n_anchors);
  for (double& c : coeff) c = normal(rng);

  std::vector<double> g(data.size(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t k = 0; k < n_anchors; ++k) {
      g[i] += coeff[k] * kernel_entry(data.row(order[k]), data.row(i), spec);
    }
  }
  std::vector<double> sorted = g;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double b = -sorted[sorted.size() / 2];

  std::vector<std::size_t> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double v = g[i] + b;
    if (std::abs(v) < margin) continue;
    rows.push_back(i);
    labels.push_back(v >= 0.0 ? 1 : 0);
  }
  if (rows.empty()) throw Error(ErrorKind::DegenerateInput, "margin removed every row");
  return keep_rows(data, rows, labels);
}

namespace {

// Random correlation matrix (normalized Wishart) with every |off-diagonal|
// below max_abs, so correlation pruning keeps all columns.
Matrix random_correlation(std::size_t d, double max_abs, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    Rng rng(mix_seed(seed, attempt));
    Matrix a(d, d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) a(r, c) = normal(rng);
    }
    Matrix b = multiply(a, a.transpose());
    for (std::size_t r = 0; r < d; ++r) b(r, r) += 0.1;
    Matrix corr(d, d);
    double worst = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        corr(r, c) = r == c ? 1.0 : b(r, c) / std::sqrt(b(r, r) * b(c, c));
        if (r != c) worst = std::max(worst, std::abs(corr(r, c)));
      }
    }
    if (worst < max_abs) return corr;
  }
  throw Error(ErrorKind::Numerical, "could not draw a weakly correlated matrix");
}

// Rescales the columns of z in place so their sample mean is exactly 0 and
// sample covariance exactly diag(variances) (symmetric whitening, so rows
// move as little as possible).
void match_moments(Matrix& z, std::span<const double> variances) {
  const std::size_t m = z.rows();
  const std::size_t d = z.cols();
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < m; ++r) mean += z(r, c);
    mean /= static_cast<double>(m);
    for (std::size_t r = 0; r < m; ++r) z(r, c) -= mean;
  }
  const EigenDecomposition eig = jacobi_eigen(sample_covariance(z));
  Matrix w(d, d);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      double v = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        v += eig.vectors(r, k) * eig.vectors(c, k) / std::sqrt(eig.values[k]);
      }
      w(r, c) = v * std::sqrt(variances[c]);
    }
  }
  z = multiply(z, w);
}

}  // namespace

Dataset teacher_student_raw(const TeacherStudentSpec& spec, const PreprocessConfig& preprocess) {
  const std::size_t d = spec.raw_features;
  const std::size_t k = spec.n_qubits;
  if (d < k) throw Error(ErrorKind::InvalidInput, "raw_features must be >= n_qubits");
  if (preprocess.pca_components != k) {
    throw Error(ErrorKind::InvalidInput, "pca_components must equal n_qubits");
  }
  if (spec.samples < 2 * d) throw Error(ErrorKind::InvalidInput, "too few samples");

  // Standardized raw columns S = Z V^T where C = V diag(lambda) V^T is a
  // correlation matrix and Z has sample covariance exactly diag(lambda).
  // Refitting standardization then PCA on S recovers Z[:, :k] up to
  // round-off, so teacher margins measured on Z survive the pipeline.
  const Matrix corr = random_correlation(
      d, std::min(0.9, preprocess.correlation_threshold - 0.05), mix_seed(spec.seed, 4));
  const EigenDecomposition basis = jacobi_eigen(corr);
  Matrix z = gaussian_features(spec.samples, d, mix_seed(spec.seed, 0)).features;
  match_moments(z, basis.values);

  // Among a few random teachers keep the one with the most rows outside the
  // margin: dropping fewer rows disturbs the moments less.
  VqcModel teacher;
  std::vector<double> x(k);
  auto teacher_p = [&](const VqcModel& t, std::size_t r) {
    for (std::size_t c = 0; c < k; ++c) x[c] = z(r, c);
    return forward(t, x).probability_malicious;
  };
  std::size_t best = 0;
  for (std::uint64_t t = 0; t < 32; ++t) {
    VqcModel candidate = random_vqc(spec.n_qubits, spec.n_layers, spec.repetitions,
                                    mix_seed(mix_seed(spec.seed, 1), t));
    std::size_t confident = 0;
    for (std::size_t r = 0; r < z.rows(); ++r) {
      confident += std::abs(teacher_p(candidate, r) - 0.5) >= spec.margin ? 1 : 0;
    }
    if (t == 0 || confident > best) {
      best = confident;
      teacher = std::move(candidate);
    }
  }

  for (int round = 0; round < 32; ++round) {
    match_moments(z, basis.values);
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < z.rows(); ++r) {
      if (std::abs(teacher_p(teacher, r) - 0.5) >= spec.margin) keep.push_back(r);
    }
    if (keep.size() == z.rows()) break;
    if (keep.size() < 2 * d) throw Error(ErrorKind::DegenerateInput, "margin removed almost every row");
    z = z.select_rows(keep);
  }

  Rng units(mix_seed(spec.seed, 5));
  std::vector<double> scale(d), offset(d);
  for (std::size_t c = 0; c < d; ++c) {
    scale[c] = std::exp(uniform(units, -1.0, 3.0));
    offset[c] = uniform(units, -10.0, 10.0);
  }
  const Matrix standardized = multiply(z, basis.vectors.transpose());
  Dataset raw;
  for (std::size_t c = 0; c < d; ++c) raw.feature_names.push_back("f" + std::to_string(c));
  raw.features = Matrix(z.rows(), d);
  raw.labels.assign(z.rows(), 0);
  for (std::size_t r = 0; r < z.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) raw.features(r, c) = offset[c] + scale[c] * standardized(r, c);
  }

  // Final labels come from the preprocessing the pipeline will actually fit.
  const PreprocessFit fit = fit_preprocess(raw, preprocess);
  std::vector<std::size_t> removed = fit.model.removed_rows;
  std::sort(removed.begin(), removed.end());
  std::size_t processed = 0;
  for (std::size_t r = 0; r < raw.size(); ++r) {
    if (std::binary_search(removed.begin(), removed.end(), r)) continue;
    raw.labels[r] =
        label_from_probability(forward(teacher, fit.data.row(processed++)).probability_malicious);
  }
  return raw;
}

}  // namespace qmc
