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
 * Seeded synthetic datasets whose labels come from a fixed model in the
 * learner's own hypothesis class, so a correct learner can always recover
 * them. Used by the tests, the benchmarks and `qmc synth`.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qmc/dataset.hpp"
#include "qmc/encoding.hpp"
#include "qmc/preprocess.hpp"
#include "qmc/vqc.hpp"

namespace qmc {

/// m x d matrix of N(0, scale^2) features named f0..f{d-1}; labels all 0.
Dataset gaussian_features(std::size_t m, std::size_t d, std::uint64_t seed, double scale = 1.0);

/// Random-parameter VQC of the given shape (params uniform in [-pi, pi)).
VqcModel random_vqc(std::size_t n_qubits, std::size_t n_layers, std::size_t repetitions,
                    std::uint64_t seed);

/// Labels every row with the teacher's thresholded probability. Rows whose
/// probability lies within `margin` of 0.5 are dropped.
Dataset label_with_vqc(const Dataset& data, const VqcModel& teacher, double margin = 0.0);

/// Draws N(0, 1) rows of dimension `dim` until `m` of them clear the
/// teacher's margin, then labels them with the teacher.
Dataset vqc_teacher_dataset(const VqcModel& teacher, std::size_t m, std::size_t dim,
                            double margin, std::uint64_t seed);

/// Labels by the sign of g(x) = sum_k c_k k(a_k, x) + b with `n_anchors`
/// anchors drawn from the data and c_k ~ N(0, 1); b centres g at its median
/// so both classes appear. Rows with |g(x)| < margin are dropped.
Dataset label_with_kernel_expansion(const Dataset& data, const FeatureMapSpec& spec,
                                    std::size_t n_anchors, std::uint64_t seed,
                                    double margin = 0.0);

struct TeacherStudentSpec {
  std::size_t samples = 200;
  std::size_t raw_features = 6;
  std::size_t n_qubits = 4;
  std::size_t n_layers = 2;
  std::size_t repetitions = 2;
  double margin = 0.1;
  std::uint64_t seed = 7;
};

/**
 * Raw-feature data whose labels are a VQC teacher applied to the output of
 * `preprocess` fitted on exactly the returned rows, so the labels are
 * realizable by a pipeline that refits the same preprocessing.
 *
 * The rows are built so that standardization + PCA recovers the teacher's
 * inputs up to round-off (exact sample moments, correlations below the
 * pruning threshold); rows within `margin` of p = 0.5 are dropped first.
 * preprocess.pca_components must equal n_qubits. Rows the fit discards as
 * outliers are labelled 0.
 */
Dataset teacher_student_raw(const TeacherStudentSpec& spec, const PreprocessConfig& preprocess);

}  // namespace qmc
