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
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qmc/qkernel.hpp"
#include "qmc/vqc.hpp"

namespace qmc {

using MemberModel = std::variant<VqcModel, SvmModel>;

struct EnsembleMember {
  MemberModel model;
  double weight = 1.0;
};

/// Soft-voting ensemble: p = sum_i w_i p_i(x), weights non-negative and
/// summing to 1.
struct EnsembleModel {
  std::vector<EnsembleMember> members;

  void validate() const;
  /// Rescales weights to sum to 1.
  void normalize();
};

using AnyModel = std::variant<VqcModel, SvmModel, EnsembleModel>;

std::string_view model_type_name(const AnyModel& model) noexcept;

/// Probability of the malicious class; QSVM decisions are logistic-squashed.
double member_probability(const MemberModel& model, std::span<const double> x);
Prediction ensemble_predict(const EnsembleModel& ensemble, std::span<const double> x);
Prediction predict(const AnyModel& model, std::span<const double> x);

/// Feature names the model was trained on (may be empty).
const std::vector<std::string>& feature_names(const AnyModel& model);

}  // namespace qmc
