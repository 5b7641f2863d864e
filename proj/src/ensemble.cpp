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

#include "qmc/ensemble.hpp"

#include <cmath>
#include <string>

#include "qmc/error.hpp"

namespace qmc {
namespace {

constexpr double kWeightSumTol = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_dim(const MemberModel& model, std::span<const double> x) {
  const auto& names = std::visit([](const auto& m) -> const std::vector<std::string>& {
    return m.feature_names;
  }, model);
  if (!names.empty() && names.size() != x.size()) {
    throw Error(ErrorKind::Shape, "ensemble member expects " + std::to_string(names.size()) +
                                      " features, got " + std::to_string(x.size()));
  }
}

}  // namespace

void EnsembleModel::validate() const {
  if (members.empty()) throw Error(ErrorKind::InvalidInput, "ensemble has no members");
  double sum = 0.0;
  for (const auto& m : members) {
    if (!(m.weight >= 0.0) || !std::isfinite(m.weight)) {
      throw Error(ErrorKind::InvalidInput, "ensemble weights must be finite and non-negative");
    }
    sum += m.weight;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    throw Error(ErrorKind::InvalidInput, "ensemble weights sum to " + std::to_string(sum));
  }
}

void EnsembleModel::normalize() {
  double sum = 0.0;
  for (const auto& m : members) sum += m.weight;
  if (!(sum > 0.0)) throw Error(ErrorKind::InvalidInput, "ensemble weights sum to zero");
  for (auto& m : members) m.weight /= sum;
}

std::string_view model_type_name(const AnyModel& model) noexcept {
  switch (model.index()) {
    case 0: return "vqc";
    case 1: return "qsvm";
    default: return "ensemble";
  }
}

double member_probability(const MemberModel& model, std::span<const double> x) {
  return std::visit(overloaded{
                        [&](const VqcModel& m) { return forward(m, x).probability_malicious; },
                        [&](const SvmModel& m) { return svm_probability(m, x); },
                    },
                    model);
}

Prediction ensemble_predict(const EnsembleModel& ensemble, std::span<const double> x) {
  ensemble.validate();
  for (const auto& m : ensemble.members) check_dim(m.model, x);
  double p = 0.0;
  for (const auto& m : ensemble.members) {
    if (m.weight == 0.0) continue;
    p += m.weight * member_probability(m.model, x);
  }
  return {p, label_from_probability(p)};
}

Prediction predict(const AnyModel& model, std::span<const double> x) {
  return std::visit(overloaded{
                        [&](const VqcModel& m) { return forward(m, x); },
                        [&](const SvmModel& m) {
                          const double d = svm_decision(m, x);
                          return Prediction{1.0 / (1.0 + std::exp(-d)), svm_label(d)};
                        },
                        [&](const EnsembleModel& m) { return ensemble_predict(m, x); },
                    },
                    model);
}

const std::vector<std::string>& feature_names(const AnyModel& model) {
  return std::visit(overloaded{
                        [](const VqcModel& m) -> const std::vector<std::string>& {
                          return m.feature_names;
                        },
                        [](const SvmModel& m) -> const std::vector<std::string>& {
                          return m.feature_names;
                        },
                        [](const EnsembleModel& m) -> const std::vector<std::string>& {
                          static const std::vector<std::string> kEmpty;
                          return m.members.empty() ? kEmpty
                                                   : std::visit(
                                                         [](const auto& mm)
                                                             -> const std::vector<std::string>& {
                                                           return mm.feature_names;
                                                         },
                                                         m.members.front().model);
                        },
                    },
                    model);
}

}  // namespace qmc
