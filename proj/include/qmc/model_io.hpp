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
 * JSON persistence for models and preprocessing.
 *
 * Every file carries `format_version` and `model_type` ("vqc", "qsvm",
 * "ensemble", "preprocess"). Doubles are written as shortest round-trip
 * decimals, so a save/load cycle reproduces predictions bit for bit.
 */
#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "qmc/ensemble.hpp"
#include "qmc/preprocess.hpp"
#include "json.hpp"

namespace qmc {

inline constexpr int kModelFormatVersion = 1;

nlohmann::json to_json(const VqcModel& model);
nlohmann::json to_json(const SvmModel& model);
nlohmann::json to_json(const EnsembleModel& model);
nlohmann::json to_json(const PreprocessModel& model);
nlohmann::json to_json(const AnyModel& model);

VqcModel vqc_from_json(const nlohmann::json& j);
SvmModel svm_from_json(const nlohmann::json& j);
EnsembleModel ensemble_from_json(const nlohmann::json& j);
PreprocessModel preprocess_from_json(const nlohmann::json& j);
AnyModel any_model_from_json(const nlohmann::json& j);

/// Writes `j` with 2-space indentation and a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
/// Parse errors report the byte offset of the failure.
nlohmann::json read_json(const std::filesystem::path& path);

template <typename Model>
void save_model(const std::filesystem::path& path, const Model& model) {
  write_json(path, to_json(model));
}

VqcModel load_vqc(const std::filesystem::path& path);
SvmModel load_svm(const std::filesystem::path& path);
EnsembleModel load_ensemble(const std::filesystem::path& path);
PreprocessModel load_preprocess(const std::filesystem::path& path);
AnyModel load_model(const std::filesystem::path& path);

}  // namespace qmc
