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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmc {

enum class ErrorKind {
  CapExceeded,      // qubit count outside [1, kMaxQubits]
  Index,            // qubit or feature index out of range
  Shape,            // dimension / length mismatch
  DegenerateInput,  // zero-norm vector, empty dataset, too few rows
  InvalidInput,     // NaN, non-binary label, bad argument value
  Ingestion,        // CSV parse failure (carries location)
  Format,           // unknown model-file version
  ModelType,        // model-file type discriminator mismatch
  Parse,            // malformed / truncated structured text
  Config,           // invalid configuration
  Numerical,        // convergence failure, PSD violation
  Io,               // filesystem failure
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for an error: 1 usage/config, 2 data, 3 numerical.
int exit_code(ErrorKind kind) noexcept;

}  // namespace qmc
