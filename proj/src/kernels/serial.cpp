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

#include "qmc/kernels.hpp"

#include <utility>

namespace qmc::kernels::serial {

void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2& m) {
  const std::size_t mask = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & mask) continue;
    const Complex a0 = amps[i];
    const Complex a1 = amps[i | mask];
    amps[i] = m.m00 * a0 + m.m01 * a1;
    amps[i | mask] = m.m10 * a0 + m.m11 * a1;
  }
}

void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target) {
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
  }
}

void apply_cphase(std::span<Complex> amps, std::size_t control, std::size_t target,
                  double phi) {
  const std::size_t both = (std::size_t{1} << control) | (std::size_t{1} << target);
  const Complex phase = std::polar(1.0, phi);
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & both) == both) amps[i] *= phase;
  }
}

void apply_swap(std::span<Complex> amps, std::size_t a, std::size_t b) {
  const std::size_t amask = std::size_t{1} << a;
  const std::size_t bmask = std::size_t{1} << b;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    // visit each (…a=1,b=0…) <-> (…a=0,b=1…) pair once
    if ((i & amask) && !(i & bmask)) std::swap(amps[i], amps[(i & ~amask) | bmask]);
  }
}

double expectation_z(std::span<const Complex> amps, std::size_t qubit) {
  const std::size_t mask = std::size_t{1} << qubit;
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    acc += (i & mask) ? -p : p;
  }
  return acc;
}

}  // namespace qmc::kernels::serial
