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

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "qmc/kernels.hpp"

namespace qmc::kernels::parallel {
namespace {

// Spread k over all indices with a zero at `bit`.
inline std::size_t insert_zero(std::size_t k, std::size_t bit) {
  const std::size_t low = k & ((std::size_t{1} << bit) - 1);
  return ((k >> bit) << (bit + 1)) | low;
}

inline std::size_t insert_two_zeros(std::size_t k, std::size_t lo, std::size_t hi) {
  return insert_zero(insert_zero(k, lo), hi);
}

constexpr std::size_t kReduceBlock = 4096;

}  // namespace

void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2& m) {
  if (amps.size() < kParallelThreshold) return serial::apply_1q(amps, target, m);
  const std::size_t mask = std::size_t{1} << target;
  const auto half = static_cast<std::int64_t>(amps.size() / 2);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < half; ++k) {
    const std::size_t i = insert_zero(static_cast<std::size_t>(k), target);
    const Complex a0 = amps[i];
    const Complex a1 = amps[i | mask];
    amps[i] = m.m00 * a0 + m.m01 * a1;
    amps[i | mask] = m.m10 * a0 + m.m11 * a1;
  }
}

void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target) {
  if (amps.size() < kParallelThreshold) return serial::apply_cnot(amps, control, target);
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  const std::size_t lo = control < target ? control : target;
  const std::size_t hi = control < target ? target : control;
  const auto quarter = static_cast<std::int64_t>(amps.size() / 4);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < quarter; ++k) {
    const std::size_t i = insert_two_zeros(static_cast<std::size_t>(k), lo, hi) | cmask;
    std::swap(amps[i], amps[i | tmask]);
  }
}

void apply_cphase(std::span<Complex> amps, std::size_t control, std::size_t target,
                  double phi) {
  if (amps.size() < kParallelThreshold) return serial::apply_cphase(amps, control, target, phi);
  const std::size_t both = (std::size_t{1} << control) | (std::size_t{1} << target);
  const std::size_t lo = control < target ? control : target;
  const std::size_t hi = control < target ? target : control;
  const Complex phase = std::polar(1.0, phi);
  const auto quarter = static_cast<std::int64_t>(amps.size() / 4);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < quarter; ++k) {
    amps[insert_two_zeros(static_cast<std::size_t>(k), lo, hi) | both] *= phase;
  }
}

void apply_swap(std::span<Complex> amps, std::size_t a, std::size_t b) {
  if (amps.size() < kParallelThreshold) return serial::apply_swap(amps, a, b);
  const std::size_t amask = std::size_t{1} << a;
  const std::size_t bmask = std::size_t{1} << b;
  const std::size_t lo = a < b ? a : b;
  const std::size_t hi = a < b ? b : a;
  const auto quarter = static_cast<std::int64_t>(amps.size() / 4);
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < quarter; ++k) {
    const std::size_t base = insert_two_zeros(static_cast<std::size_t>(k), lo, hi);
    std::swap(amps[base | amask], amps[base | bmask]);
  }
}

double expectation_z(std::span<const Complex> amps, std::size_t qubit) {
  const std::size_t mask = std::size_t{1} << qubit;
  const std::size_t n_blocks = (amps.size() + kReduceBlock - 1) / kReduceBlock;
  auto block_sum = [&](std::size_t b) {
    const std::size_t begin = b * kReduceBlock;
    const std::size_t end = std::min(begin + kReduceBlock, amps.size());
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double p = std::norm(amps[i]);
      acc += (i & mask) ? -p : p;
    }
    return acc;
  };
  // Fixed block order keeps the sum independent of the thread count.
  if (amps.size() < kParallelThreshold) {
    double total = 0.0;
    for (std::size_t b = 0; b < n_blocks; ++b) total += block_sum(b);
    return total;
  }
  std::vector<double> partial(n_blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(n_blocks); ++b) {
    partial[static_cast<std::size_t>(b)] = block_sum(static_cast<std::size_t>(b));
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace qmc::kernels::parallel
