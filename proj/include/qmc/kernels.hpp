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
 * Amplitude-level gate kernels on a dense state vector.
 *
 * Two implementations share one contract: `serial` is the straightforward
 * reference loop nest, `parallel` distributes the same loop over OpenMP
 * threads once the state is large enough to amortize the fork. Gate kernels
 * touch each amplitude pair exactly once, so both produce bit-identical
 * results for any thread count. Qubit 0 is the least-significant bit of the
 * basis index.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qmc::kernels {

using Complex = std::complex<double>;

/// Row-major 2x2 complex matrix {m00, m01, m10, m11}.
struct Mat2 {
  Complex m00, m01, m10, m11;
};

/// States with at least this many amplitudes take the threaded path.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

namespace serial {

void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2& m);
void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target);
void apply_cphase(std::span<Complex> amps, std::size_t control, std::size_t target,
                  double phi);
void apply_swap(std::span<Complex> amps, std::size_t a, std::size_t b);
double expectation_z(std::span<const Complex> amps, std::size_t qubit);

}  // namespace serial

namespace parallel {

void apply_1q(std::span<Complex> amps, std::size_t target, const Mat2& m);
void apply_cnot(std::span<Complex> amps, std::size_t control, std::size_t target);
void apply_cphase(std::span<Complex> amps, std::size_t control, std::size_t target,
                  double phi);
void apply_swap(std::span<Complex> amps, std::size_t a, std::size_t b);
/// Blocked reduction: partial sums over fixed 4096-amplitude blocks, combined
/// in block order, so the result does not depend on the thread count.
double expectation_z(std::span<const Complex> amps, std::size_t qubit);

}  // namespace parallel

}  // namespace qmc::kernels
