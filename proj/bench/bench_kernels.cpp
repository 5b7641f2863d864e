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

// Serial vs OpenMP gate kernels, plus the two workloads that dominate a run:
// Gram matrices and parameter-shift gradients.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <complex>
#include <vector>

#include "qmc/kernels.hpp"
#include "qmc/qkernel.hpp"
#include "qmc/random.hpp"
#include "qmc/synthetic.hpp"
#include "qmc/vqc.hpp"

namespace {

using qmc::kernels::Complex;

std::vector<Complex> random_state(std::size_t n_qubits) {
  qmc::Rng rng(n_qubits);
  std::vector<Complex> amps(std::size_t{1} << n_qubits);
  for (auto& a : amps) a = {qmc::normal(rng), qmc::normal(rng)};
  return amps;
}

const qmc::kernels::Mat2 kRy{{0.8, 0.0}, {-0.6, 0.0}, {0.6, 0.0}, {0.8, 0.0}};

void BM_Apply1qSerial(benchmark::State& state) {
  auto amps = random_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    qmc::kernels::serial::apply_1q(amps, 0, kRy);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

void BM_Apply1qParallel(benchmark::State& state) {
  auto amps = random_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    qmc::kernels::parallel::apply_1q(amps, 0, kRy);
    benchmark::DoNotOptimize(amps.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(amps.size()));
}

void BM_CnotSerial(benchmark::State& state) {
  auto amps = random_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    qmc::kernels::serial::apply_cnot(amps, 0, 1);
    benchmark::DoNotOptimize(amps.data());
  }
}

void BM_CnotParallel(benchmark::State& state) {
  auto amps = random_state(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    qmc::kernels::parallel::apply_cnot(amps, 0, 1);
    benchmark::DoNotOptimize(amps.data());
  }
}

void BM_KernelMatrix(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(1)));
  const auto data = qmc::gaussian_features(static_cast<std::size_t>(state.range(0)), 4, 1);
  qmc::FeatureMapSpec spec;
  spec.n_qubits = 4;
  for (auto _ : state) benchmark::DoNotOptimize(qmc::kernel_matrix(data, spec));
}

void BM_ParamShiftGrad(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto model = qmc::random_vqc(n, 4, 2, 3);
  const auto x = qmc::gaussian_features(1, n, 2).features;
  for (auto _ : state) benchmark::DoNotOptimize(qmc::param_shift_grad(model, x.row(0)));
}

}  // namespace

BENCHMARK(BM_Apply1qSerial)->DenseRange(10, 20, 5);
BENCHMARK(BM_Apply1qParallel)->DenseRange(10, 20, 5);
BENCHMARK(BM_CnotSerial)->DenseRange(10, 20, 5);
BENCHMARK(BM_CnotParallel)->DenseRange(10, 20, 5);
BENCHMARK(BM_KernelMatrix)->Args({32, 1})->Args({32, 4})->Args({64, 1})->Args({64, 4});
BENCHMARK(BM_ParamShiftGrad)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
