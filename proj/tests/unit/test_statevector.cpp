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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qmc/random.hpp"
#include "qmc/statevector.hpp"
#include "test_util.hpp"

namespace qmc {
namespace {

using std::numbers::pi;
using testing::throws_kind;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

QuantumState random_state(std::size_t n, Rng& rng) {
  std::vector<Complex> amps(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : amps) {
    a = {normal(rng), normal(rng)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return QuantumState::from_amplitudes(n, std::move(amps));
}

GateOp random_gate(std::size_t n, Rng& rng) {
  const std::size_t kinds = n >= 2 ? 7 : 4;
  const auto kind = static_cast<GateKind>(uniform_index(rng, kinds));
  const std::size_t a = uniform_index(rng, n);
  std::size_t b = a;
  if (n >= 2) {
    while (b == a) b = uniform_index(rng, n);
  }
  const double theta = uniform(rng, -2 * pi, 2 * pi);
  switch (kind) {
    case GateKind::RX: return GateOp::rx(a, theta);
    case GateKind::RY: return GateOp::ry(a, theta);
    case GateKind::RZ: return GateOp::rz(a, theta);
    case GateKind::H: return GateOp::h(a);
    case GateKind::CNOT: return GateOp::cnot(a, b);
    case GateKind::CPHASE: return GateOp::cphase(a, b, theta);
    case GateKind::SWAP: return GateOp::swap(a, b);
  }
  return GateOp::h(a);
}

Circuit random_circuit(std::size_t n, std::size_t depth, Rng& rng) {
  Circuit c(n);
  for (std::size_t i = 0; i < depth; ++i) c.add(random_gate(n, rng));
  return c;
}

TEST(QuantumState, ZeroStateAndCap) {
  const auto s = new_zero_state(3);
  EXPECT_EQ(s.dimension(), 8u);
  EXPECT_EQ(s[0], Complex(1.0, 0.0));
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(s[i], Complex(0.0, 0.0));
  EXPECT_TRUE(throws_kind(ErrorKind::CapExceeded, [] { QuantumState s0(0); }));
  EXPECT_TRUE(throws_kind(ErrorKind::CapExceeded, [] { QuantumState s21(21); }));
}

TEST(QuantumState, FromAmplitudesChecksShapeAndNorm) {
  EXPECT_TRUE(throws_kind(ErrorKind::Shape,
                          [] { QuantumState::from_amplitudes(2, {1.0, 0.0, 0.0}); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidInput,
                          [] { QuantumState::from_amplitudes(1, {1.0, 1.0}); }));
}

TEST(ApplyGate, TextbookExamples) {
  auto one = apply_gate(new_zero_state(1), GateOp::ry(0, pi));
  EXPECT_NEAR(std::abs(one[0]), 0.0, 1e-15);
  EXPECT_NEAR(one[1].real(), 1.0, 1e-15);

  // |10> in ket order is basis index 1 (qubit 0 set).
  auto s = QuantumState::from_amplitudes(2, {0.0, 1.0, 0.0, 0.0});
  s.apply(GateOp::cnot(0, 1));
  EXPECT_EQ(s[3], Complex(1.0, 0.0));

  auto rx = apply_gate(new_zero_state(1), GateOp::rx(0, pi / 2));
  const Eigen::Vector2cd expect = oracle::rotation(GateKind::RX, pi / 2) * oracle::basis_state(1, 0);
  EXPECT_NEAR(std::abs(rx[0] - expect(0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(rx[1] - expect(1)), 0.0, 1e-15);
  EXPECT_NEAR(rx[1].imag(), -kInvSqrt2, 1e-15);
}

TEST(ApplyGate, MatchesDenseOracleForEveryKind) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 4);
    const GateOp g = random_gate(n, rng);
    const auto s = random_state(n, rng);
    const oracle::DenseVector got = oracle::to_dense(apply_gate(s, g));
    const oracle::DenseVector want = oracle::dense_gate(n, g) * oracle::to_dense(s);
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12) << to_string(g.kind);
  }
}

TEST(ApplyGate, ValidatesQubits) {
  auto s = new_zero_state(2);
  EXPECT_TRUE(throws_kind(ErrorKind::Index, [&] { s.apply(GateOp::h(2)); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidInput, [&] { s.apply(GateOp::cnot(1, 1)); }));
  EXPECT_TRUE(throws_kind(ErrorKind::Index, [&] { s.apply(GateOp::swap(0, 5)); }));
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidInput, [&] {
    s.apply(GateOp::rx(0, std::numeric_limits<double>::quiet_NaN()));
  }));
}

TEST(RunCircuit, BellStateAndEmptyCircuit) {
  Circuit bell(2);
  bell.add(GateOp::h(0)).add(GateOp::cnot(0, 1));
  const auto s = run_circuit(new_zero_state(2), bell);
  EXPECT_NEAR(s[0].real(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(s[3].real(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(std::abs(s[1]) + std::abs(s[2]), 0.0, 1e-15);
  const auto p = probabilities(s);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[3], 0.5, 1e-15);

  Rng rng(3);
  const auto r = random_state(3, rng);
  const auto same = run_circuit(r, Circuit(3));
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(same[i], r[i]);

  EXPECT_TRUE(throws_kind(ErrorKind::Shape, [&] { run_circuit(new_zero_state(3), bell); }));
}

TEST(RunCircuit, InverseRoundTrip) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 6);
    const auto c = random_circuit(n, 1 + uniform_index(rng, 30), rng);
    const auto s = random_state(n, rng);
    const auto back = run_circuit(run_circuit(s, c), c.inverse());
    for (std::size_t i = 0; i < s.dimension(); ++i) EXPECT_LT(std::abs(back[i] - s[i]), 1e-9);
  }
}

TEST(RunCircuit, MatchesDenseCircuitOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + uniform_index(rng, 4);
    const auto c = random_circuit(n, 20, rng);
    const auto s = random_state(n, rng);
    const oracle::DenseVector got = oracle::to_dense(run_circuit(s, c));
    const oracle::DenseVector want = oracle::dense_circuit(c) * oracle::to_dense(s);
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Unitarity, NormPreservedForEveryKind) {
  Rng rng(23);
  for (int k = 0; k < 7; ++k) {
    for (int i = 0; i < 100; ++i) {
      const double theta = uniform(rng, -4 * pi, 4 * pi);
      auto s = random_state(3, rng);
      switch (static_cast<GateKind>(k)) {
        case GateKind::RX: s.apply(GateOp::rx(1, theta)); break;
        case GateKind::RY: s.apply(GateOp::ry(1, theta)); break;
        case GateKind::RZ: s.apply(GateOp::rz(1, theta)); break;
        case GateKind::H: s.apply(GateOp::h(1)); break;
        case GateKind::CNOT: s.apply(GateOp::cnot(2, 0)); break;
        case GateKind::CPHASE: s.apply(GateOp::cphase(0, 2, theta)); break;
        case GateKind::SWAP: s.apply(GateOp::swap(0, 2)); break;
      }
      EXPECT_NEAR(s.norm_squared(), 1.0, 1e-10);
    }
  }
}

TEST(Qft, SingleQubitIsHadamard) {
  const auto zero = run_circuit(new_zero_state(1), qft_circuit(1));
  EXPECT_NEAR(zero[0].real(), kInvSqrt2, 1e-15);
  EXPECT_NEAR(zero[1].real(), kInvSqrt2, 1e-15);
  const auto one = run_circuit(apply_gate(new_zero_state(1), GateOp::rx(0, pi)), qft_circuit(1));
  // RX(pi)|0> = -i|1>; compare up to that global phase.
  EXPECT_NEAR(std::abs(one[0] - Complex(0, -kInvSqrt2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(one[1] - Complex(0, kInvSqrt2)), 0.0, 1e-15);
}

TEST(Qft, MatchesDftMatrix) {
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto f = oracle::dft_matrix(n);
    const Circuit qft = qft_circuit(n);
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t x = 0; x < dim; ++x) {
      std::vector<Complex> amps(dim, 0.0);
      amps[x] = 1.0;
      const auto out = run_circuit(QuantumState::from_amplitudes(n, amps), qft);
      for (std::size_t k = 0; k < dim; ++k) {
        EXPECT_LT(std::abs(out[k] - f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(x))),
                  1e-10)
            << "n=" << n << " x=" << x << " k=" << k;
      }
    }
  }
  EXPECT_TRUE(throws_kind(ErrorKind::CapExceeded, [] { qft_circuit(21); }));
}

TEST(Expectation, EigenstatesAndRotation) {
  EXPECT_EQ(expectation_z(new_zero_state(1), {0}), 1.0);
  EXPECT_NEAR(expectation_z(apply_gate(new_zero_state(1), GateOp::ry(0, pi)), {0}), -1.0, 1e-15);
  for (double theta : {0.3, 1.1, 2.7}) {
    const Eigen::Vector2cd v = oracle::rotation(GateKind::RY, theta) * oracle::basis_state(1, 0);
    const double want = std::norm(v(0)) - std::norm(v(1));
    EXPECT_NEAR(expectation_z(apply_gate(new_zero_state(1), GateOp::ry(0, theta)), {0}), want,
                1e-14);
    EXPECT_NEAR(want, std::cos(theta), 1e-14);
  }
  EXPECT_TRUE(throws_kind(ErrorKind::Index, [] { expectation_z(new_zero_state(2), {2}); }));
}

TEST(Expectation, EqualsSignedProbabilitySum) {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = run_circuit(random_state(4, rng), random_circuit(4, 10, rng));
    const auto p = probabilities(s);
    for (std::size_t q = 0; q < 4; ++q) {
      double acc = 0.0;
      for (std::size_t k = 0; k < p.size(); ++k) acc += ((k >> q) & 1U) ? -p[k] : p[k];
      EXPECT_NEAR(expectation_z(s, {q}), acc, 1e-12);
    }
    double total = 0.0;
    for (double v : p) total += v;
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST(InnerProduct, BasicsAndKernelIdentity) {
  Rng rng(31);
  const auto a = random_state(3, rng);
  EXPECT_NEAR(std::abs(inner_product(a, a) - Complex(1.0, 0.0)), 0.0, 1e-10);
  EXPECT_EQ(inner_product(new_zero_state(1), QuantumState::from_amplitudes(1, {0.0, 1.0})),
            Complex(0.0, 0.0));
  EXPECT_TRUE(throws_kind(ErrorKind::Shape,
                          [] { inner_product(new_zero_state(1), new_zero_state(2)); }));

  for (int trial = 0; trial < 10; ++trial) {
    const auto ca = random_circuit(3, 15, rng);
    const auto cb = random_circuit(3, 15, rng);
    const auto sa = run_circuit(new_zero_state(3), ca);
    const auto sb = run_circuit(new_zero_state(3), cb);
    const double direct = std::norm(inner_product(sa, sb));
    const double via_inverse = probabilities(run_circuit(sb, ca.inverse()))[0];
    EXPECT_NEAR(direct, via_inverse, 1e-12);
  }
}

TEST(Determinism, RepeatedRunsAreBitIdentical) {
  Rng rng(37);
  const auto c = random_circuit(5, 40, rng);
  const auto a = run_circuit(new_zero_state(5), c);
  const auto b = run_circuit(new_zero_state(5), c);
  for (std::size_t i = 0; i < a.dimension(); ++i) EXPECT_EQ(a[i], b[i]);
}

}  // namespace
}  // namespace qmc
