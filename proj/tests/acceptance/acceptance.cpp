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

// Acceptance runner: one [PASS]/[FAIL] line per criterion, exit 1 on any failure.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qmc/encoding.hpp"
#include "qmc/error.hpp"
#include "qmc/evalstats.hpp"
#include "qmc/explain.hpp"
#include "qmc/preprocess.hpp"
#include "qmc/qkernel.hpp"
#include "qmc/random.hpp"
#include "qmc/synthetic.hpp"
#include "qmc/vqc.hpp"

namespace {

using namespace qmc;
using std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

GateOp random_gate(std::size_t n, Rng& rng) {
  const std::size_t kinds = n >= 2 ? 7 : 4;
  const auto kind = static_cast<GateKind>(uniform_index(rng, kinds));
  const std::size_t a = uniform_index(rng, n);
  std::size_t b = a;
  while (n >= 2 && b == a) b = uniform_index(rng, n);
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

FeatureMapSpec angle_spec(std::size_t n, std::size_t reps = 2) {
  FeatureMapSpec s;
  s.n_qubits = n;
  s.repetitions = reps;
  return s;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  }
  return e;
}

// 1. QFT against the DFT matrix.
Outcome qft_exactness() {
  Outcome o;
  double worst = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const oracle::DenseMatrix f = oracle::dft_matrix(n);
    const Circuit qft = qft_circuit(n);
    for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
      std::vector<Complex> amps(std::size_t{1} << n, 0.0);
      amps[x] = 1.0;
      const QuantumState out = run_circuit(QuantumState::from_amplitudes(n, amps), qft);
      for (std::size_t k = 0; k < amps.size(); ++k) {
        const Complex ref = f(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(x));
        worst = std::max(worst, std::abs(out[k] - ref));
      }
    }
  }
  o.require(worst <= 1e-10, "max entry error " + fmt(worst));
  o.detail = o.ok ? "max entry error " + fmt(worst) + " for n=1..4" : o.detail;
  return o;
}

// 2. Norm preservation and inverse round trip.
Outcome unitarity() {
  Outcome o;
  Rng rng(2024);
  double norm_err = 0.0, inv_err = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 1 + uniform_index(rng, 6);
    QuantumState s = run_circuit(new_zero_state(n), Circuit(n).add(GateOp::h(0)));
    Circuit c(n);
    const std::size_t depth = 1 + uniform_index(rng, 25);
    for (std::size_t g = 0; g < depth; ++g) c.add(random_gate(n, rng));
    const QuantumState out = run_circuit(s, c);
    norm_err = std::max(norm_err, std::abs(out.norm_squared() - 1.0));
    const QuantumState back = run_circuit(out, c.inverse());
    for (std::size_t i = 0; i < s.dimension(); ++i) {
      inv_err = std::max(inv_err, std::abs(back[i] - s[i]));
    }
  }
  o.require(norm_err <= 1e-10, "norm drift " + fmt(norm_err));
  o.require(inv_err <= 1e-9, "inverse round-trip error " + fmt(inv_err));
  if (o.ok) o.detail = "norm drift " + fmt(norm_err) + ", inverse error " + fmt(inv_err);
  return o;
}

// 3. Parameter-shift gradients against central differences.
Outcome parameter_shift() {
  Outcome o;
  Rng rng(33);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + uniform_index(rng, 4);
    const VqcModel m = random_vqc(n, 1 + uniform_index(rng, 2), 1 + uniform_index(rng, 2), rng());
    std::vector<double> x(n);
    for (double& v : x) v = normal(rng);
    const auto g = param_shift_grad(m, x);
    const auto f = [&](std::vector<double> p) {
      VqcModel copy = m;
      copy.params = std::move(p);
      return expectation(copy, x);
    };
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(g[i] - oracle::central_difference(f, m.params, i)));
    }
  }
  o.require(worst <= 1e-5, "max gradient error " + fmt(worst));
  if (o.ok) o.detail = "max |shift - finite difference| " + fmt(worst) + " over 20 models";
  return o;
}

// 4. Gram matrices: symmetric, unit diagonal, PSD, entries match the overlap oracle.
Outcome kernel_validity() {
  Outcome o;
  Rng rng(44);
  double asym = 0.0, diag = 0.0, min_eig = 1.0, entry = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 1 + uniform_index(rng, 4);
    const std::size_t m = 2 + uniform_index(rng, 11);
    const FeatureMapSpec s = angle_spec(n, 1 + uniform_index(rng, 2));
    const Dataset d = gaussian_features(m, n, rng());
    const Matrix k = kernel_matrix(d, s);
    for (std::size_t i = 0; i < m; ++i) {
      diag = std::max(diag, std::abs(k(i, i) - 1.0));
      for (std::size_t j = 0; j < m; ++j) {
        asym = std::max(asym, std::abs(k(i, j) - k(j, i)));
        const double ref =
            std::norm(oracle::to_dense(apply_feature_map(d.row(i), s))
                          .dot(oracle::to_dense(apply_feature_map(d.row(j), s))));
        entry = std::max(entry, std::abs(kernel_entry(d.row(i), d.row(j), s) - ref));
      }
    }
    min_eig = std::min(min_eig, oracle::symmetric_eigenvalues(to_eigen(k)).minCoeff());
  }
  o.require(asym <= 1e-10, "asymmetry " + fmt(asym));
  o.require(diag <= 1e-10, "diagonal error " + fmt(diag));
  o.require(min_eig >= -1e-8, "min eigenvalue " + fmt(min_eig));
  o.require(entry <= 1e-10, "entry vs oracle " + fmt(entry));
  if (o.ok) {
    o.detail = "asym " + fmt(asym) + ", diag " + fmt(diag) + ", min eig " + fmt(min_eig) +
               ", oracle " + fmt(entry);
  }
  return o;
}

double train_decision(const Matrix& k, const std::vector<int>& y, const SmoSolution& sol,
                      std::size_t i) {
  double f = sol.bias;
  for (std::size_t j = 0; j < y.size(); ++j) f += sol.alpha[j] * y[j] * k(j, i);
  return f;
}

// 5. KKT conditions and monotone dual objective.
Outcome smo_soundness() {
  Outcome o;
  std::size_t kkt_violations = 0, descents = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const FeatureMapSpec s = angle_spec(3);
    const Dataset d =
        label_with_kernel_expansion(gaussian_features(30, 3, seed), s, 5, seed + 500, 0.05);
    const auto y = to_signed_labels(d.labels);
    const Matrix k = kernel_matrix(d, s);
    SvmParams p;
    p.C = 10.0;
    p.record_objective = true;
    const SmoSolution sol = train_qsvm(k, y, p);
    o.require(sol.converged, "seed " + std::to_string(seed) + " did not converge");
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double a = sol.alpha[i];
      const double margin = y[i] * train_decision(k, y, sol, i);
      const bool ok = a <= 0.0       ? margin >= 1.0 - 1e-3
                      : a >= p.C     ? margin <= 1.0 + 1e-3
                                     : std::abs(margin - 1.0) <= 1e-2;
      kkt_violations += ok ? 0 : 1;
    }
    for (std::size_t t = 1; t < sol.objective_trace.size(); ++t) {
      descents += sol.objective_trace[t] < sol.objective_trace[t - 1] - 1e-12 ? 1 : 0;
    }
  }
  o.require(kkt_violations == 0, std::to_string(kkt_violations) + " KKT violations");
  o.require(descents == 0, std::to_string(descents) + " objective decreases");
  if (o.ok) o.detail = "10 problems, 0 KKT violations, dual objective monotone";
  return o;
}

// 6. Realizable labels are re-learned.
Outcome teacher_student() {
  Outcome o;
  const VqcModel teacher = random_vqc(4, 2, 2, 202);
  const Dataset data = vqc_teacher_dataset(teacher, 80, 4, 0.1, 102);
  TrainConfig cfg;
  cfg.epochs = 100;
  cfg.learning_rate = 0.05;
  cfg.seed = 2;
  const VqcTrainResult r = train_vqc(data, VqcModel::make(4, 2, 2), cfg);
  const double vqc_acc = accuracy(r.model, data);
  const VqcTrainResult again = train_vqc(data, VqcModel::make(4, 2, 2), cfg);
  o.require(again.model.params == r.model.params, "VQC training is not deterministic");
  o.require(vqc_acc >= 0.9, "VQC training accuracy " + fmt(vqc_acc));

  const FeatureMapSpec s = angle_spec(4);
  const Dataset kd = label_with_kernel_expansion(gaussian_features(40, 4, 31), s, 8, 32, 0.02);
  SvmParams p;
  p.C = 100.0;
  const QsvmFit fit = fit_qsvm(kd, s, p);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < kd.size(); ++i) {
    correct += svm_label(svm_decision(fit.model, kd.row(i))) == kd.labels[i] ? 1 : 0;
  }
  const double svm_acc = static_cast<double>(correct) / static_cast<double>(kd.size());
  o.require(svm_acc == 1.0, "QSVM training accuracy " + fmt(svm_acc));
  if (o.ok) o.detail = "VQC " + fmt(vqc_acc) + ", QSVM " + fmt(svm_acc);
  return o;
}

// 7. Amplitude encoding: scale invariance and zero-vector rejection.
Outcome amplitude_contract() {
  Outcome o;
  Rng rng(77);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    std::vector<double> x(1 + uniform_index(rng, 16));
    for (double& v : x) v = normal(rng);
    const double c = std::exp(uniform(rng, -5.0, 5.0));
    std::vector<double> cx(x);
    for (double& v : cx) v *= c;
    const QuantumState a = amplitude_encode(x);
    const QuantumState b = amplitude_encode(cx);
    for (std::size_t i = 0; i < a.dimension(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  o.require(worst <= 1e-10, "scale mismatch " + fmt(worst));
  bool rejected = false;
  try {
    const std::vector<double> zero(4, 0.0);
    amplitude_encode(zero);
  } catch (const qmc::Error& e) {
    rejected = e.kind() == ErrorKind::DegenerateInput;
  }
  o.require(rejected, "zero vector accepted");
  if (o.ok) o.detail = "max scale mismatch " + fmt(worst) + ", zero vector rejected";
  return o;
}

// 8. PCA and standardization properties.
Outcome pca_properties() {
  Outcome o;
  Rng rng(88);
  double ortho = 0.0, offdiag = 0.0, round = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = 2 + uniform_index(rng, 5);
    Dataset raw = gaussian_features(40, d, rng(), 2.0);
    for (std::size_t r = 0; r < raw.size(); ++r) raw.features(r, 0) += 0.7 * raw.features(r, 1);
    const Dataset z = apply_standardize(fit_standardize(raw), raw);
    const std::size_t k = 1 + uniform_index(rng, d);
    const PcaModel p = fit_pca(z, k);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        double dot = 0.0;
        for (std::size_t r = 0; r < d; ++r) dot += p.basis(r, a) * p.basis(r, b);
        ortho = std::max(ortho, std::abs(dot - (a == b ? 1.0 : 0.0)));
      }
    }
    const Matrix cov = sample_covariance(apply_pca(p, z).features);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        offdiag = std::max(offdiag,
                           std::abs(cov(a, b) - (a == b ? p.explained_variance[a] : 0.0)));
      }
    }
    const PcaModel full = fit_pca(z, d);
    const Matrix back = reconstruct_pca(full, apply_pca(full, z).features);
    for (std::size_t r = 0; r < z.size(); ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        round = std::max(round, std::abs(back(r, c) - z.features(r, c)));
      }
    }
  }
  Dataset line;
  line.feature_names = {"x", "y"};
  line.features = Matrix(0, 2);
  for (double v : {-1.0, 0.0, 1.0}) line.features.append_row(std::vector<double>{v, v});
  line.labels = {0, 0, 0};
  const double second = fit_pca(line, 2).all_eigenvalues[1];

  o.require(ortho <= 1e-8, "orthonormality error " + fmt(ortho));
  o.require(offdiag <= 1e-8, "projected covariance error " + fmt(offdiag));
  o.require(round <= 1e-8, "round trip error " + fmt(round));
  o.require(std::abs(second) <= 1e-10, "line second eigenvalue " + fmt(second));
  if (o.ok) {
    o.detail = "ortho " + fmt(ortho) + ", cov " + fmt(offdiag) + ", round trip " + fmt(round) +
               ", line eigenvalue " + fmt(second);
  }
  return o;
}

// 9. Attribution soundness.
Outcome attribution() {
  Outcome o;
  Rng rng(99);
  double null_score = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    VqcModel m = random_vqc(3, 2, 2, seed);
    m.entangling = false;
    m.feature_map.entangling = false;
    std::vector<double> x(3);
    for (double& v : x) v = uniform(rng, -pi, pi);
    const auto g = grad_attribution(m, x);
    const auto s = score_attribution(
        [&](std::span<const double> v) { return forward(m, v).probability_malicious; }, x);
    for (std::size_t j = 1; j < 3; ++j) {
      null_score = std::max({null_score, std::abs(g.scores[j]), std::abs(s.scores[j])});
    }
  }
  VqcModel one = VqcModel::make(1, 1, 1);
  double analytic = 0.0;
  for (double x0 = -3.0; x0 <= 3.0; x0 += 0.25) {
    const std::vector<double> x{x0};
    analytic = std::max(analytic, std::abs(grad_attribution(one, x).scores[0] + 0.5 * std::sin(x0)));
  }
  o.require(null_score <= 1e-10, "disconnected feature score " + fmt(null_score));
  o.require(analytic <= 1e-8, "analytic gradient error " + fmt(analytic));
  if (o.ok) o.detail = "null score " + fmt(null_score) + ", analytic error " + fmt(analytic);
  return o;
}

// 10. Statistics against independent oracles.
Outcome statistics() {
  Outcome o;
  std::mt19937_64 gen(10);
  std::normal_distribution<double> noise(0.0, 1.0);
  double p_err = 0.0;
  for (int c = 0; c < 10; ++c) {
    const std::size_t n = 3 + gen() % 20;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = noise(gen) + 0.4;
      b[i] = noise(gen);
    }
    const TTestResult r = paired_t_test(a, b);
    const double ref = 2.0 * (1.0 - oracle::t_cdf(std::abs(r.t_statistic), double(n - 1)));
    p_err = std::max(p_err, std::abs(r.p_value - ref));
  }
  o.require(p_err <= 1e-4, "p-value error " + fmt(p_err));

  std::vector<int> half(100, 0);
  std::fill(half.begin(), half.begin() + 50, 1);
  const StatReport s1 = bootstrap_ci(half, 1000, 7);
  const StatReport s2 = bootstrap_ci(half, 1000, 7);
  o.require(s1.distribution == s2.distribution, "bootstrap not deterministic");
  const double hw = 1.959963984540054 * 0.05;
  const double ci_err = std::max(std::abs(s1.ci_low - (0.5 - hw)), std::abs(s1.ci_high - (0.5 + hw)));
  o.require(ci_err <= 0.03, "CI vs binomial " + fmt(ci_err));

  const std::vector<double> u{0, 1, 2}, v{-1, 0, 1};
  const auto d = cohens_d(u, v);
  o.require(d && *d == 1.0, "Cohen's d example");
  const std::vector<int> p1{1, 1, 0, 0}, p2{1, 0, 1, 0}, q1{1, 1, 1, 0, 0, 0}, q2{1, 1, 0, 0, 0, 1};
  const auto k0 = cohens_kappa(p1, p2);
  const auto k1 = cohens_kappa(p1, p1);
  const auto k3 = cohens_kappa(q1, q2);
  o.require(k0 && *k0 == 0.0 && k1 && *k1 == 1.0 && k3 && std::abs(*k3 - 1.0 / 3.0) < 1e-15,
            "Cohen's kappa examples");
  if (o.ok) {
    o.detail = "p error " + fmt(p_err) + ", CI (" + fmt(s1.ci_low) + ", " + fmt(s1.ci_high) +
               ") vs binomial within " + fmt(ci_err);
  }
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 11. `run` twice gives byte-identical artifacts.
Outcome end_to_end() {
  Outcome o;
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("qmc_accept_" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({"seed": 1, "preprocess": {"pca_components": 4},)"
        << R"( "model": {"type": "vqc", "n_qubits": 4, "n_layers": 2, "repetitions": 2},)"
        << R"( "train": {"epochs": 100, "learning_rate": 0.05},)"
        << R"( "evaluate": {"bootstrap_iterations": 1000, "test_fraction": 0.2}})";
  }
  const std::string cli = QMC_CLI_PATH;
  const std::string d = dir.string() + "/";
  o.require(shell(cli + " synth --config " + d + "config.json --out " + d + "data.csv --samples 500") == 0,
            "synth failed");
  for (const char* run : {"a", "b"}) {
    o.require(shell(cli + " run --config " + d + "config.json --data " + d + "data.csv --out-dir " +
                    d + run) == 0,
              std::string("run ") + run + " failed");
  }
  std::size_t compared = 0;
  for (const char* f : {"report.json", "model.json", "preprocess_model.json", "predictions.csv",
                        "processed.csv", "config.json"}) {
    const std::string a = slurp(dir / "a" / f);
    o.require(!a.empty() && a == slurp(dir / "b" / f), std::string(f) + " differs");
    ++compared;
  }
  std::filesystem::remove_all(dir);
  if (o.ok) o.detail = std::to_string(compared) + " artifacts byte-identical";
  return o;
}

struct Criterion {
  const char* name;
  double budget_seconds;  // 0 = no runtime bound
  std::function<Outcome()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"1 qft exactness", 1.0, qft_exactness},
      {"2 unitarity suite", 10.0, unitarity},
      {"3 parameter-shift correctness", 60.0, parameter_shift},
      {"4 kernel validity", 0.0, kernel_validity},
      {"5 smo soundness", 0.0, smo_soundness},
      {"6 teacher-student learnability", 300.0, teacher_student},
      {"7 amplitude-encoding contract", 0.0, amplitude_contract},
      {"8 pca/standardization", 0.0, pca_properties},
      {"9 attribution soundness", 0.0, attribution},
      {"10 statistics oracles", 0.0, statistics},
      {"11 end-to-end determinism", 0.0, end_to_end},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.check();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.ok && c.budget_seconds > 0.0 && secs > c.budget_seconds) {
      out.ok = false;
      out.detail = "took " + fmt(secs) + " s, budget " + fmt(c.budget_seconds) + " s";
    }
    failed += out.ok ? 0 : 1;
    std::printf("[%s] %s (%.3f s): %s\n", out.ok ? "PASS" : "FAIL", c.name, secs,
                out.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
              criteria.size());
  return failed == 0 ? 0 : 1;
}
