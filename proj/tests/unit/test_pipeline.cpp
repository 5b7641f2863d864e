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
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>

#include "qmc/model_io.hpp"
#include "qmc/pipeline.hpp"
#include "qmc/random.hpp"
#include "qmc/synthetic.hpp"
#include "test_util.hpp"

namespace qmc {
namespace {

using nlohmann::json;
using testing::throws_kind;

VqcModel small_vqc(std::uint64_t seed) {
  VqcModel m = random_vqc(3, 2, 2, seed);
  m.feature_names = {"a", "b", "c"};
  return m;
}

SvmModel small_svm() {
  const Dataset raw = gaussian_features(20, 3, 3);
  FeatureMapSpec s;
  s.n_qubits = 3;
  Dataset d = label_with_kernel_expansion(raw, s, 4, 5);
  d.feature_names = {"a", "b", "c"};
  return fit_qsvm(d, s, {}).model;
}

std::vector<std::vector<double>> random_inputs(std::size_t count, std::size_t dim,
                                               std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (auto& x : out) {
    for (double& v : x) v = uniform(rng, -3.0, 3.0);
  }
  return out;
}

PipelineConfig small_config() {
  PipelineConfig c;
  c.seed = 1;
  c.n_qubits = 4;
  c.n_layers = 2;
  c.repetitions = 2;
  c.preprocess.pca_components = 4;
  c.train.epochs = 100;
  c.train.learning_rate = 0.05;
  return c;
}

TEST(ModelIo, VqcRoundTripIsBitIdentical) {
  testing::TempDir dir("io_vqc");
  VqcModel m = small_vqc(4);
  m.training = TrainConfig{};
  save_model(dir / "m.json", m);
  const VqcModel back = load_vqc(dir / "m.json");
  for (const auto& x : random_inputs(20, 3, 9)) {
    EXPECT_EQ(forward(back, x).probability_malicious, forward(m, x).probability_malicious);
  }
  EXPECT_EQ(back.params, m.params);
  EXPECT_EQ(back.feature_names, m.feature_names);
}

TEST(ModelIo, SvmEnsembleAndPreprocessRoundTrip) {
  testing::TempDir dir("io_other");
  const SvmModel s = small_svm();
  save_model(dir / "s.json", s);
  const SvmModel sb = load_svm(dir / "s.json");

  EnsembleModel e;
  e.members = {{small_vqc(2), 0.25}, {s, 0.75}};
  save_model(dir / "e.json", e);
  const AnyModel eb = load_model(dir / "e.json");
  EXPECT_EQ(model_type_name(eb), "ensemble");
  for (const auto& x : random_inputs(20, 3, 11)) {
    EXPECT_EQ(svm_decision(sb, x), svm_decision(s, x));
    EXPECT_EQ(predict(eb, x).probability_malicious, ensemble_predict(e, x).probability_malicious);
  }

  Dataset raw = gaussian_features(30, 4, 2);
  PreprocessConfig pc;
  pc.pca_components = 2;
  const PreprocessFit fit = fit_preprocess(raw, pc);
  save_model(dir / "p.json", fit.model);
  EXPECT_EQ(load_preprocess(dir / "p.json").apply(raw).features, fit.model.apply(raw).features);
}

TEST(ModelIo, RejectsBadFiles) {
  testing::TempDir dir("io_bad");
  save_model(dir / "v.json", small_vqc(1));
  save_model(dir / "s.json", small_svm());

  json j = read_json(dir / "v.json");
  j["format_version"] = "99";
  write_json(dir / "v99.json", j);
  EXPECT_TRUE(throws_kind(ErrorKind::Format, [&] { load_vqc(dir / "v99.json"); }));
  j["format_version"] = 99;
  write_json(dir / "v99n.json", j);
  EXPECT_TRUE(throws_kind(ErrorKind::Format, [&] { load_vqc(dir / "v99n.json"); }));

  EXPECT_TRUE(throws_kind(ErrorKind::ModelType, [&] { load_vqc(dir / "s.json"); }));
  EXPECT_TRUE(throws_kind(ErrorKind::ModelType, [&] { load_preprocess(dir / "v.json"); }));

  const std::string text = testing::read_file(dir / "v.json");
  testing::write_file(dir / "cut.json", text.substr(0, text.size() / 2));
  try {
    load_vqc(dir / "cut.json");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("byte"), std::string::npos) << e.what();
  }
  EXPECT_TRUE(throws_kind(ErrorKind::Io, [&] { load_vqc(dir / "absent.json"); }));
}

TEST(Ensemble, Examples) {
  const VqcModel v = small_vqc(3);
  const SvmModel s = small_svm();
  const auto xs = random_inputs(10, 3, 4);

  EnsembleModel single;
  single.members = {{v, 1.0}};
  for (const auto& x : xs) {
    EXPECT_EQ(ensemble_predict(single, x).probability_malicious,
              forward(v, x).probability_malicious);
  }

  EnsembleModel first_only;
  first_only.members = {{v, 1.0}, {s, 0.0}};
  EnsembleModel mix;
  mix.members = {{v, 0.3}, {s, 0.7}};
  for (const auto& x : xs) {
    EXPECT_NEAR(ensemble_predict(first_only, x).probability_malicious,
                forward(v, x).probability_malicious, 1e-12);
    const double pv = forward(v, x).probability_malicious;
    const double ps = svm_probability(s, x);
    const double p = ensemble_predict(mix, x).probability_malicious;
    EXPECT_GE(p, std::min(pv, ps) - 1e-15);
    EXPECT_LE(p, std::max(pv, ps) + 1e-15);
  }

  // Members at 0.2 and 0.8 with equal weight meet exactly at the tie.
  VqcModel lo = VqcModel::make(1, 1, 1), hi = VqcModel::make(1, 1, 1);
  const double theta = std::acos(2 * 0.2 - 1);
  lo.params[1] = theta;  // RY on the only qubit
  hi.params[1] = std::acos(2 * 0.8 - 1);
  EnsembleModel tie;
  tie.members = {{lo, 0.5}, {hi, 0.5}};
  const std::vector<double> zero{0.0};
  const Prediction t = ensemble_predict(tie, zero);
  EXPECT_NEAR(t.probability_malicious, 0.5, 1e-12);
  EXPECT_EQ(label_from_probability(0.5), 1);

  const std::vector<double> wide{0, 0, 0, 0};
  EXPECT_TRUE(throws_kind(ErrorKind::Shape, [&] { ensemble_predict(mix, wide); }));
  EnsembleModel unnormalized;
  unnormalized.members = {{v, 2.0}, {s, 2.0}};
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidInput, [&] { unnormalized.validate(); }));
  unnormalized.normalize();
  EXPECT_NO_THROW(unnormalized.validate());
  EnsembleModel negative;
  negative.members = {{v, -0.5}, {s, 1.5}};
  EXPECT_TRUE(throws_kind(ErrorKind::InvalidInput, [&] { negative.validate(); }));
}

TEST(Config, JsonRoundTripAndValidation) {
  const PipelineConfig c = small_config();
  const PipelineConfig back = PipelineConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());

  const PipelineConfig d = PipelineConfig::from_json(json{{"model", {{"n_qubits", 5}}}});
  EXPECT_EQ(d.preprocess.pca_components, 5u);

  EXPECT_TRUE(throws_kind(ErrorKind::Config, [] {
    PipelineConfig::from_json(json{{"model", {{"n_layers", 11}, {"repetitions", 2}}}});
  }));
  EXPECT_TRUE(throws_kind(ErrorKind::Config,
                          [] { PipelineConfig::from_json(json{{"modle", json::object()}}); }));
  EXPECT_TRUE(throws_kind(ErrorKind::Config, [] {
    PipelineConfig::from_json(json{{"evaluate", {{"test_fraction", 1.5}}}});
  }));
  EXPECT_TRUE(throws_kind(ErrorKind::Config, [] {
    PipelineConfig::from_json(json{{"model", {{"type", "forest"}}}});
  }));
  EXPECT_TRUE(throws_kind(ErrorKind::Config, [] {
    PipelineConfig::from_json(json{{"train", {{"learning_rate", "fast"}}}});
  }));
  testing::TempDir dir("cfg");
  testing::write_file(dir / "c.json", "{\"seed\": ");
  EXPECT_TRUE(throws_kind(ErrorKind::Config, [&] { PipelineConfig::load(dir / "c.json"); }));
}

TEST(Pipeline, DirectoryLockIsExclusive) {
  testing::TempDir dir("lock");
  std::filesystem::create_directories(dir.path());
  {
    DirectoryLock a(dir.path());
    EXPECT_TRUE(throws_kind(ErrorKind::Io, [&] { DirectoryLock b(dir.path()); }));
  }
  EXPECT_NO_THROW(DirectoryLock c(dir.path()));
}

TEST(Pipeline, RunExperimentIsDeterministicAndAccurate) {
  testing::TempDir dir("run");
  std::filesystem::create_directories(dir.path());
  const PipelineConfig cfg = small_config();
  TeacherStudentSpec spec;
  spec.samples = 500;
  spec.seed = cfg.seed;
  write_csv(dir / "data.csv", teacher_student_raw(spec, cfg.preprocess));

  const ExperimentResult a = run_experiment(cfg, dir / "data.csv", dir / "a");
  const ExperimentResult b = run_experiment(cfg, dir / "data.csv", dir / "b");
  EXPECT_GE(a.report["metrics"]["accuracy"].get<double>(), 0.9);
  for (const char* f : {"report.json", "model.json", "predictions.csv", "preprocess_model.json",
                        "processed.csv", "config.json"}) {
    EXPECT_EQ(testing::read_file(dir / (std::string("a/") + f)),
              testing::read_file(dir / (std::string("b/") + f)))
        << f;
  }
  EXPECT_FALSE(std::filesystem::exists(dir / "a/.qmc.lock"));
  EXPECT_EQ(testing::read_file(dir / "a/predictions.csv").rfind("sample_index,probability,label\n", 0),
            0u);

  PipelineConfig deep = cfg;
  deep.n_layers = 11;
  EXPECT_TRUE(throws_kind(ErrorKind::Config, [&] { run_experiment(deep, dir / "data.csv", dir / "c"); }));
  EXPECT_FALSE(std::filesystem::exists(dir / "c/model.json"));
}

#ifdef QMC_CLI_PATH
int cli(const std::string& args) {
  const std::string cmd = std::string(QMC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  testing::TempDir dir("cli");
  std::filesystem::create_directories(dir.path());
  const std::string d = dir.path().string() + "/";
  testing::write_file(dir / "ok.json",
                      R"({"seed": 1, "model": {"n_qubits": 4, "n_layers": 2},)"
                      R"( "train": {"epochs": 5}, "evaluate": {"bootstrap_iterations": 100}})");
  testing::write_file(dir / "deep.json", R"({"model": {"n_layers": 11}})");
  testing::write_file(dir / "np.json",
                      R"({"model": {"type": "qsvm", "n_qubits": 4, "max_passes": 1}})");

  EXPECT_EQ(cli("synth --config " + d + "ok.json --out " + d + "data.csv --samples 200"), 0);
  EXPECT_EQ(cli("run --config " + d + "ok.json --data " + d + "data.csv --out-dir " + d + "r"), 0);
  EXPECT_EQ(cli("predict --model " + d + "r/model.json --data " + d + "r/processed.csv --out-dir " + d + "p"), 0);
  EXPECT_EQ(cli("explain --model " + d + "r/model.json --data " + d + "r/processed.csv --out-dir " + d + "x"), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "x/attribution.csv"));

  EXPECT_EQ(cli(""), 1);
  EXPECT_EQ(cli("train forest --data " + d + "data.csv"), 1);
  EXPECT_EQ(cli("run --config " + d + "deep.json --data " + d + "data.csv --out-dir " + d + "q"), 1);
  EXPECT_EQ(cli("run --config " + d + "ok.json --data " + d + "missing.csv --out-dir " + d + "q"), 2);
  EXPECT_EQ(cli("train qsvm --config " + d + "np.json --data " + d + "r/processed.csv --out-dir " + d + "q"), 3);
}
#endif

}  // namespace
}  // namespace qmc
