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

#include "qmc/pipeline.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <ostream>
#include <set>
#include <string>

#include "qmc/error.hpp"
#include "qmc/model_io.hpp"
#include "qmc/random.hpp"

namespace qmc {

using nlohmann::json;

namespace {

void config_error(const std::string& msg) { throw Error(ErrorKind::Config, msg); }

void reject_unknown(const json& j, std::string_view section, std::set<std::string> known) {
  const std::string prefix = section.empty() ? "" : std::string(section) + ".";
  if (!j.is_object()) {
    config_error(section.empty() ? "config must be a JSON object"
                                 : "config section '" + std::string(section) + "' must be an object");
  }
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) config_error("unknown config key '" + prefix + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json finite_or_marker(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "+inf" : "-inf";
}

json metrics_json(const MetricsReport& m) {
  return json{{"accuracy", m.accuracy},
              {"precision", optional_json(m.precision)},
              {"recall", optional_json(m.recall)},
              {"f1", optional_json(m.f1)},
              {"fpr", optional_json(m.fpr)},
              {"fnr", optional_json(m.fnr)},
              {"confusion",
               {{"tp", m.confusion.tp},
                {"fp", m.confusion.fp},
                {"tn", m.confusion.tn},
                {"fn", m.confusion.fn}}}};
}

std::vector<int> correctness(const std::vector<int>& preds, const std::vector<int>& labels) {
  std::vector<int> c(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) c[i] = preds[i] == labels[i] ? 1 : 0;
  return c;
}

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("stage '") + name + "': " + e.what());
  }
}

}  // namespace

std::string_view to_string(ModelChoice c) noexcept {
  switch (c) {
    case ModelChoice::Vqc: return "vqc";
    case ModelChoice::Qsvm: return "qsvm";
    case ModelChoice::Ensemble: return "ensemble";
  }
  return "?";
}

ModelChoice model_choice_from_string(std::string_view s) {
  if (s == "vqc") return ModelChoice::Vqc;
  if (s == "qsvm") return ModelChoice::Qsvm;
  if (s == "ensemble") return ModelChoice::Ensemble;
  throw Error(ErrorKind::Config, "unknown model type '" + std::string(s) + "'");
}

void PipelineConfig::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    config_error("model.n_qubits=" + std::to_string(n_qubits) + " outside [1, " +
                 std::to_string(kMaxQubits) + "]");
  }
  if (n_layers < 1) config_error("model.n_layers must be >= 1");
  if (repetitions < 1) config_error("model.repetitions must be >= 1");
  if (n_layers + repetitions > kMaxCircuitBlocks) {
    config_error("depth cap: n_layers + repetitions = " + std::to_string(n_layers + repetitions) +
                 " exceeds " + std::to_string(kMaxCircuitBlocks));
  }
  if (train.epochs < 1) config_error("train.epochs must be >= 1");
  if (!(train.learning_rate > 0.0)) config_error("train.learning_rate must be > 0");
  if (!(train.beta1 >= 0.0 && train.beta1 < 1.0) || !(train.beta2 >= 0.0 && train.beta2 < 1.0) ||
      !(train.epsilon > 0.0)) {
    config_error("train: invalid ADAM hyperparameters");
  }
  if (!(svm.C > 0.0)) config_error("model.C must be > 0");
  if (!(svm.tolerance > 0.0)) config_error("model.svm_tolerance must be > 0");
  if (svm.max_passes < 1) config_error("model.max_passes must be >= 1");
  if (model == ModelChoice::Ensemble) {
    if (ensemble_weights.size() != 2) config_error("model.ensemble_weights needs (vqc, qsvm)");
    double sum = 0.0;
    for (double w : ensemble_weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) config_error("ensemble weights must be >= 0");
      sum += w;
    }
    if (!(sum > 0.0)) config_error("ensemble weights sum to zero");
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    config_error("evaluate.test_fraction must lie in (0, 1)");
  }
  if (bootstrap_iterations < 100) config_error("evaluate.bootstrap_iterations must be >= 100");
  if (!(preprocess.z_cap > 0.0)) config_error("preprocess.z_cap must be > 0");
  if (!(preprocess.correlation_threshold > 0.0 && preprocess.correlation_threshold <= 1.0)) {
    config_error("preprocess.correlation_threshold must lie in (0, 1]");
  }
  if (preprocess.pca_components > feature_map().max_features()) {
    config_error("preprocess.pca_components=" + std::to_string(preprocess.pca_components) +
                 " exceeds the " + std::to_string(feature_map().max_features()) +
                 " features the encoder accepts");
  }
}

FeatureMapSpec PipelineConfig::feature_map() const {
  FeatureMapSpec s;
  s.n_qubits = n_qubits;
  s.repetitions = repetitions;
  s.encoding = encoding;
  return s;
}

VqcModel PipelineConfig::vqc_architecture() const {
  VqcModel m = VqcModel::make(n_qubits, n_layers, repetitions);
  m.feature_map.encoding = encoding;
  return m;
}

std::uint64_t PipelineConfig::split_seed() const { return mix_seed(seed, 1); }
std::uint64_t PipelineConfig::bootstrap_seed() const { return mix_seed(seed, 2); }

json PipelineConfig::to_json() const {
  return json{
      {"seed", seed},
      {"data",
       {{"label_column", label_column},
        {"positive_label", positive_label},
        {"ignore_columns", ignore_columns}}},
      {"preprocess",
       {{"z_cap", preprocess.z_cap},
        {"correlation_threshold", preprocess.correlation_threshold},
        {"pca_components", preprocess.pca_components},
        {"remove_outliers", preprocess.remove_outliers},
        {"prune_correlated", preprocess.prune_correlated}}},
      {"model",
       {{"type", qmc::to_string(model)},
        {"n_qubits", n_qubits},
        {"n_layers", n_layers},
        {"repetitions", repetitions},
        {"encoding", qmc::to_string(encoding)},
        {"C", svm.C},
        {"svm_tolerance", svm.tolerance},
        {"max_passes", svm.max_passes},
        {"ensemble_weights", ensemble_weights}}},
      {"train",
       {{"epochs", train.epochs},
        {"learning_rate", train.learning_rate},
        {"batch_size", train.batch_size == 0 ? json("full") : json(train.batch_size)},
        {"optimizer", qmc::to_string(train.optimizer)},
        {"beta1", train.beta1},
        {"beta2", train.beta2},
        {"epsilon", train.epsilon}}},
      {"evaluate",
       {{"bootstrap_iterations", bootstrap_iterations}, {"test_fraction", test_fraction}}},
  };
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  try {
    reject_unknown(j, "", {"seed", "data", "preprocess", "model", "train", "evaluate"});
    read(j, "seed", c.seed);
    if (j.contains("data")) {
      const json& d = j["data"];
      reject_unknown(d, "data", {"label_column", "positive_label", "ignore_columns"});
      read(d, "label_column", c.label_column);
      read(d, "positive_label", c.positive_label);
      read(d, "ignore_columns", c.ignore_columns);
    }
    bool pca_given = false;
    if (j.contains("model")) {
      const json& m = j["model"];
      reject_unknown(m, "model",
                     {"type", "n_qubits", "n_layers", "repetitions", "encoding", "C",
                      "svm_tolerance", "max_passes", "ensemble_weights"});
      if (m.contains("type")) c.model = model_choice_from_string(m["type"].get<std::string>());
      read(m, "n_qubits", c.n_qubits);
      read(m, "n_layers", c.n_layers);
      read(m, "repetitions", c.repetitions);
      if (m.contains("encoding")) c.encoding = encoding_from_string(m["encoding"].get<std::string>());
      read(m, "C", c.svm.C);
      read(m, "svm_tolerance", c.svm.tolerance);
      read(m, "max_passes", c.svm.max_passes);
      read(m, "ensemble_weights", c.ensemble_weights);
    }
    if (j.contains("preprocess")) {
      const json& p = j["preprocess"];
      reject_unknown(p, "preprocess",
                     {"z_cap", "correlation_threshold", "pca_components", "remove_outliers",
                      "prune_correlated"});
      read(p, "z_cap", c.preprocess.z_cap);
      read(p, "correlation_threshold", c.preprocess.correlation_threshold);
      if (p.contains("pca_components") && !p["pca_components"].is_null()) {
        c.preprocess.pca_components = p["pca_components"].get<std::size_t>();
        pca_given = true;
      }
      read(p, "remove_outliers", c.preprocess.remove_outliers);
      read(p, "prune_correlated", c.preprocess.prune_correlated);
    }
    if (!pca_given) c.preprocess.pca_components = c.n_qubits;
    if (j.contains("train")) {
      const json& t = j["train"];
      reject_unknown(t, "train",
                     {"epochs", "learning_rate", "batch_size", "optimizer", "beta1", "beta2",
                      "epsilon"});
      read(t, "epochs", c.train.epochs);
      read(t, "learning_rate", c.train.learning_rate);
      if (t.contains("batch_size")) {
        const json& b = t["batch_size"];
        if (b.is_string()) {
          if (b.get<std::string>() != "full") config_error("train.batch_size must be an integer or \"full\"");
          c.train.batch_size = 0;
        } else {
          c.train.batch_size = b.get<std::size_t>();
          if (c.train.batch_size == 0) config_error("train.batch_size must be >= 1");
        }
      }
      if (t.contains("optimizer")) c.train.optimizer = optimizer_from_string(t["optimizer"].get<std::string>());
      read(t, "beta1", c.train.beta1);
      read(t, "beta2", c.train.beta2);
      read(t, "epsilon", c.train.epsilon);
    }
    if (j.contains("evaluate")) {
      const json& e = j["evaluate"];
      reject_unknown(e, "evaluate", {"bootstrap_iterations", "test_fraction"});
      read(e, "bootstrap_iterations", c.bootstrap_iterations);
      read(e, "test_fraction", c.test_fraction);
    }
  } catch (const json::exception& e) {
    config_error(std::string("config: ") + e.what());
  }
  c.train.seed = c.seed;
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  try {
    return from_json(read_json(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Parse || e.kind() == ErrorKind::Io) {
      throw Error(ErrorKind::Config, e.what());
    }
    throw;
  }
}

CsvOptions processed_csv_options() {
  CsvOptions o;
  o.label_column = "label";
  o.positive_label = "1";
  return o;
}

Dataset align_features(const Dataset& data, const std::vector<std::string>& names) {
  if (names.empty() || names == data.feature_names) return data;
  std::vector<std::size_t> cols;
  for (const auto& name : names) {
    const auto it = std::find(data.feature_names.begin(), data.feature_names.end(), name);
    if (it == data.feature_names.end()) {
      throw Error(ErrorKind::Shape, "data is missing model feature '" + name + "'");
    }
    cols.push_back(static_cast<std::size_t>(it - data.feature_names.begin()));
  }
  return data.select_features(cols);
}

TrainOutcome train_model(const Dataset& train, const PipelineConfig& cfg, ModelChoice choice) {
  cfg.validate();
  train.validate();
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;

  auto train_vqc_member = [&](json& info) {
    VqcTrainResult r = train_vqc(train, cfg.vqc_architecture(), tc);
    info["initial_loss"] = r.initial_loss;
    info["loss_history"] = r.loss_history;
    info["train_accuracy"] = accuracy(r.model, train);
    return std::move(r.model);
  };
  auto train_svm_member = [&](json& info) {
    QsvmFit fit = fit_qsvm(train, cfg.feature_map(), cfg.svm);
    if (!fit.solution.converged) {
      throw Error(ErrorKind::Numerical,
                  "SMO stopped at max_passes=" + std::to_string(cfg.svm.max_passes) +
                      " with KKT gap " + std::to_string(fit.solution.final_gap) +
                      " above tolerance " + std::to_string(cfg.svm.tolerance));
    }
    info["converged"] = fit.solution.converged;
    info["iterations"] = fit.solution.iterations;
    info["final_gap"] = fit.solution.final_gap;
    info["n_support"] = fit.model.support_indices.size();
    return std::move(fit.model);
  };

  TrainOutcome out;
  switch (choice) {
    case ModelChoice::Vqc: {
      json info;
      out.model = train_vqc_member(info);
      out.info = {{"vqc", info}};
      break;
    }
    case ModelChoice::Qsvm: {
      json info;
      out.model = train_svm_member(info);
      out.info = {{"qsvm", info}};
      break;
    }
    case ModelChoice::Ensemble: {
      json vinfo, sinfo;
      EnsembleModel e;
      e.members.push_back({train_vqc_member(vinfo), cfg.ensemble_weights.at(0)});
      e.members.push_back({train_svm_member(sinfo), cfg.ensemble_weights.at(1)});
      e.normalize();
      out.model = std::move(e);
      out.info = {{"vqc", vinfo}, {"qsvm", sinfo}};
      break;
    }
  }
  return out;
}

std::vector<Prediction> predict_all(const AnyModel& model, const Dataset& data) {
  const Dataset aligned = align_features(data, feature_names(model));
  std::vector<Prediction> preds(aligned.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(aligned.size()); ++r) {
    preds[static_cast<std::size_t>(r)] = predict(model, aligned.row(static_cast<std::size_t>(r)));
  }
  return preds;
}

void write_predictions_csv(const std::filesystem::path& path,
                           const std::vector<Prediction>& preds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << "sample_index,probability,label\n";
  for (std::size_t i = 0; i < preds.size(); ++i) {
    out << i << ',' << format_double(preds[i].probability_malicious) << ',' << preds[i].label
        << '\n';
  }
}

json evaluation_report(const AnyModel& model, const Dataset& test,
                       const std::vector<Prediction>& preds, const PipelineConfig& cfg) {
  if (preds.size() != test.size()) {
    throw Error(ErrorKind::Shape, "prediction count differs from test rows");
  }
  std::vector<int> labels_pred(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) labels_pred[i] = preds[i].label;
  const MetricsReport m = metrics(confusion(labels_pred, test.labels));
  const auto correct = correctness(labels_pred, test.labels);
  const StatReport boot = bootstrap_ci(correct, cfg.bootstrap_iterations, cfg.bootstrap_seed());

  json report{{"model_type", model_type_name(model)},
              {"seed", cfg.seed},
              {"n_test", test.size()},
              {"metrics", metrics_json(m)},
              {"bootstrap",
               {{"iterations", cfg.bootstrap_iterations},
                {"interval", "percentile 95%"},
                {"mean", boot.mean},
                {"ci_low", boot.ci_low},
                {"ci_high", boot.ci_high},
                {"coeff_variation", optional_json(boot.coeff_variation)}}}};

  if (const auto* ens = std::get_if<EnsembleModel>(&model); ens && ens->members.size() == 2) {
    const Dataset aligned = align_features(test, feature_names(model));
    std::vector<std::vector<int>> member_labels(2, std::vector<int>(aligned.size()));
    json members = json::array();
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& member = ens->members[k];
      for (std::size_t i = 0; i < aligned.size(); ++i) {
        member_labels[k][i] =
            label_from_probability(member_probability(member.model, aligned.row(i)));
      }
      members.push_back({{"model_type", member.model.index() == 0 ? "vqc" : "qsvm"},
                         {"weight", member.weight},
                         {"metrics", metrics_json(metrics(confusion(member_labels[k], test.labels)))}});
    }
    const auto ca = correctness(member_labels[0], test.labels);
    const auto cb = correctness(member_labels[1], test.labels);
    const auto [acc_a, acc_b] =
        paired_bootstrap(ca, cb, cfg.bootstrap_iterations, cfg.bootstrap_seed());
    const TTestResult tt = paired_t_test(acc_a, acc_b);
    report["members"] = members;
    report["member_comparison"] = {
        {"paired_t_statistic", finite_or_marker(tt.t_statistic)},
        {"p_value", tt.p_value},
        {"cohens_d", optional_json(cohens_d(acc_a, acc_b))},
        {"cohens_kappa", optional_json(cohens_kappa(member_labels[0], member_labels[1]))}};
  }
  return report;
}

void print_report_table(std::ostream& os, const json& report) {
  auto val = [](const json& v) -> std::string {
    if (v.is_null()) return "undefined";
    if (v.is_string()) return v.get<std::string>();
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v.get<double>();
    return s.str();
  };
  const json& m = report.at("metrics");
  const json& c = m.at("confusion");
  os << "model: " << report.at("model_type").get<std::string>()
     << "   test samples: " << report.at("n_test") << '\n'
     << "  confusion   tp=" << c.at("tp") << " fp=" << c.at("fp") << " tn=" << c.at("tn")
     << " fn=" << c.at("fn") << '\n';
  for (const char* key : {"accuracy", "precision", "recall", "f1", "fpr", "fnr"}) {
    os << "  " << std::left << std::setw(12) << key << std::right << std::setw(10)
       << val(m.at(key)) << '\n';
  }
  const json& b = report.at("bootstrap");
  os << "  " << std::left << std::setw(12) << "ci95" << std::right << std::setw(10)
     << val(b.at("ci_low")) << " .. " << val(b.at("ci_high")) << '\n'
     << "  " << std::left << std::setw(12) << "boot_cv" << std::right << std::setw(10)
     << val(b.at("coeff_variation")) << '\n';
  if (report.contains("member_comparison")) {
    const json& mc = report["member_comparison"];
    os << "  vqc vs qsvm: t=" << val(mc.at("paired_t_statistic"))
       << " p=" << val(mc.at("p_value")) << " d=" << val(mc.at("cohens_d"))
       << " kappa=" << val(mc.at("cohens_kappa")) << '\n';
  }
}

DirectoryLock::DirectoryLock(const std::filesystem::path& dir) : path_(dir / ".qmc.lock") {
  const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    throw Error(ErrorKind::Io, "cannot lock " + dir.string() + " (" + std::strerror(errno) +
                                   "); another run may be writing there");
  }
  ::close(fd);
}

DirectoryLock::~DirectoryLock() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

ExperimentResult run_experiment(const PipelineConfig& cfg, const std::filesystem::path& data,
                                const std::filesystem::path& out_dir) {
  stage("config", [&] {
    cfg.validate();
    return 0;
  });
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());
  DirectoryLock lock(out_dir);

  CsvOptions csv;
  csv.label_column = cfg.label_column;
  csv.positive_label = cfg.positive_label;
  csv.ignore_columns = cfg.ignore_columns;
  const Dataset raw = stage("load", [&] { return load_csv(data, csv); });

  const PreprocessFit pre = stage("preprocess", [&] { return fit_preprocess(raw, cfg.preprocess); });
  save_model(out_dir / "preprocess_model.json", pre.model);
  write_csv(out_dir / "processed.csv", pre.data);

  const auto [train, test] = stage("split", [&] {
    return train_test_split(pre.data, cfg.test_fraction, cfg.split_seed());
  });

  const TrainOutcome trained = stage("train", [&] { return train_model(train, cfg, cfg.model); });
  save_model(out_dir / "model.json", trained.model);

  const auto preds = stage("predict", [&] { return predict_all(trained.model, test); });
  write_predictions_csv(out_dir / "predictions.csv", preds);

  ExperimentResult result;
  result.out_dir = out_dir;
  result.report = stage("evaluate", [&] {
    json r = evaluation_report(trained.model, test, preds, cfg);
    r["n_train"] = train.size();
    r["training"] = trained.info;
    r["preprocess"] = {{"removed_rows", pre.model.removed_rows.size()},
                       {"features_in", pre.model.input_features.size()},
                       {"features_out", pre.model.output_features.size()}};
    return r;
  });
  write_json(out_dir / "report.json", result.report);
  write_json(out_dir / "config.json", cfg.to_json());
  return result;
}

}  // namespace qmc
