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

// qmc: command-line front end for preprocessing, training, prediction,
// attribution, evaluation, kernel inspection and full experiment runs.
//
// Exit codes: 0 success, 1 usage/config, 2 data, 3 numerical/convergence.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmc/dataset.hpp"
#include "qmc/ensemble.hpp"
#include "qmc/error.hpp"
#include "qmc/evalstats.hpp"
#include "qmc/explain.hpp"
#include "qmc/linalg.hpp"
#include "qmc/model_io.hpp"
#include "qmc/pipeline.hpp"
#include "qmc/preprocess.hpp"
#include "qmc/qkernel.hpp"
#include "qmc/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::string data;
  std::string model;
  std::string preprocess_model;
};

void add_common(CLI::App* cmd, Common& c, bool needs_data, bool needs_model) {
  cmd->add_option("--config", c.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "override the configuration seed");
  cmd->add_option("--out-dir", c.out_dir, "directory for output artifacts");
  auto* data = cmd->add_option("--data", c.data, "input CSV");
  if (needs_data) data->required();
  if (needs_model) {
    cmd->add_option("--model", c.model, "model JSON")->required()->check(CLI::ExistingFile);
  }
}

qmc::PipelineConfig load_config(const Common& c) {
  qmc::PipelineConfig cfg;
  if (!c.config.empty()) cfg = qmc::PipelineConfig::load(c.config);
  if (c.seed) {
    cfg.seed = *c.seed;
    cfg.train.seed = *c.seed;
  }
  cfg.validate();
  return cfg;
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw qmc::Error(qmc::ErrorKind::Io, "cannot create " + dir + ": " + ec.message());
  return fs::path(dir);
}

qmc::CsvOptions raw_options(const qmc::PipelineConfig& cfg) {
  qmc::CsvOptions o;
  o.label_column = cfg.label_column;
  o.positive_label = cfg.positive_label;
  o.ignore_columns = cfg.ignore_columns;
  return o;
}

// Model inputs: a processed CSV, or raw data passed through --preprocess-model.
qmc::Dataset load_inputs(const Common& c, const qmc::PipelineConfig& cfg, bool need_labels) {
  qmc::CsvOptions o = c.preprocess_model.empty() ? qmc::processed_csv_options() : raw_options(cfg);
  o.allow_missing_label = !need_labels;
  qmc::Dataset data = qmc::load_csv(c.data, o);
  if (!c.preprocess_model.empty()) data = qmc::load_preprocess(c.preprocess_model).apply(data);
  return data;
}

int cmd_preprocess(const Common& c) {
  const auto cfg = load_config(c);
  const auto raw = qmc::load_csv(c.data, raw_options(cfg));
  const auto fit = qmc::fit_preprocess(raw, cfg.preprocess);
  const fs::path dir = ensure_dir(c.out_dir);
  qmc::save_model(dir / "preprocess_model.json", fit.model);
  qmc::write_csv(dir / "processed.csv", fit.data);
  std::cout << "preprocessed " << raw.size() << " x " << raw.dim() << " -> " << fit.data.size()
            << " x " << fit.data.dim() << " (" << fit.model.removed_rows.size()
            << " outlier rows removed)\n";
  return 0;
}

int cmd_train(const Common& c, const std::string& kind) {
  const auto cfg = load_config(c);
  const auto data = qmc::load_csv(c.data, qmc::processed_csv_options());
  const auto outcome = qmc::train_model(data, cfg, qmc::model_choice_from_string(kind));
  const fs::path dir = ensure_dir(c.out_dir);
  qmc::save_model(dir / "model.json", outcome.model);
  qmc::write_json(dir / "training.json", outcome.info);
  std::cout << "trained " << kind << " on " << data.size() << " samples; training accuracy "
            << qmc::evaluation_report(outcome.model, data, qmc::predict_all(outcome.model, data),
                                      cfg)["metrics"]["accuracy"].get<double>()
            << "\nwrote " << (dir / "model.json").string() << '\n';
  return 0;
}

int cmd_predict(const Common& c) {
  const auto cfg = load_config(c);
  const auto model = qmc::load_model(c.model);
  const auto data = load_inputs(c, cfg, false);
  const auto preds = qmc::predict_all(model, data);
  const fs::path dir = ensure_dir(c.out_dir);
  qmc::write_predictions_csv(dir / "predictions.csv", preds);
  std::size_t positives = 0;
  for (const auto& p : preds) positives += static_cast<std::size_t>(p.label);
  std::cout << preds.size() << " predictions (" << positives << " malicious) -> "
            << (dir / "predictions.csv").string() << '\n';
  return 0;
}

int cmd_explain(const Common& c, const std::string& method_name, std::size_t row,
                std::size_t top_k) {
  const auto cfg = load_config(c);
  const auto model = qmc::load_model(c.model);
  const auto data = qmc::align_features(load_inputs(c, cfg, false), qmc::feature_names(model));
  if (row >= data.size()) {
    throw qmc::Error(qmc::ErrorKind::Index, "row " + std::to_string(row) + " outside [0, " +
                                                std::to_string(data.size()) + ")");
  }
  const auto method = qmc::attribution_method_from_string(method_name);
  qmc::AttributionReport report;
  if (method == qmc::AttributionMethod::Grad) {
    const auto* vqc = std::get_if<qmc::VqcModel>(&model);
    if (vqc == nullptr) {
      throw qmc::Error(qmc::ErrorKind::ModelType, "grad attribution needs a vqc model");
    }
    report = qmc::grad_attribution(*vqc, data.row(row));
  } else {
    report = qmc::score_attribution(
        [&](std::span<const double> x) { return qmc::predict(model, x).probability_malicious; },
        data.row(row));
  }
  const fs::path dir = ensure_dir(c.out_dir);
  qmc::write_attribution_csv(dir / "attribution.csv", report, data.feature_names);
  qmc::print_attribution_summary(std::cout, report, data.feature_names, top_k);
  return 0;
}

int cmd_evaluate(const Common& c) {
  const auto cfg = load_config(c);
  const auto model = qmc::load_model(c.model);
  const auto data = load_inputs(c, cfg, true);
  const auto preds = qmc::predict_all(model, data);
  const json report = qmc::evaluation_report(model, data, preds, cfg);
  const fs::path dir = ensure_dir(c.out_dir);
  qmc::write_json(dir / "report.json", report);
  qmc::print_report_table(std::cout, report);
  return 0;
}

int cmd_kernel(const Common& c) {
  const auto cfg = load_config(c);
  const auto data = load_inputs(c, cfg, false);
  const qmc::Matrix k = qmc::kernel_matrix(data, cfg.feature_map());
  const auto diag = qmc::diagnose_kernel(k);
  const auto eig = qmc::jacobi_eigen(k);
  const fs::path dir = ensure_dir(c.out_dir);
  qmc::write_kernel_csv(dir / "kernel.csv", k);
  std::cout << "gram " << k.rows() << " x " << k.cols() << "\n  max asymmetry   "
            << diag.max_asymmetry << "\n  max |diag - 1|  " << diag.max_diagonal_error
            << "\n  entry range     [" << diag.min_entry << ", " << diag.max_entry
            << "]\n  min eigenvalue  " << eig.values.back() << '\n';
  qmc::validate_kernel(k);
  return 0;
}

int cmd_run(const Common& c) {
  const auto cfg = load_config(c);
  const auto result = qmc::run_experiment(cfg, c.data, c.out_dir);
  qmc::print_report_table(std::cout, result.report);
  return 0;
}

int cmd_synth(const Common& c, const std::string& out, std::size_t samples,
              std::size_t raw_features, double margin) {
  const auto cfg = load_config(c);
  qmc::TeacherStudentSpec spec;
  spec.samples = samples;
  spec.raw_features = raw_features;
  spec.n_qubits = cfg.n_qubits;
  spec.n_layers = cfg.n_layers;
  spec.repetitions = cfg.repetitions;
  spec.seed = cfg.seed;
  spec.margin = margin;
  const auto data = qmc::teacher_student_raw(spec, cfg.preprocess);
  qmc::write_csv(out, data);
  std::cout << "wrote " << data.size() << " rows to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmc: quantum malware classification toolkit"};
  app.require_subcommand(1);

  Common c;
  std::string model_kind;
  std::string method = "score";
  std::size_t row = 0;
  std::size_t top_k = 5;
  std::string synth_out;
  std::size_t synth_samples = 200;
  std::size_t synth_features = 6;
  double synth_margin = 0.1;

  auto* pre = app.add_subcommand("preprocess", "fit standardize/outlier/prune/PCA on raw data");
  add_common(pre, c, true, false);

  auto* train = app.add_subcommand("train", "train a vqc, qsvm or ensemble model");
  train->add_option("kind", model_kind, "vqc | qsvm | ensemble")
      ->required()
      ->check(CLI::IsMember({"vqc", "qsvm", "ensemble"}));
  add_common(train, c, true, false);

  auto* predict = app.add_subcommand("predict", "write predictions.csv for a dataset");
  add_common(predict, c, true, true);
  predict->add_option("--preprocess-model", c.preprocess_model, "apply this to raw --data first");

  auto* explain = app.add_subcommand("explain", "per-feature attribution for one sample");
  add_common(explain, c, true, true);
  explain->add_option("--preprocess-model", c.preprocess_model, "apply this to raw --data first");
  explain->add_option("--method", method, "grad | score")
      ->check(CLI::IsMember({"grad", "score"}));
  explain->add_option("--row", row, "sample index to explain");
  explain->add_option("--top", top_k, "features to print");

  auto* evaluate = app.add_subcommand("evaluate", "metrics and bootstrap CI on labelled data");
  add_common(evaluate, c, true, true);
  evaluate->add_option("--preprocess-model", c.preprocess_model, "apply this to raw --data first");

  auto* kernel = app.add_subcommand("kernel", "quantum Gram matrix and its diagnostics");
  add_common(kernel, c, true, false);
  kernel->add_option("--preprocess-model", c.preprocess_model, "apply this to raw --data first");

  auto* run = app.add_subcommand("run", "preprocess, split, train, predict and evaluate");
  add_common(run, c, true, false);

  auto* synth = app.add_subcommand("synth", "write a teacher-student raw dataset");
  add_common(synth, c, false, false);
  synth->add_option("--out", synth_out, "CSV path")->required();
  synth->add_option("--samples", synth_samples, "rows before margin filtering");
  synth->add_option("--features", synth_features, "raw feature columns");
  synth->add_option("--margin", synth_margin, "drop rows with |p - 0.5| below this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (pre->parsed()) return cmd_preprocess(c);
    if (train->parsed()) return cmd_train(c, model_kind);
    if (predict->parsed()) return cmd_predict(c);
    if (explain->parsed()) return cmd_explain(c, method, row, top_k);
    if (evaluate->parsed()) return cmd_evaluate(c);
    if (kernel->parsed()) return cmd_kernel(c);
    if (run->parsed()) return cmd_run(c);
    if (synth->parsed()) return cmd_synth(c, synth_out, synth_samples, synth_features, synth_margin);
  } catch (const qmc::Error& e) {
    std::cerr << "qmc: " << qmc::to_string(e.kind()) << ": " << e.what() << '\n';
    return qmc::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "qmc: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
