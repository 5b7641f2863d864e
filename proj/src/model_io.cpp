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

#include "qmc/model_io.hpp"

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "qmc/error.hpp"

namespace qmc {

using nlohmann::json;

namespace {

json header(std::string_view type) {
  return json{{"format_version", kModelFormatVersion}, {"model_type", type}};
}

void expect_type(const json& j, std::string_view type) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "model file is not a JSON object");
  if (!j.contains("format_version")) throw Error(ErrorKind::Format, "missing format_version");
  const json& v = j["format_version"];
  const bool known = (v.is_number_integer() && v.get<int>() == kModelFormatVersion) ||
                     (v.is_string() && v.get<std::string>() == std::to_string(kModelFormatVersion));
  if (!known) {
    throw Error(ErrorKind::Format, "unsupported model format version " + v.dump() +
                                       " (this build reads version " +
                                       std::to_string(kModelFormatVersion) + ")");
  }
  const std::string actual = j.value("model_type", std::string{});
  if (actual != type) {
    throw Error(ErrorKind::ModelType, "expected a '" + std::string(type) + "' model, file holds '" +
                                          actual + "'");
  }
}

template <typename F>
auto guarded(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string(what) + ": " + e.what());
  }
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", rows}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const json& data = j.at("data");
  if (data.size() != m.rows()) throw Error(ErrorKind::Parse, "matrix row count mismatch");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = data.at(r).get<std::vector<double>>();
    if (row.size() != m.cols()) throw Error(ErrorKind::Parse, "matrix column count mismatch");
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

json fmap_to_json(const FeatureMapSpec& s) {
  return json{{"n_qubits", s.n_qubits},
              {"repetitions", s.repetitions},
              {"encoding", to_string(s.encoding)},
              {"entangling", s.entangling}};
}

FeatureMapSpec fmap_from_json(const json& j) {
  FeatureMapSpec s;
  s.n_qubits = j.at("n_qubits").get<std::size_t>();
  s.repetitions = j.at("repetitions").get<std::size_t>();
  s.encoding = encoding_from_string(j.at("encoding").get<std::string>());
  s.entangling = j.value("entangling", true);
  return s;
}

json train_to_json(const TrainConfig& c) {
  return json{{"epochs", c.epochs},       {"learning_rate", c.learning_rate},
              {"batch_size", c.batch_size}, {"optimizer", to_string(c.optimizer)},
              {"beta1", c.beta1},         {"beta2", c.beta2},
              {"epsilon", c.epsilon},     {"seed", c.seed}};
}

TrainConfig train_from_json(const json& j) {
  TrainConfig c;
  c.epochs = j.at("epochs").get<std::size_t>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.optimizer = optimizer_from_string(j.at("optimizer").get<std::string>());
  c.beta1 = j.at("beta1").get<double>();
  c.beta2 = j.at("beta2").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

json vqc_body(const VqcModel& m) {
  json j{{"n_qubits", m.n_qubits},
         {"n_layers", m.n_layers},
         {"params", m.params},
         {"feature_map", fmap_to_json(m.feature_map)},
         {"readout", {{"observable", "pauli_z"}, {"qubit", m.readout.qubit}}},
         {"entangling", m.entangling},
         {"seed", m.rng_seed},
         {"feature_names", m.feature_names}};
  j["optimizer"] = m.training ? train_to_json(*m.training) : json(nullptr);
  return j;
}

VqcModel vqc_body_from_json(const json& j) {
  VqcModel m;
  m.n_qubits = j.at("n_qubits").get<std::size_t>();
  m.n_layers = j.at("n_layers").get<std::size_t>();
  m.params = j.at("params").get<std::vector<double>>();
  m.feature_map = fmap_from_json(j.at("feature_map"));
  m.readout.qubit = j.at("readout").at("qubit").get<std::size_t>();
  m.entangling = j.value("entangling", true);
  m.rng_seed = j.value("seed", std::uint64_t{0});
  m.feature_names = j.value("feature_names", std::vector<std::string>{});
  if (j.contains("optimizer") && !j["optimizer"].is_null()) {
    m.training = train_from_json(j["optimizer"]);
  }
  m.validate();
  return m;
}

json svm_body(const SvmModel& m) {
  return json{{"dual_coeffs", m.dual_coeffs},
              {"bias", m.bias},
              {"support_indices", m.support_indices},
              {"support_vectors", matrix_to_json(m.support_vectors)},
              {"feature_map", fmap_to_json(m.feature_map)},
              {"C", m.params.C},
              {"tolerance", m.params.tolerance},
              {"max_passes", m.params.max_passes},
              {"converged", m.converged},
              {"feature_names", m.feature_names}};
}

SvmModel svm_body_from_json(const json& j) {
  SvmModel m;
  m.dual_coeffs = j.at("dual_coeffs").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.support_indices = j.at("support_indices").get<std::vector<std::size_t>>();
  m.support_vectors = matrix_from_json(j.at("support_vectors"));
  m.feature_map = fmap_from_json(j.at("feature_map"));
  m.params.C = j.at("C").get<double>();
  m.params.tolerance = j.at("tolerance").get<double>();
  m.params.max_passes = j.at("max_passes").get<std::size_t>();
  m.converged = j.value("converged", true);
  m.feature_names = j.value("feature_names", std::vector<std::string>{});
  if (m.dual_coeffs.size() != m.support_vectors.rows()) {
    throw Error(ErrorKind::Parse, "support vector count differs from coefficient count");
  }
  m.feature_map.validate();
  return m;
}

}  // namespace

json to_json(const VqcModel& model) {
  json j = header("vqc");
  j.update(vqc_body(model));
  return j;
}

json to_json(const SvmModel& model) {
  json j = header("qsvm");
  j.update(svm_body(model));
  return j;
}

json to_json(const EnsembleModel& model) {
  json j = header("ensemble");
  json members = json::array();
  for (const auto& m : model.members) {
    json entry{{"weight", m.weight}};
    if (const auto* v = std::get_if<VqcModel>(&m.model)) {
      entry["model"] = to_json(*v);
    } else {
      entry["model"] = to_json(std::get<SvmModel>(m.model));
    }
    members.push_back(std::move(entry));
  }
  j["members"] = std::move(members);
  return j;
}

json to_json(const PreprocessModel& model) {
  json j = header("preprocess");
  j["input_features"] = model.input_features;
  j["columns"] = model.columns;
  j["means"] = model.means;
  j["std_devs"] = model.std_devs;
  j["std_convention"] = "sample (n-1)";
  j["output_features"] = model.output_features;
  j["removed_rows"] = model.removed_rows;
  if (model.pca) {
    j["pca"] = json{{"mean", model.pca->mean},
                    {"basis", matrix_to_json(model.pca->basis)},
                    {"explained_variance", model.pca->explained_variance},
                    {"eigenvalues", model.pca->all_eigenvalues}};
  } else {
    j["pca"] = nullptr;
  }
  return j;
}

json to_json(const AnyModel& model) {
  return std::visit([](const auto& m) { return to_json(m); }, model);
}

VqcModel vqc_from_json(const json& j) {
  expect_type(j, "vqc");
  return guarded("vqc model", [&] { return vqc_body_from_json(j); });
}

SvmModel svm_from_json(const json& j) {
  expect_type(j, "qsvm");
  return guarded("qsvm model", [&] { return svm_body_from_json(j); });
}

EnsembleModel ensemble_from_json(const json& j) {
  expect_type(j, "ensemble");
  return guarded("ensemble model", [&] {
    EnsembleModel e;
    for (const json& entry : j.at("members")) {
      const json& mj = entry.at("model");
      const std::string type = mj.value("model_type", std::string{});
      EnsembleMember member;
      member.weight = entry.at("weight").get<double>();
      if (type == "vqc") member.model = vqc_from_json(mj);
      else if (type == "qsvm") member.model = svm_from_json(mj);
      else throw Error(ErrorKind::ModelType, "unsupported ensemble member '" + type + "'");
      e.members.push_back(std::move(member));
    }
    e.validate();
    return e;
  });
}

PreprocessModel preprocess_from_json(const json& j) {
  expect_type(j, "preprocess");
  return guarded("preprocess model", [&] {
    PreprocessModel m;
    m.input_features = j.at("input_features").get<std::vector<std::string>>();
    m.columns = j.at("columns").get<std::vector<std::size_t>>();
    m.means = j.at("means").get<std::vector<double>>();
    m.std_devs = j.at("std_devs").get<std::vector<double>>();
    m.output_features = j.at("output_features").get<std::vector<std::string>>();
    m.removed_rows = j.value("removed_rows", std::vector<std::size_t>{});
    if (!j.at("pca").is_null()) {
      const json& p = j["pca"];
      PcaModel pca;
      pca.mean = p.at("mean").get<std::vector<double>>();
      pca.basis = matrix_from_json(p.at("basis"));
      pca.explained_variance = p.at("explained_variance").get<std::vector<double>>();
      pca.all_eigenvalues = p.value("eigenvalues", std::vector<double>{});
      m.pca = std::move(pca);
    }
    if (m.columns.size() != m.means.size() || m.columns.size() != m.std_devs.size()) {
      throw Error(ErrorKind::Parse, "preprocess column statistics are inconsistent");
    }
    return m;
  });
}

AnyModel any_model_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Parse, "model file is not a JSON object");
  const std::string type = j.value("model_type", std::string{});
  if (type == "vqc") return vqc_from_json(j);
  if (type == "qsvm") return svm_from_json(j);
  if (type == "ensemble") return ensemble_from_json(j);
  throw Error(ErrorKind::ModelType, "'" + type + "' is not a classifier model type");
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, path.string() + ": parse error at byte " +
                                      std::to_string(e.byte) + ": " + e.what());
  }
}

VqcModel load_vqc(const std::filesystem::path& path) { return vqc_from_json(read_json(path)); }
SvmModel load_svm(const std::filesystem::path& path) { return svm_from_json(read_json(path)); }
EnsembleModel load_ensemble(const std::filesystem::path& path) {
  return ensemble_from_json(read_json(path));
}
PreprocessModel load_preprocess(const std::filesystem::path& path) {
  return preprocess_from_json(read_json(path));
}
AnyModel load_model(const std::filesystem::path& path) {
  return any_model_from_json(read_json(path));
}

}  // namespace qmc
