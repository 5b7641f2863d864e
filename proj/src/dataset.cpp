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

#include "qmc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qmc/error.hpp"

namespace qmc {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

void Dataset::validate() const {
  if (features.rows() != labels.size()) {
    throw Error(ErrorKind::Shape, "feature rows and labels differ in length");
  }
  if (!labels.empty() && features.cols() != feature_names.size()) {
    throw Error(ErrorKind::Shape, "feature columns and names differ in length");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) {
      throw Error(ErrorKind::InvalidInput, "label at row " + std::to_string(i) +
                                               " is not binary");
    }
  }
  for (double v : features.data()) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "non-finite feature value");
  }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.feature_names = feature_names;
  out.features = features.select_rows(rows);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) out.labels.push_back(labels.at(r));
  return out;
}

Dataset Dataset::select_features(std::span<const std::size_t> cols) const {
  Dataset out;
  for (std::size_t c : cols) out.feature_names.push_back(feature_names.at(c));
  out.features = features.select_cols(cols);
  out.labels = labels;
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorKind::Ingestion, path.string() + ": empty file");

  const auto label_it = std::find(header.begin(), header.end(), options.label_column);
  if (label_it == header.end() && !options.allow_missing_label) {
    throw Error(ErrorKind::Ingestion, path.string() + ": missing label column '" +
                                          options.label_column + "'");
  }
  const bool has_label = label_it != header.end();
  const std::size_t label_idx =
      has_label ? static_cast<std::size_t>(label_it - header.begin()) : header.size();

  Dataset data;
  std::vector<std::size_t> feature_idx;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c == label_idx) continue;
    if (std::find(options.ignore_columns.begin(), options.ignore_columns.end(), header[c]) !=
        options.ignore_columns.end()) {
      continue;
    }
    feature_idx.push_back(c);
    data.feature_names.push_back(header[c]);
  }
  if (feature_idx.empty()) {
    throw Error(ErrorKind::Ingestion, path.string() + ": no feature columns");
  }
  data.features = Matrix(0, feature_idx.size());

  std::vector<double> values(feature_idx.size());
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorKind::Ingestion,
                  path.string() + ": row " + std::to_string(row) + " (line " +
                      std::to_string(line_no) + ") has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(header.size()));
    }
    for (std::size_t j = 0; j < feature_idx.size(); ++j) {
      const std::string& cell = fields[feature_idx[j]];
      if (!parse_double(cell, values[j])) {
        throw Error(ErrorKind::Ingestion,
                    path.string() + ": row " + std::to_string(row) + " (line " +
                        std::to_string(line_no) + "), column '" + header[feature_idx[j]] +
                        "': cannot parse '" + cell + "' as a finite number");
      }
    }
    data.features.append_row(values);
    data.labels.push_back(has_label && fields[label_idx] == options.positive_label ? 1 : 0);
  }
  if (data.labels.empty()) {
    throw Error(ErrorKind::DegenerateInput, path.string() + ": no data rows");
  }
  return data;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw Error(ErrorKind::InvalidInput, "unformattable number");
  return std::string(buf, ptr);
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  for (const auto& name : data.feature_names) out << name << ',';
  out << "label\n";
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (double v : data.row(r)) out << format_double(v) << ',';
    out << data.labels[r] << '\n';
  }
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace qmc
