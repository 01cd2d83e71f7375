// Copyright 2026 The pwreg Authors.
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


#include "pwreg/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pwreg/error.hpp"

namespace pwreg {
namespace {

using nlohmann::json;

std::string Trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(Trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double ParseNumber(const std::string& field, int line) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = first + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  Require(ec == std::errc() && ptr == last && first != last, ErrorKind::kParse,
          "line " + std::to_string(line) + ": '" + field + "' is not a number");
  Require(std::isfinite(v), ErrorKind::kParse,
          "line " + std::to_string(line) + ": non-finite value '" + field + "'");
  return v;
}

std::string Number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json Matrix(const RowMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RowMatrix MatrixFromJson(const json& j, const char* what, int cols) {
  Require(j.is_array(), ErrorKind::kParse, std::string(what) + " must be an array of rows");
  RowMatrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& row = j[i];
    Require(row.is_array(), ErrorKind::kParse, std::string(what) + " rows must be arrays");
    Require(static_cast<int>(row.size()) == cols, ErrorKind::kInvalidDimension,
            std::string(what) + " row " + std::to_string(i) + " has " +
                std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
    for (int c = 0; c < cols; ++c) {
      Require(row[c].is_number(), ErrorKind::kParse, std::string(what) + " entries must be numbers");
      m(static_cast<Eigen::Index>(i), c) = row[c].get<double>();
    }
  }
  return m;
}

}  // namespace

CsvTable ParseCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CsvTable table;
  int line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    if (table.header.empty()) {
      table.header = SplitFields(line);
      for (const auto& h : table.header) {
        Require(!h.empty(), ErrorKind::kParse, "empty column name in CSV header");
      }
      continue;
    }
    const auto fields = SplitFields(line);
    Require(fields.size() == table.header.size(), ErrorKind::kParse,
            "line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                " fields, header has " + std::to_string(table.header.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(ParseNumber(f, line_no));
    rows.push_back(std::move(row));
  }
  Require(!table.header.empty(), ErrorKind::kParse, "CSV has no header");
  table.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(table.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return table;
}

CsvTable ReadCsv(const std::filesystem::path& path) { return ParseCsv(ReadTextFile(path)); }

std::string FormatCsv(const CsvTable& table) {
  std::string out;
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    out += (j ? "," : "") + table.header[j];
  }
  out += '\n';
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.values.cols(); ++j) {
      if (j) out += ',';
      out += Number(table.values(i, j));
    }
    out += '\n';
  }
  return out;
}

void WriteCsv(const std::filesystem::path& path, const CsvTable& table) {
  WriteTextFile(path, FormatCsv(table));
}

int InputColumns(const CsvTable& table) {
  int n = 0;
  while (n < static_cast<int>(table.header.size()) &&
         table.header[n] == "x" + std::to_string(n + 1)) {
    ++n;
  }
  return n;
}

Dataset TableToDataset(const CsvTable& table) {
  const int n = InputColumns(table);
  const int cols = static_cast<int>(table.header.size());
  Require(n >= 1 && cols >= n + 1 && table.header[n] == "y" &&
              (cols == n + 1 || (cols == n + 2 && table.header[n + 1] == "cluster")),
          ErrorKind::kParse, "CSV header must be x1,...,xn,y[,cluster]");
  RowMatrix x = table.values.leftCols(n);
  Eigen::VectorXd y = table.values.col(n);
  std::optional<std::vector<int>> labels;
  if (cols == n + 2) {
    labels.emplace();
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
      const double v = table.values(i, n + 1);
      Require(v == std::floor(v) && v >= 0.0 && v < 1e9, ErrorKind::kParse,
              "cluster labels must be non-negative integers");
      labels->push_back(static_cast<int>(v));
    }
  }
  return Dataset(std::move(x), std::move(y), std::move(labels));
}

CsvTable DatasetToTable(const Dataset& data) {
  CsvTable t;
  const int n = data.dimension();
  for (int j = 0; j < n; ++j) t.header.push_back("x" + std::to_string(j + 1));
  t.header.push_back("y");
  if (data.has_labels()) t.header.push_back("cluster");
  t.values.resize(data.size(), static_cast<Eigen::Index>(t.header.size()));
  if (data.size() > 0) {
    t.values.leftCols(n) = data.x();
    t.values.col(n) = data.y();
    if (data.has_labels()) {
      for (int i = 0; i < data.size(); ++i) t.values(i, n + 1) = data.labels()[i];
    }
  }
  return t;
}

Dataset ReadDataset(const std::filesystem::path& path) { return TableToDataset(ReadCsv(path)); }

void WriteDataset(const std::filesystem::path& path, const Dataset& data) {
  WriteCsv(path, DatasetToTable(data));
}

json FeatureMapToJson(const FeatureMap& map) {
  json out = json::array();
  for (const auto& f : map.basis()) {
    if (std::holds_alternative<Constant>(f)) {
      out.push_back({{"type", "constant"}});
    } else if (const auto* m = std::get_if<Monomial>(&f)) {
      out.push_back({{"type", "monomial"}, {"exponents", m->exponents}});
    } else {
      const auto& s = std::get<Sinusoid>(f);
      out.push_back({{"type", "sin"}, {"frequency", s.frequency}, {"index", s.index}});
    }
  }
  return out;
}

FeatureMap FeatureMapFromJson(const json& j, int n) {
  Require(j.is_array(), ErrorKind::kParse, "feature map must be an array of basis records");
  std::vector<BasisFunction> basis;
  for (const json& rec : j) {
    Require(rec.is_object() && rec.contains("type") && rec["type"].is_string(),
            ErrorKind::kParse, "basis record needs a string 'type'");
    const std::string type = rec["type"].get<std::string>();
    if (type == "constant") {
      basis.emplace_back(Constant{});
    } else if (type == "monomial") {
      Require(rec.contains("exponents") && rec["exponents"].is_array(), ErrorKind::kParse,
              "monomial record needs 'exponents'");
      Monomial m;
      for (const json& e : rec["exponents"]) {
        Require(e.is_number_integer(), ErrorKind::kParse, "monomial exponents must be integers");
        m.exponents.push_back(e.get<int>());
      }
      basis.emplace_back(std::move(m));
    } else if (type == "sin") {
      Require(rec.contains("frequency") && rec["frequency"].is_number() && rec.contains("index") &&
                  rec["index"].is_number_integer(),
              ErrorKind::kParse, "sin record needs 'frequency' and integer 'index'");
      basis.emplace_back(Sinusoid{rec["frequency"].get<double>(), rec["index"].get<int>()});
    } else {
      Fail(ErrorKind::kParse, "unknown basis type '" + type + "'");
    }
  }
  return FeatureMap(n, std::move(basis));
}

json ModelToJson(const PiecewiseModel& model) {
  json j;
  j["n"] = model.dimension();
  j["g"] = FeatureMapToJson(model.g());
  j["h"] = model.h() ? FeatureMapToJson(*model.h()) : json(nullptr);
  j["V"] = Matrix(model.v());
  j["W"] = Matrix(model.w());
  return j;
}

PiecewiseModel ModelFromJson(const json& j) {
  Require(j.is_object(), ErrorKind::kParse, "model file must hold a JSON object");
  for (const char* key : {"n", "g", "V"}) {
    Require(j.contains(key), ErrorKind::kParse, std::string("model file lacks '") + key + "'");
  }
  Require(j["n"].is_number_integer(), ErrorKind::kParse, "'n' must be an integer");
  const int n = j["n"].get<int>();
  FeatureMap g = FeatureMapFromJson(j["g"], n);
  std::optional<FeatureMap> h;
  if (j.contains("h") && !j["h"].is_null()) h = FeatureMapFromJson(j["h"], n);
  RowMatrix v = MatrixFromJson(j["V"], "V", g.size());
  RowMatrix w(0, h ? h->size() : 0);
  if (j.contains("W") && !j["W"].is_null()) {
    Require(j["W"].empty() || h.has_value(), ErrorKind::kParse, "W given without h");
    if (!j["W"].empty()) w = MatrixFromJson(j["W"], "W", h->size());
  }
  return PiecewiseModel(std::move(v), std::move(w), std::move(g), std::move(h));
}

PiecewiseModel LoadModel(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    Fail(ErrorKind::kParse, path.string() + ": " + e.what());
  }
  return ModelFromJson(j);
}

void SaveModel(const std::filesystem::path& path, const PiecewiseModel& model) {
  WriteTextFile(path, ModelToJson(model).dump(2) + "\n");
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  Require(static_cast<bool>(file), ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << file.rdbuf();
  Require(!file.bad(), ErrorKind::kIo, "failed reading " + path.string());
  return buf.str();
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  Require(static_cast<bool>(file), ErrorKind::kIo, "cannot open " + path.string() + " for writing");
  file << text;
  file.flush();
  Require(static_cast<bool>(file), ErrorKind::kIo, "failed writing " + path.string());
}

}  // namespace pwreg
