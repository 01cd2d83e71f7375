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


// CSV datasets and JSON model files.
//
// CSV: header x1,...,xn,y[,cluster], '.' decimal separator, values written
// with 17 significant digits. Model JSON:
//   {"n": 1, "g": [{"type": "monomial", "exponents": [1]}, {"type": "constant"}],
//    "h": [...] or null, "V": [[...]], "W": [[...]]}
// with basis records of type constant, monomial or sin (frequency, index).

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwreg/dataset.hpp"
#include "pwreg/model.hpp"

namespace pwreg {

struct CsvTable {
  std::vector<std::string> header;
  RowMatrix values;  // rows x header.size()
};

/// Throws kIo when the file cannot be read and kParse on malformed content
/// (ragged rows, non-numeric or non-finite fields, empty header).
CsvTable ReadCsv(const std::filesystem::path& path);
CsvTable ParseCsv(const std::string& text);
std::string FormatCsv(const CsvTable& table);
void WriteCsv(const std::filesystem::path& path, const CsvTable& table);

/// Columns x1..xn then y, optionally cluster (integer labels). kParse when the
/// header does not follow that schema.
Dataset TableToDataset(const CsvTable& table);
CsvTable DatasetToTable(const Dataset& data);
Dataset ReadDataset(const std::filesystem::path& path);
void WriteDataset(const std::filesystem::path& path, const Dataset& data);

/// Number of leading x1..xk columns of the table.
int InputColumns(const CsvTable& table);

nlohmann::json FeatureMapToJson(const FeatureMap& map);
FeatureMap FeatureMapFromJson(const nlohmann::json& j, int n);
nlohmann::json ModelToJson(const PiecewiseModel& model);
/// kParse on schema violations; shape errors surface as kInvalidDimension.
PiecewiseModel ModelFromJson(const nlohmann::json& j);
PiecewiseModel LoadModel(const std::filesystem::path& path);
void SaveModel(const std::filesystem::path& path, const PiecewiseModel& model);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace pwreg
