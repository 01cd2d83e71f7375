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


// The pwreg subcommands as library functions. Each returns a process exit
// code and writes its primary output (report, CSV, metrics) to `out`, or to a
// file when a path is configured.

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pwreg/error.hpp"

namespace pwreg {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitSolverLimit = 3,
  kExitIo = 4,
};

/// kIo and kParse map to kExitIo, everything else to kExitConfig.
int ExitCodeFor(ErrorKind kind);

struct FitOptions {
  std::string data_path;
  std::string model_out;   // optional
  std::string report_out;  // optional; the report always goes to `out`
  int p1 = 1;
  int p2 = 0;
  std::string big_m = "auto";  // "auto" or a positive number
  std::string g = "affine";
  std::string h = "affine";
  bool symmetry_breaking = true;
  // Precluster with k-means++ into this many clusters (0: use the labels of
  // the data file, if any).
  int clusters = 0;
  bool ignore_labels = false;
  std::uint64_t seed = 0;
  double ridge = 1e-9;
  double rel_gap = 1e-6;
  double abs_gap = 1e-9;
  std::int64_t node_limit = 1000000;
  double time_limit = 0.0;  // seconds, 0 for none
  int workers = 1;
  int max_degree = 3;
  bool verbose = false;  // branch-and-bound event log on `log`
};

struct PredictOptions {
  std::string model_path;
  std::string input_path;
  std::string output_path;  // optional
};

struct EvaluateOptions {
  std::string model_path;
  std::string data_path;
  std::string output_path;  // optional
};

struct GenDataOptions {
  std::string generator = "abs";
  int n = 1;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> grid;
  int samples = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  int p1 = 2;
  int p2 = 2;
  std::optional<std::uint64_t> model_seed;
  std::string model_path;  // generator "model"
  std::string output_path;  // optional
};

struct ClusterOptions {
  std::string data_path;
  int k = 2;
  std::uint64_t seed = 0;
  int restarts = 10;
  bool standardize = true;
  std::string output_path;  // optional
};

struct ExportOptions {
  std::string model_path;
  std::vector<double> lower;  // one value, or n
  std::vector<double> upper;
  std::string big_m = "auto";
  std::string output_path;
};

nlohmann::json FitOptionsToJson(const FitOptions& o);

// Errors propagate as pwreg::Error; RunCommand below converts them.
int Fit(const FitOptions& o, std::ostream& out, std::ostream& log);
int Predict(const PredictOptions& o, std::ostream& out);
int Evaluate(const EvaluateOptions& o, std::ostream& out);
int GenData(const GenDataOptions& o, std::ostream& out);
int Cluster(const ClusterOptions& o, std::ostream& out);
int ExportMip(const ExportOptions& o, std::ostream& out);

/// Runs `body`, printing any pwreg::Error to `err` and returning its exit code.
template <typename F>
int RunCommand(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  }
}

}  // namespace pwreg
