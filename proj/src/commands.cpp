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


#include "pwreg/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

#include "pwreg/bnb.hpp"
#include "pwreg/cluster.hpp"
#include "pwreg/embedding.hpp"
#include "pwreg/formulation.hpp"
#include "pwreg/generators.hpp"
#include "pwreg/io.hpp"
#include "pwreg/lp_format.hpp"

namespace pwreg {
namespace {

using nlohmann::json;

std::optional<double> ParseBigM(const std::string& text) {
  if (text == "auto") return std::nullopt;
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  Require(used == text.size() && used > 0 && std::isfinite(v) && v > 0.0,
          ErrorKind::kInvalidConfig, "big-M must be 'auto' or a positive number, got '" + text + "'");
  return v;
}

Eigen::VectorXd ExpandBox(const std::vector<double>& v, int n, const char* what) {
  Require(v.size() == 1 || static_cast<int>(v.size()) == n, ErrorKind::kInvalidConfig,
          std::string(what) + " needs 1 or " + std::to_string(n) + " values");
  if (v.size() == 1) return Eigen::VectorXd::Constant(n, v[0]);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

json Finite(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    WriteTextFile(path, text);
  }
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo:
    case ErrorKind::kParse:
      return kExitIo;
    default:
      return kExitConfig;
  }
}

json FitOptionsToJson(const FitOptions& o) {
  return {{"data", o.data_path},
          {"model_out", o.model_out},
          {"p1", o.p1},
          {"p2", o.p2},
          {"big_m", o.big_m},
          {"g", o.g},
          {"h", o.h},
          {"symmetry_breaking", o.symmetry_breaking},
          {"clusters", o.clusters},
          {"ignore_labels", o.ignore_labels},
          {"seed", o.seed},
          {"ridge", o.ridge},
          {"rel_gap", o.rel_gap},
          {"abs_gap", o.abs_gap},
          {"node_limit", o.node_limit},
          {"time_limit", o.time_limit},
          {"workers", o.workers},
          {"max_degree", o.max_degree}};
}

int Fit(const FitOptions& o, std::ostream& out, std::ostream& log) {
  const auto start = std::chrono::steady_clock::now();
  Require(o.p1 >= 1 && o.p2 >= 0, ErrorKind::kInvalidConfig, "need p1 >= 1 and p2 >= 0");
  Require(o.workers >= 1, ErrorKind::kInvalidConfig, "workers must be >= 1");
  Require(o.clusters >= 0, ErrorKind::kInvalidConfig, "clusters must be >= 0");
  Require(o.time_limit >= 0.0 && o.node_limit >= 1, ErrorKind::kInvalidConfig,
          "limits must be positive");
  const std::optional<double> big_m = ParseBigM(o.big_m);

  Dataset data = ReadDataset(o.data_path);
  Require(!data.empty(), ErrorKind::kEmptyDataset, "dataset has no rows");
  if (o.ignore_labels) data = data.WithoutLabels();
  const int n_points = data.size();
  Require(o.p1 <= n_points && o.p2 <= n_points, ErrorKind::kInvalidConfig,
          "p1 = " + std::to_string(o.p1) + ", p2 = " + std::to_string(o.p2) +
              " exceed N = " + std::to_string(n_points) +
              " data points; segment counts may be assumed not to exceed N without loss of "
              "generality");
  if (o.clusters > 0) {
    const Clustering c = KMeansPlusPlus(data.WithoutLabels(), o.clusters, o.seed);
    data = data.WithLabels(c.labels);
  }
  const FeatureMap g = ParseFeatureSpec(o.g, data.dimension(), o.max_degree);
  const FeatureMap h = ParseFeatureSpec(o.h, data.dimension(), o.max_degree);

  const int units = data.has_labels() ? data.num_clusters() : n_points;
  const bool qp_path = o.p1 == units && o.p2 == units;
  std::string path;
  if (qp_path) {
    path = data.has_labels() ? "qp-clustered" : "qp";
  } else {
    path = data.has_labels() ? "miqp-clustered" : "miqp";
  }

  json report;
  report["path"] = path;
  report["config"] = FitOptionsToJson(o);
  QuadraticProgram program;
  Eigen::VectorXd solution;
  bool solved = false;
  bool limit_hit = false;
  if (qp_path) {
    program = data.has_labels() ? BuildQpClustered(data, g, h, o.ridge) : BuildQpFull(data, g, h, o.ridge);
    const QpSolution sol = SolveQp(program);
    solution = sol.z;
    solved = true;
    limit_hit = sol.status != QpStatus::kOptimal;
    report["objective"] = sol.objective;
    report["status"] = std::string(ToString(sol.status));
    report["gap"] = 0.0;
    report["nodes"] = 0;
    report["binaries"] = 0;
    report["big_m"] = nullptr;
  } else {
    FitConfig cfg;
    cfg.p1 = o.p1;
    cfg.p2 = o.p2;
    cfg.big_m = big_m;
    cfg.symmetry_breaking = o.symmetry_breaking;
    cfg.ridge_epsilon = o.ridge;
    MixedIntegerProgram mip =
        data.has_labels() ? BuildClusteredMiqp(data, g, h, cfg) : BuildMiqp(data, g, h, cfg);
    BnbConfig bc;
    bc.rel_gap = o.rel_gap;
    bc.abs_gap = o.abs_gap;
    bc.node_limit = o.node_limit;
    if (o.time_limit > 0.0) bc.time_limit_seconds = o.time_limit;
    bc.workers = o.workers;
    if (o.verbose) bc.on_node = [&log](const BnbEvent& e) { log << FormatEvent(e) << '\n'; };
    const BnbResult res = SolveMiqp(mip, bc);
    program = mip.base;
    solved = res.has_incumbent;
    solution = res.incumbent.z;
    limit_hit = res.status == BnbStatus::kNodeLimit || res.status == BnbStatus::kTimeLimit;
    report["objective"] = solved ? json(res.incumbent.objective) : json(nullptr);
    report["status"] = std::string(ToString(res.status));
    report["gap"] = Finite(res.gap);
    report["nodes"] = res.nodes_explored;
    report["binaries"] = mip.num_binaries();
    report["big_m"] = program.layout->big_m;
  }

  if (solved) {
    const ExtractedModel em = ExtractModel(program, solution, g, h);
    const FitMetrics m = ComputeFitMetrics(em.model, data.WithoutLabels());
    report["loss"] = em.loss;
    report["mse"] = m.mse;
    report["e_max"] = m.e_max;
    report["big_m_warning"] = em.big_m_warning;
    if (!o.model_out.empty()) SaveModel(o.model_out, em.model);
  } else {
    report["mse"] = nullptr;
    report["e_max"] = nullptr;
    report["big_m_warning"] = nullptr;
  }
  report["wall_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = report.dump(2) + "\n";
  out << text;
  if (!o.report_out.empty()) WriteTextFile(o.report_out, text);
  return limit_hit || !solved ? kExitSolverLimit : kExitOk;
}

int Predict(const PredictOptions& o, std::ostream& out) {
  const PiecewiseModel model = LoadModel(o.model_path);
  CsvTable table = ReadCsv(o.input_path);
  const int n = InputColumns(table);
  Require(n == model.dimension(), ErrorKind::kInvalidDimension,
          "input has " + std::to_string(n) + " x columns, model expects " +
              std::to_string(model.dimension()));
  CsvTable result;
  result.header = table.header;
  result.header.push_back("yhat");
  result.values.resize(table.values.rows(), table.values.cols() + 1);
  result.values.leftCols(table.values.cols()) = table.values;
  for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
    result.values(i, table.values.cols()) =
        model.Evaluate({table.values.row(i).data(), static_cast<std::size_t>(n)});
  }
  Emit(o.output_path, FormatCsv(result), out);
  return kExitOk;
}

int Evaluate(const EvaluateOptions& o, std::ostream& out) {
  const PiecewiseModel model = LoadModel(o.model_path);
  const Dataset data = ReadDataset(o.data_path).WithoutLabels();
  const FitMetrics m = ComputeFitMetrics(model, data);
  const json j = {{"mse", m.mse}, {"e_max", m.e_max}, {"n_points", m.n_points}};
  Emit(o.output_path, j.dump(2) + "\n", out);
  return kExitOk;
}

int GenData(const GenDataOptions& o, std::ostream& out) {
  GeneratorConfig cfg;
  cfg.name = o.generator;
  cfg.n = o.n;
  cfg.lower = o.lower;
  cfg.upper = o.upper;
  cfg.grid = o.grid;
  cfg.samples = o.samples;
  cfg.noise_sigma = o.noise;
  cfg.seed = o.seed;
  cfg.p1 = o.p1;
  cfg.p2 = o.p2;
  cfg.model_seed = o.model_seed;
  if (o.generator == "model") {
    Require(!o.model_path.empty(), ErrorKind::kInvalidConfig, "generator 'model' needs --model");
    cfg.model = LoadModel(o.model_path);
    cfg.n = cfg.model->dimension();
  }
  Emit(o.output_path, FormatCsv(DatasetToTable(Generate(cfg))), out);
  return kExitOk;
}

int Cluster(const ClusterOptions& o, std::ostream& out) {
  const Dataset data = ReadDataset(o.data_path).WithoutLabels();
  KMeansOptions opt;
  opt.restarts = o.restarts;
  opt.standardize = o.standardize;
  const Clustering c = KMeansPlusPlus(data, o.k, o.seed, opt);
  const std::string csv = FormatCsv(DatasetToTable(data.WithLabels(c.labels)));
  if (o.output_path.empty()) {
    out << csv;
  } else {
    WriteTextFile(o.output_path, csv);
    out << json({{"k", o.k}, {"inertia", c.inertia}, {"restart", c.restart}}).dump(2) << '\n';
  }
  return kExitOk;
}

int ExportMip(const ExportOptions& o, std::ostream& out) {
  Require(!o.output_path.empty(), ErrorKind::kInvalidConfig, "export needs an output path");
  const PiecewiseModel model = LoadModel(o.model_path);
  const int n = model.dimension();
  const MiEmbedding e = EmbedModel(model, ExpandBox(o.lower, n, "lower bounds"),
                                   ExpandBox(o.upper, n, "upper bounds"), ParseBigM(o.big_m));
  WriteLpFile(o.output_path, FormatLp(e.program));
  out << json({{"output", o.output_path},
               {"binaries", e.program.num_binaries()},
               {"big_m", e.big_m}})
             .dump(2)
      << '\n';
  return kExitOk;
}

}  // namespace pwreg
