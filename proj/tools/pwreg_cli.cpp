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


#include <iostream>

#include "CLI11.hpp"
#include "pwreg/commands.hpp"

int main(int argc, char** argv) {
  using namespace pwreg;
  CLI::App app{"pwreg: difference-of-max piecewise regression"};
  app.require_subcommand(1);

  FitOptions fit;
  auto* fit_cmd = app.add_subcommand("fit", "fit a model to a CSV dataset");
  // "--h" names the second feature map, so help is long-form only here.
  fit_cmd->set_help_flag("--help", "Print this help message and exit");
  fit_cmd->add_option("--data", fit.data_path, "CSV with x1..xn,y[,cluster]")->required();
  fit_cmd->add_option("--model-out", fit.model_out, "model JSON to write");
  fit_cmd->add_option("--report", fit.report_out, "also write the report here");
  fit_cmd->add_option("--p1", fit.p1, "segments of the first max term")->capture_default_str();
  fit_cmd->add_option("--p2", fit.p2, "segments of the second max term")->capture_default_str();
  fit_cmd->add_option("--big-m", fit.big_m, "'auto' or a positive value")->capture_default_str();
  fit_cmd->add_option("--g", fit.g, "feature spec of g")->capture_default_str();
  fit_cmd->add_option("--h", fit.h, "feature spec of h")->capture_default_str();
  fit_cmd->add_flag("!--no-symmetry", fit.symmetry_breaking, "disable segment-order fixings");
  fit_cmd->add_option("--clusters", fit.clusters, "precluster with k-means++ into K clusters");
  fit_cmd->add_flag("--ignore-labels", fit.ignore_labels, "ignore a cluster column");
  fit_cmd->add_option("--seed", fit.seed, "clustering seed")->capture_default_str();
  fit_cmd->add_option("--ridge", fit.ridge)->capture_default_str();
  fit_cmd->add_option("--rel-gap", fit.rel_gap)->capture_default_str();
  fit_cmd->add_option("--abs-gap", fit.abs_gap)->capture_default_str();
  fit_cmd->add_option("--node-limit", fit.node_limit)->capture_default_str();
  fit_cmd->add_option("--time-limit", fit.time_limit, "seconds, 0 for none");
  fit_cmd->add_option("--workers", fit.workers)->capture_default_str();
  fit_cmd->add_option("--max-degree", fit.max_degree, "largest monomial degree accepted")
      ->capture_default_str();
  fit_cmd->add_flag("--verbose", fit.verbose, "node log as JSON lines on stderr");

  PredictOptions predict;
  auto* predict_cmd = app.add_subcommand("predict", "append yhat to a CSV");
  predict_cmd->add_option("--model", predict.model_path)->required();
  predict_cmd->add_option("--input", predict.input_path)->required();
  predict_cmd->add_option("--output", predict.output_path);

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "MSE and max error on a CSV");
  evaluate_cmd->add_option("--model", evaluate.model_path)->required();
  evaluate_cmd->add_option("--data", evaluate.data_path)->required();
  evaluate_cmd->add_option("--output", evaluate.output_path);

  GenDataOptions gen;
  std::uint64_t model_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen-data", "write a synthetic dataset");
  gen_cmd->add_option("--generator", gen.generator,
                      "pwa-tent, abs, random-pwa, sin-piecewise or model")
      ->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "input dimension")->capture_default_str();
  gen_cmd->add_option("--lower", gen.lower, "box lower bound(s)")->delimiter(',');
  gen_cmd->add_option("--upper", gen.upper, "box upper bound(s)")->delimiter(',');
  gen_cmd->add_option("--grid", gen.grid, "grid points per coordinate, e.g. 45,30")->delimiter(',');
  gen_cmd->add_option("--samples", gen.samples, "uniform samples when no grid is given");
  gen_cmd->add_option("--noise", gen.noise, "Gaussian noise sigma")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--p1", gen.p1)->capture_default_str();
  gen_cmd->add_option("--p2", gen.p2)->capture_default_str();
  auto* model_seed_opt = gen_cmd->add_option("--model-seed", model_seed, "random-pwa weights");
  gen_cmd->add_option("--model", gen.model_path, "model JSON for generator 'model'");
  gen_cmd->add_option("--output", gen.output_path);

  ClusterOptions cluster;
  auto* cluster_cmd = app.add_subcommand("cluster", "append k-means++ labels to a CSV");
  cluster_cmd->add_option("--data", cluster.data_path)->required();
  cluster_cmd->add_option("--k", cluster.k)->required();
  cluster_cmd->add_option("--seed", cluster.seed)->capture_default_str();
  cluster_cmd->add_option("--restarts", cluster.restarts)->capture_default_str();
  cluster_cmd->add_flag("!--no-standardize", cluster.standardize);
  cluster_cmd->add_option("--output", cluster.output_path);

  ExportOptions exp;
  auto* export_cmd = app.add_subcommand("export-mip", "write a model as mixed-integer LP");
  export_cmd->add_option("--model", exp.model_path)->required();
  export_cmd->add_option("--lower", exp.lower)->delimiter(',')->required();
  export_cmd->add_option("--upper", exp.upper)->delimiter(',')->required();
  export_cmd->add_option("--big-m", exp.big_m)->capture_default_str();
  export_cmd->add_option("--output", exp.output_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (*model_seed_opt) gen.model_seed = model_seed;

  return RunCommand(
      [&]() -> int {
        if (*fit_cmd) return Fit(fit, std::cout, std::cerr);
        if (*predict_cmd) return Predict(predict, std::cout);
        if (*evaluate_cmd) return Evaluate(evaluate, std::cout);
        if (*gen_cmd) return GenData(gen, std::cout);
        if (*cluster_cmd) return Cluster(cluster, std::cout);
        return ExportMip(exp, std::cout);
      },
      std::cerr);
}
