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


#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lp_reader.hpp"
#include "pwreg/commands.hpp"
#include "pwreg/generators.hpp"
#include "pwreg/io.hpp"

namespace pwreg {
namespace {

using nlohmann::json;

class CommandsTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("pwreg_cmd_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string Write(const std::string& name, const std::string& text) const {
    WriteTextFile(Path(name), text);
    return Path(name);
  }

  std::string TentCsv() const {
    GenDataOptions o;
    o.generator = "pwa-tent";
    o.lower = {-1.0};
    o.upper = {3.0};
    o.grid = {5};
    o.output_path = Path("tent.csv");
    std::ostringstream out;
    EXPECT_EQ(GenData(o, out), kExitOk);
    return o.output_path;
  }

  std::string AbsModelFile() const {
    SaveModel(Path("abs.json"), AbsModel());
    return Path("abs.json");
  }

  static json FitReport(const FitOptions& o, int expected_code = kExitOk) {
    std::ostringstream out;
    std::ostringstream log;
    EXPECT_EQ(Fit(o, out, log), expected_code);
    return json::parse(out.str());
  }

  std::filesystem::path dir_;
};

TEST_F(CommandsTest, FitTentIsExact) {
  FitOptions o;
  o.data_path = TentCsv();
  o.p1 = 1;
  o.p2 = 2;
  o.model_out = Path("model.json");
  const json r = FitReport(o);
  EXPECT_LE(r["objective"].get<double>(), 1e-6);
  EXPECT_EQ(r["status"], "optimal");
  EXPECT_EQ(r["path"], "miqp");
  for (const char* key : {"objective", "mse", "e_max", "status", "gap", "nodes", "wall_seconds",
                          "config"}) {
    EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_EQ(r["config"], FitOptionsToJson(o));
  EXPECT_TRUE(std::filesystem::exists(o.model_out));
}

TEST_F(CommandsTest, FitWithOneSegmentPerPointTakesTheQpPath) {
  FitOptions o;
  o.data_path = TentCsv();
  o.p1 = 5;
  o.p2 = 5;
  const json r = FitReport(o);
  EXPECT_EQ(r["path"], "qp");
  EXPECT_EQ(r["binaries"], 0);
  EXPECT_LE(r["objective"].get<double>(), 1e-6);
}

TEST_F(CommandsTest, FitWithClusterLabelsUsesTheClusteredPrograms) {
  const std::string data =
      Write("c.csv", "x1,y,cluster\n0,0,0\n1,1,0\n2,2,1\n3,1,1\n4,0,1\n");
  FitOptions o;
  o.data_path = data;
  o.p1 = 2;
  o.p2 = 2;
  EXPECT_EQ(FitReport(o)["path"], "qp-clustered");
  o.p2 = 1;
  const json r = FitReport(o);
  EXPECT_EQ(r["path"], "miqp-clustered");
  EXPECT_EQ(r["binaries"], 6);
  o.ignore_labels = true;
  EXPECT_EQ(FitReport(o)["path"], "miqp");
}

TEST_F(CommandsTest, FitWithKMeansPreclustering) {
  FitOptions o;
  o.data_path = TentCsv();
  o.p1 = 1;
  o.p2 = 1;
  o.clusters = 3;
  o.seed = 4;
  const json r = FitReport(o);
  EXPECT_EQ(r["path"], "miqp-clustered");
  EXPECT_EQ(r["binaries"], 6);
}

TEST_F(CommandsTest, TooManySegmentsIsAConfigError) {
  FitOptions o;
  o.data_path = TentCsv();
  o.p1 = 6;
  std::ostringstream out;
  std::ostringstream err;
  EXPECT_EQ(RunCommand([&] { return Fit(o, out, out); }, err), kExitConfig);
  EXPECT_NE(err.str().find("without loss of generality"), std::string::npos);
}

TEST_F(CommandsTest, FitInputErrors) {
  std::ostringstream sink;
  FitOptions o;
  o.data_path = Path("missing.csv");
  EXPECT_EQ(RunCommand([&] { return Fit(o, sink, sink); }, sink), kExitIo);
  o.data_path = TentCsv();
  o.big_m = "-3";
  EXPECT_EQ(RunCommand([&] { return Fit(o, sink, sink); }, sink), kExitConfig);
  o.big_m = "auto";
  o.g = "cubic";
  EXPECT_EQ(RunCommand([&] { return Fit(o, sink, sink); }, sink), kExitIo);
  o.g = "monomials:5";
  EXPECT_EQ(RunCommand([&] { return Fit(o, sink, sink); }, sink), kExitConfig);
}

TEST_F(CommandsTest, NodeLimitIsASolverLimitExit) {
  GenDataOptions gen;
  gen.generator = "random-pwa";
  gen.lower = {-1.0};
  gen.upper = {1.0};
  gen.samples = 12;
  gen.noise = 0.3;
  gen.seed = 2;
  gen.output_path = Path("noisy.csv");
  std::ostringstream sink;
  ASSERT_EQ(GenData(gen, sink), kExitOk);
  FitOptions o;
  o.data_path = gen.output_path;
  o.p1 = 3;
  o.p2 = 3;
  o.node_limit = 1;
  const json r = FitReport(o, kExitSolverLimit);
  EXPECT_EQ(r["status"], "node_limit");
}

TEST_F(CommandsTest, VerboseFitLogsJsonLines) {
  FitOptions o;
  o.data_path = TentCsv();
  o.p1 = 1;
  o.p2 = 2;
  o.verbose = true;
  std::ostringstream out;
  std::ostringstream log;
  ASSERT_EQ(Fit(o, out, log), kExitOk);
  std::istringstream lines(log.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    EXPECT_NO_THROW(json::parse(line)) << line;
    ++count;
  }
  EXPECT_GT(count, 0);
}

TEST_F(CommandsTest, PredictAbsModel) {
  PredictOptions o;
  o.model_path = AbsModelFile();
  o.input_path = Write("in.csv", "x1\n-1\n0\n2\n");
  std::ostringstream out;
  ASSERT_EQ(Predict(o, out), kExitOk);
  const CsvTable t = ParseCsv(out.str());
  EXPECT_EQ(t.header, (std::vector<std::string>{"x1", "yhat"}));
  ASSERT_EQ(t.values.rows(), 3);
  EXPECT_EQ(t.values(0, 1), 1.0);
  EXPECT_EQ(t.values(1, 1), 0.0);
  EXPECT_EQ(t.values(2, 1), 2.0);
}

TEST_F(CommandsTest, PredictDimensionMismatch) {
  PredictOptions o;
  o.model_path = AbsModelFile();
  o.input_path = Write("in.csv", "x1,x2\n1,2\n");
  std::ostringstream sink;
  EXPECT_EQ(RunCommand([&] { return Predict(o, sink); }, sink), kExitConfig);
}

TEST_F(CommandsTest, EvaluateMetrics) {
  EvaluateOptions o;
  o.model_path = AbsModelFile();
  o.data_path = Write("exact.csv", "x1,y\n-1,1\n0,0\n3,3\n");
  std::ostringstream out;
  ASSERT_EQ(Evaluate(o, out), kExitOk);
  json j = json::parse(out.str());
  EXPECT_EQ(j["mse"], 0.0);
  EXPECT_EQ(j["e_max"], 0.0);

  SaveModel(Path("zero.json"), PiecewiseModel::Convex(RowMatrix::Zero(1, 2), AffineFeatureMap(1)));
  o.model_path = Path("zero.json");
  o.data_path = Write("unit.csv", "x1,y\n0,1\n1,-1\n2,1\n");
  o.output_path = Path("metrics.json");
  std::ostringstream quiet;
  ASSERT_EQ(Evaluate(o, quiet), kExitOk);
  j = json::parse(ReadTextFile(o.output_path));
  EXPECT_EQ(j["mse"], 1.0);
  EXPECT_EQ(j["e_max"], 1.0);
  EXPECT_EQ(j["n_points"], 3);
}

TEST_F(CommandsTest, FitPredictEvaluateReproduceTheReportedMse) {
  GenDataOptions gen;
  gen.generator = "random-pwa";
  gen.n = 2;
  gen.lower = {-1.0};
  gen.upper = {1.0};
  gen.samples = 10;
  gen.noise = 0.05;
  gen.seed = 8;
  gen.output_path = Path("train.csv");
  std::ostringstream sink;
  ASSERT_EQ(GenData(gen, sink), kExitOk);
  FitOptions fit;
  fit.data_path = gen.output_path;
  fit.p1 = 2;
  fit.p2 = 1;
  fit.model_out = Path("model.json");
  const json report = FitReport(fit);

  EvaluateOptions ev;
  ev.model_path = fit.model_out;
  ev.data_path = gen.output_path;
  std::ostringstream out;
  ASSERT_EQ(Evaluate(ev, out), kExitOk);
  const json metrics = json::parse(out.str());
  EXPECT_EQ(metrics["mse"].get<double>(), report["mse"].get<double>());
  EXPECT_EQ(metrics["e_max"].get<double>(), report["e_max"].get<double>());

  PredictOptions pr;
  pr.model_path = fit.model_out;
  pr.input_path = gen.output_path;
  std::ostringstream pred;
  ASSERT_EQ(Predict(pr, pred), kExitOk);
  const CsvTable t = ParseCsv(pred.str());
  double sse = 0.0;
  for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
    const double r = t.values(i, 2) - t.values(i, 3);
    sse += r * r;
  }
  EXPECT_EQ(sse / static_cast<double>(t.values.rows()), report["mse"].get<double>());
}

TEST_F(CommandsTest, FitIsDeterministic) {
  FitOptions o;
  o.data_path = TentCsv();
  o.p1 = 2;
  o.p2 = 2;
  json a = FitReport(o);
  json b = FitReport(o);
  a.erase("wall_seconds");
  b.erase("wall_seconds");
  EXPECT_EQ(a, b);
}

TEST_F(CommandsTest, GenDataAbsGrid) {
  GenDataOptions o;
  o.generator = "abs";
  o.lower = {-1.0};
  o.upper = {1.0};
  o.grid = {3};
  std::ostringstream out;
  ASSERT_EQ(GenData(o, out), kExitOk);
  EXPECT_EQ(out.str(), "x1,y\n-1,1\n0,0\n1,1\n");
}

TEST_F(CommandsTest, GenDataIsByteDeterministic) {
  GenDataOptions o;
  o.generator = "random-pwa";
  o.n = 2;
  o.lower = {-1.0, 0.0};
  o.upper = {1.0, 2.0};
  o.samples = 30;
  o.noise = 0.2;
  o.seed = 99;
  std::ostringstream a;
  std::ostringstream b;
  ASSERT_EQ(GenData(o, a), kExitOk);
  ASSERT_EQ(GenData(o, b), kExitOk);
  EXPECT_EQ(a.str(), b.str());
  const CsvTable t = ParseCsv(a.str());
  EXPECT_EQ(FormatCsv(t), a.str());
}

TEST_F(CommandsTest, GenDataFromAModelFile) {
  GenDataOptions o;
  o.generator = "model";
  o.model_path = AbsModelFile();
  o.lower = {-2.0};
  o.upper = {2.0};
  o.grid = {5};
  std::ostringstream out;
  ASSERT_EQ(GenData(o, out), kExitOk);
  EXPECT_EQ(out.str(), "x1,y\n-2,2\n-1,1\n0,0\n1,1\n2,2\n");
  o.generator = "spiral";
  std::ostringstream sink;
  EXPECT_EQ(RunCommand([&] { return GenData(o, sink); }, sink), kExitConfig);
}

TEST_F(CommandsTest, ClusterTwoGroups) {
  ClusterOptions o;
  o.data_path = Write("pts.csv", "x1,y\n0,5\n1,5\n10,5\n11,5\n");
  o.k = 2;
  std::ostringstream out;
  ASSERT_EQ(Cluster(o, out), kExitOk);
  const Dataset d = TableToDataset(ParseCsv(out.str()));
  ASSERT_TRUE(d.has_labels());
  const auto& l = d.labels();
  EXPECT_EQ(l[0], l[1]);
  EXPECT_EQ(l[2], l[3]);
  EXPECT_NE(l[0], l[2]);
}

TEST_F(CommandsTest, ClusterOnePerRowIsABijection) {
  ClusterOptions o;
  o.data_path = Write("pts.csv", "x1,x2,y\n0,0,1\n1,0,1\n0,1,1\n5,5,1\n");
  o.k = 4;
  o.output_path = Path("labeled.csv");
  std::ostringstream out;
  ASSERT_EQ(Cluster(o, out), kExitOk);
  const Dataset d = ReadDataset(o.output_path);
  EXPECT_EQ(std::set<int>(d.labels().begin(), d.labels().end()), (std::set<int>{0, 1, 2, 3}));
  o.k = 5;
  std::ostringstream sink;
  EXPECT_EQ(RunCommand([&] { return Cluster(o, sink); }, sink), kExitConfig);
}

TEST_F(CommandsTest, ExportAbsModel) {
  ExportOptions o;
  o.model_path = AbsModelFile();
  o.lower = {-10.0};
  o.upper = {10.0};
  o.output_path = Path("abs.lp");
  std::ostringstream out;
  ASSERT_EQ(ExportMip(o, out), kExitOk);
  EXPECT_EQ(json::parse(out.str())["binaries"], 2);
  const std::string text = ReadTextFile(o.output_path);
  EXPECT_EQ(testing::ParseLp(text).binaries.size(), 2u);
  EXPECT_EQ(text, ReadTextFile(std::filesystem::path(PWREG_TEST_DATA_DIR) / "abs_embedding.lp"));
}

TEST_F(CommandsTest, ExportRejectsNonAffineModels) {
  SaveModel(Path("sin.json"), SinPiecewiseModel());
  ExportOptions o;
  o.model_path = Path("sin.json");
  o.lower = {0.0};
  o.upper = {1.0};
  o.output_path = Path("sin.lp");
  std::ostringstream sink;
  EXPECT_EQ(RunCommand([&] { return ExportMip(o, sink); }, sink), kExitConfig);
  EXPECT_FALSE(std::filesystem::exists(o.output_path));
}

TEST(ExitCodeTest, Mapping) {
  EXPECT_EQ(ExitCodeFor(ErrorKind::kIo), kExitIo);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kParse), kExitIo);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kInvalidConfig), kExitConfig);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kUnsupportedFeature), kExitConfig);
  EXPECT_EQ(ExitCodeFor(ErrorKind::kInvalidDimension), kExitConfig);
}

}  // namespace
}  // namespace pwreg
