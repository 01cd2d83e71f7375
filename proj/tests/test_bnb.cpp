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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "pwreg/bnb.hpp"
#include "pwreg/error.hpp"
#include "pwreg/formulation.hpp"
#include "pwreg/oracle.hpp"

namespace pwreg {
namespace {

Dataset Tent() {
  RowMatrix x(3, 1);
  x << 0.0, 1.0, 2.0;
  Eigen::VectorXd y(3);
  y << 0.0, 1.0, 0.0;
  return Dataset(x, y);
}

Dataset RandomData(std::mt19937_64& rng, int n_points, int dim) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RowMatrix x(n_points, dim);
  Eigen::VectorXd y(n_points);
  for (int i = 0; i < n_points; ++i) {
    for (int j = 0; j < dim; ++j) x(i, j) = u(rng);
    y[i] = u(rng);
  }
  return Dataset(x, y);
}

double AffineLeastSquaresResidual(const Dataset& d) {
  Eigen::MatrixXd a(d.size(), d.dimension() + 1);
  a.leftCols(d.dimension()) = d.x();
  a.col(d.dimension()).setOnes();
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(d.y());
  return (a * coef - d.y()).squaredNorm();
}

TEST(BnbTest, FullyFixedProblemNeedsOneNode) {
  const Dataset d = Tent();
  const FeatureMap g = AffineFeatureMap(1);
  FitConfig cfg;
  cfg.p1 = 1;
  cfg.p2 = 1;
  const MixedIntegerProgram mip = BuildMiqp(d, g, g, cfg);
  ASSERT_EQ(mip.num_free_binaries(), 0);
  const BnbResult r = SolveMiqp(mip);
  EXPECT_EQ(r.status, BnbStatus::kOptimal);
  EXPECT_EQ(r.nodes_explored, 1);
}

TEST(BnbTest, TentDataIsFitExactlyWithOneMinusTwo) {
  const Dataset d = Tent();
  const FeatureMap g = AffineFeatureMap(1);
  FitConfig cfg;
  cfg.p1 = 1;
  cfg.p2 = 2;
  cfg.big_m = 100.0;
  const BnbResult r = SolveMiqp(BuildMiqp(d, g, g, cfg));
  ASSERT_EQ(r.status, BnbStatus::kOptimal);
  EXPECT_LE(r.incumbent.objective, 1e-6);
  const OracleResult o = BruteForceOracle(d, g, g, 1, 2, 100.0);
  EXPECT_LE(o.objective, 1e-6);
  EXPECT_LE(ComputeFitMetrics(o.model, d).e_max, 1e-4);
}

TEST(BnbTest, SingleSegmentsGiveAffineLeastSquares) {
  const Dataset d = Tent();
  const FeatureMap g = AffineFeatureMap(1);
  FitConfig cfg;
  cfg.p1 = 1;
  cfg.p2 = 1;
  cfg.big_m = 100.0;
  const BnbResult r = SolveMiqp(BuildMiqp(d, g, g, cfg));
  EXPECT_NEAR(r.incumbent.objective, AffineLeastSquaresResidual(d), 1e-6);
  EXPECT_NEAR(r.incumbent.objective, 2.0 / 3.0, 1e-6);
}

TEST(BnbTest, MatchesOracleOnRandomFourPointInstances) {
  std::mt19937_64 rng(42);
  const FeatureMap g = AffineFeatureMap(1);
  for (int trial = 0; trial < 8; ++trial) {
    const Dataset d = RandomData(rng, 4, 1);
    FitConfig cfg;
    cfg.p1 = 2;
    cfg.p2 = 2;
    const double m = AutoBigM(d, g, &g);
    const BnbResult r = SolveMiqp(BuildMiqp(d, g, g, cfg));
    const OracleResult o = BruteForceOracle(d, g, g, 2, 2, m);
    ASSERT_EQ(r.status, BnbStatus::kOptimal);
    EXPECT_LE(std::fabs(r.incumbent.objective - o.objective), 1e-6 * (1.0 + std::fabs(o.objective)))
        << "trial " << trial;
  }
}

TEST(BnbTest, IncumbentIsIntegralAndFeasible) {
  std::mt19937_64 rng(5);
  const FeatureMap g = AffineFeatureMap(2);
  const Dataset d = RandomData(rng, 5, 2);
  FitConfig cfg;
  cfg.p1 = 2;
  cfg.p2 = 1;
  const MixedIntegerProgram mip = BuildMiqp(d, g, g, cfg);
  const BnbResult r = SolveMiqp(mip);
  ASSERT_TRUE(r.has_incumbent);
  for (int b : mip.binaries) {
    const double v = r.incumbent.z[b];
    EXPECT_TRUE(v == 0.0 || v == 1.0);
  }
  EXPECT_LE(mip.base.MaxViolation(r.incumbent.z), 1e-6);
  EXPECT_GE(r.incumbent.objective, r.bound - 1e-9);
  EXPECT_NEAR(r.gap, (r.incumbent.objective - r.bound) / std::max(1.0, std::fabs(r.incumbent.objective)),
              1e-15);
}

TEST(BnbTest, RelaxationBoundsNeverExceedLeafOptima) {
  // Enumerate every leaf below a partial fixing and compare with the node's
  // relaxation value.
  std::mt19937_64 rng(77);
  const FeatureMap g = AffineFeatureMap(1);
  const Dataset d = RandomData(rng, 3, 1);
  FitConfig cfg;
  cfg.p1 = 2;
  cfg.p2 = 2;
  cfg.symmetry_breaking = false;
  const MixedIntegerProgram mip = BuildMiqp(d, g, g, cfg);
  const int nb = mip.num_binaries();
  ASSERT_EQ(nb, 12);
  // Fix the first point's delta to segment 0, leave the rest free.
  std::vector<int> fixing(nb, -1);
  fixing[0] = 1;
  const QpSolution node = SolveNodeRelaxation(mip, fixing);
  ASSERT_EQ(node.status, QpStatus::kOptimal);
  double best_leaf = std::numeric_limits<double>::infinity();
  // Remaining free rows: delta for points 1, 2 and gamma for points 0..2.
  const auto& rows = mip.assignment_rows;
  std::vector<int> pick(rows.size(), 0);
  while (true) {
    std::vector<int> leaf(nb, 0);
    bool valid = true;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t k = 0; k < rows[r].size(); ++k) {
        const int var = rows[r][k];
        const int pos = static_cast<int>(std::find(mip.binaries.begin(), mip.binaries.end(), var) -
                                         mip.binaries.begin());
        leaf[pos] = static_cast<int>(k) == pick[r] ? 1 : 0;
        if (fixing[pos] >= 0 && fixing[pos] != leaf[pos]) valid = false;
      }
    }
    if (valid) {
      const QpSolution s = SolveNodeRelaxation(mip, leaf);
      if (s.status == QpStatus::kOptimal) best_leaf = std::min(best_leaf, s.objective);
    }
    std::size_t r = 0;
    for (; r < rows.size(); ++r) {
      if (++pick[r] < static_cast<int>(rows[r].size())) break;
      pick[r] = 0;
    }
    if (r == rows.size()) break;
  }
  EXPECT_LE(node.objective, best_leaf + 1e-8);
}

TEST(BnbTest, DeterministicWithOneWorker) {
  std::mt19937_64 rng(21);
  const FeatureMap g = AffineFeatureMap(1);
  const Dataset d = RandomData(rng, 5, 1);
  FitConfig cfg;
  cfg.p1 = 2;
  cfg.p2 = 2;
  const MixedIntegerProgram mip = BuildMiqp(d, g, g, cfg);
  const BnbResult a = SolveMiqp(mip);
  const BnbResult b = SolveMiqp(mip);
  EXPECT_EQ(a.nodes_explored, b.nodes_explored);
  EXPECT_EQ(a.incumbent.z, b.incumbent.z);
  EXPECT_EQ(a.incumbent.objective, b.incumbent.objective);
}

TEST(BnbTest, IncumbentNeverIncreasesInEventLog) {
  std::mt19937_64 rng(8);
  const FeatureMap g = AffineFeatureMap(1);
  const Dataset d = RandomData(rng, 5, 1);
  FitConfig cfg;
  cfg.p1 = 2;
  cfg.p2 = 2;
  std::vector<BnbEvent> events;
  BnbConfig bc;
  bc.on_node = [&](const BnbEvent& e) { events.push_back(e); };
  const BnbResult r = SolveMiqp(BuildMiqp(d, g, g, cfg), bc);
  ASSERT_EQ(static_cast<std::int64_t>(events.size()), r.nodes_explored);
  for (std::size_t k = 1; k < events.size(); ++k) {
    EXPECT_LE(events[k].incumbent, events[k - 1].incumbent);
  }
  EXPECT_EQ(events.back().incumbent, r.incumbent.objective);
  const std::string line = FormatEvent(events.front());
  EXPECT_EQ(line.front(), '{');
  EXPECT_NE(line.find("\"fractionality\""), std::string::npos);
}

TEST(BnbTest, ParallelWorkersReachTheSameOptimum) {
  std::mt19937_64 rng(31);
  const FeatureMap g = AffineFeatureMap(1);
  const Dataset d = RandomData(rng, 5, 1);
  FitConfig cfg;
  cfg.p1 = 2;
  cfg.p2 = 2;
  const MixedIntegerProgram mip = BuildMiqp(d, g, g, cfg);
  BnbConfig one;
  BnbConfig three;
  three.workers = 3;
  const BnbResult a = SolveMiqp(mip, one);
  const BnbResult b = SolveMiqp(mip, three);
  ASSERT_EQ(b.status, BnbStatus::kOptimal);
  EXPECT_NEAR(a.incumbent.objective, b.incumbent.objective, 1e-6 * (1.0 + a.incumbent.objective));
}

TEST(BnbTest, NodeLimitReportsValidBound) {
  std::mt19937_64 rng(4);
  const FeatureMap g = AffineFeatureMap(1);
  const Dataset d = RandomData(rng, 6, 1);
  FitConfig cfg;
  cfg.p1 = 2;
  cfg.p2 = 2;
  const MixedIntegerProgram mip = BuildMiqp(d, g, g, cfg);
  BnbConfig bc;
  bc.node_limit = 3;
  const BnbResult limited = SolveMiqp(mip, bc);
  const BnbResult full = SolveMiqp(mip);
  EXPECT_LE(limited.nodes_explored, 3);
  if (limited.status != BnbStatus::kOptimal) {
    EXPECT_TRUE(limited.status == BnbStatus::kNodeLimit || limited.status == BnbStatus::kGapLimit);
  }
  EXPECT_LE(limited.bound, full.incumbent.objective + 1e-7);
}

TEST(BnbTest, RejectsNegativeTolerances) {
  const FeatureMap g = AffineFeatureMap(1);
  FitConfig cfg;
  const MixedIntegerProgram mip = BuildMiqp(Tent(), g, g, cfg);
  BnbConfig bc;
  bc.rel_gap = -1.0;
  EXPECT_THROW(SolveMiqp(mip, bc), Error);
  bc.rel_gap = 0.0;
  bc.workers = 0;
  EXPECT_THROW(SolveMiqp(mip, bc), Error);
}

TEST(OracleTest, SinglePointIsAlwaysFitExactly) {
  RowMatrix x(1, 2);
  x << 0.3, -0.7;
  Eigen::VectorXd y(1);
  y << 4.2;
  const Dataset d(x, y);
  const FeatureMap g = AffineFeatureMap(2);
  for (int p1 = 1; p1 <= 3; ++p1) {
    for (int p2 = 0; p2 <= 2; ++p2) {
      EXPECT_LE(BruteForceOracle(d, g, g, p1, p2, 1000.0, 0.0).objective, 1e-10);
    }
  }
}

TEST(OracleTest, CountsAssignmentsAndGuardsBudget) {
  const FeatureMap g = AffineFeatureMap(1);
  const OracleResult r = BruteForceOracle(Tent(), g, g, 2, 2, 100.0);
  EXPECT_EQ(r.assignments, 64);
  EXPECT_THROW(BruteForceOracle(Tent(), g, g, 2, 2, 100.0, 1e-9, 63), Error);
}

}  // namespace
}  // namespace pwreg
