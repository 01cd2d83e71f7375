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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "pwreg/error.hpp"
#include "pwreg/formulation.hpp"
#include "pwreg/qp_solver.hpp"

namespace pwreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

QuadraticProgram SquareWithLowerBound(bool as_row) {
  ProgramBuilder b;
  const int z = b.AddVariable("z", as_row ? -kInf : 1.0, kInf);
  b.AddQuadratic(z, z, 2.0);
  if (as_row) b.AddInequality("lb", {{z, -1.0}}, -1.0);
  return std::move(b).Build();
}

// min |A z - b|^2  s.t.  C z = d, with the KKT closed form.
struct LeastSquaresInstance {
  QuadraticProgram qp;
  Eigen::VectorXd solution;
};

LeastSquaresInstance RandomEqualityLeastSquares(std::mt19937_64& rng, int n, int rows,
                                                int k) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(rows, n);
  Eigen::VectorXd rhs(rows);
  Eigen::MatrixXd c(k, n);
  Eigen::VectorXd d(k);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    rhs[i] = normal(rng);
  }
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = normal(rng);
    d[i] = normal(rng);
  }
  ProgramBuilder b;
  for (int j = 0; j < n; ++j) b.AddVariable("z" + std::to_string(j), -kInf, kInf);
  const Eigen::MatrixXd ata = 2.0 * a.transpose() * a;
  const Eigen::VectorXd atb = -2.0 * a.transpose() * rhs;
  for (int i = 0; i < n; ++i) {
    b.AddQuadratic(i, i, ata(i, i));
    for (int j = i + 1; j < n; ++j) b.AddQuadratic(i, j, ata(i, j));
    b.AddLinear(i, atb[i]);
  }
  b.AddConstant(rhs.squaredNorm());
  for (int i = 0; i < k; ++i) {
    std::vector<std::pair<int, double>> terms;
    for (int j = 0; j < n; ++j) terms.emplace_back(j, c(i, j));
    b.AddEquality("e" + std::to_string(i), terms, d[i]);
  }
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + k, n + k);
  kkt.topLeftCorner(n, n) = ata;
  kkt.topRightCorner(n, k) = c.transpose();
  kkt.bottomLeftCorner(k, n) = c;
  Eigen::VectorXd r(n + k);
  r.head(n) = -atb;
  r.tail(k) = d;
  const Eigen::VectorXd sol = kkt.fullPivLu().solve(r);
  return {std::move(b).Build(), sol.head(n)};
}

// Random feasible QP with PSD (possibly singular) Q and box plus row constraints.
QuadraticProgram RandomQp(std::mt19937_64& rng, int n, int m) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int rank = std::max(1, n / 2);
  Eigen::MatrixXd f(rank, n);
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < n; ++j) f(i, j) = normal(rng);
  }
  const Eigen::MatrixXd q = f.transpose() * f;
  Eigen::VectorXd x0(n);
  for (int j = 0; j < n; ++j) x0[j] = normal(rng);
  ProgramBuilder b;
  for (int j = 0; j < n; ++j) {
    b.AddVariable("z" + std::to_string(j), x0[j] - 1.0 - unit(rng), x0[j] + 1.0 + unit(rng));
    b.AddLinear(j, 3.0 * normal(rng));
  }
  for (int i = 0; i < n; ++i) {
    b.AddQuadratic(i, i, q(i, i));
    for (int j = i + 1; j < n; ++j) b.AddQuadratic(i, j, q(i, j));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<std::pair<int, double>> terms;
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = normal(rng);
      terms.emplace_back(j, v);
      lhs += v * x0[j];
    }
    b.AddInequality("r" + std::to_string(i), terms, lhs + 0.1 * unit(rng));
  }
  return std::move(b).Build();
}

TEST(QpSolverTest, SquareAboveOneAsBound) {
  const QpSolution s = SolveQp(SquareWithLowerBound(false));
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_NEAR(s.z[0], 1.0, 1e-9);
  EXPECT_NEAR(s.objective, 1.0, 1e-9);
}

TEST(QpSolverTest, SquareAboveOneAsRow) {
  const QpSolution s = SolveQp(SquareWithLowerBound(true));
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_NEAR(s.z[0], 1.0, 1e-9);
  EXPECT_NEAR(s.objective, 1.0, 1e-9);
  // Multiplier of -z <= -1 is 2.
  EXPECT_NEAR(s.y[0], 2.0, 1e-7);
}

TEST(QpSolverTest, UnconstrainedSeparableQuadratic) {
  ProgramBuilder b;
  b.AddVariable("z1", -kInf, kInf);
  b.AddVariable("z2", -kInf, kInf);
  b.AddQuadratic(0, 0, 2.0);
  b.AddQuadratic(1, 1, 2.0);
  b.AddLinear(0, -2.0);
  b.AddLinear(1, 2.0);
  b.AddConstant(2.0);
  const QpSolution s = SolveQp(std::move(b).Build());
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_NEAR(s.z[0], 1.0, 1e-9);
  EXPECT_NEAR(s.z[1], -1.0, 1e-9);
  EXPECT_NEAR(s.objective, 0.0, 1e-12);
}

TEST(QpSolverTest, TwoPointBinaryFreeQpFitsExactly) {
  RowMatrix x(2, 1);
  x << 0.0, 1.0;
  Eigen::VectorXd y(2);
  y << 0.0, 1.0;
  const Dataset data(x, y);
  const FeatureMap g = AffineFeatureMap(1);
  const QuadraticProgram qp = BuildQpFull(data, g, g);
  const QpSolution s = SolveQp(qp);
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_LE(std::fabs(s.objective), 1e-7);
  const ExtractedModel m = ExtractModel(qp, s.z, g, g);
  EXPECT_LE(m.loss, 1e-7);
}

TEST(QpSolverTest, MatchesEqualityConstrainedLeastSquaresClosedForm) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = RandomEqualityLeastSquares(rng, 6, 10, 2);
    const QpSolution s = SolveQp(inst.qp);
    ASSERT_EQ(s.status, QpStatus::kOptimal) << "trial " << trial;
    EXPECT_LE((s.z - inst.solution).cwiseAbs().maxCoeff(), 1e-6) << "trial " << trial;
  }
}

TEST(QpSolverTest, OptimalSolutionsAreFeasibleAndObjectiveIsConsistent) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const QuadraticProgram qp = RandomQp(rng, 8, 6);
    const QpSolution s = SolveQp(qp);
    ASSERT_EQ(s.status, QpStatus::kOptimal) << "trial " << trial;
    EXPECT_LE(s.primal_residual, 1e-8);
    EXPECT_LE(s.dual_residual, 1e-8);
    EXPECT_LE(qp.MaxViolation(s.z), 1e-8 * (1.0 + s.z.cwiseAbs().maxCoeff()));
    const double recomputed = qp.Objective(s.z);
    EXPECT_LE(std::fabs(recomputed - s.objective), 1e-12 * std::max(1.0, std::fabs(recomputed)));
  }
}

TEST(QpSolverTest, AgreesWithDenseInteriorPoint) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const QuadraticProgram qp = RandomQp(rng, 6, 4);
    const QpSolution admm = SolveQp(qp);
    const QpSolution ipm = SolveQpDense(qp);
    ASSERT_EQ(admm.status, QpStatus::kOptimal);
    ASSERT_EQ(ipm.status, QpStatus::kOptimal);
    EXPECT_NEAR(admm.objective, ipm.objective, 1e-7 * (1.0 + std::fabs(ipm.objective)));
  }
}

TEST(QpSolverTest, WarmStartedResolveReturnsSameObjective) {
  std::mt19937_64 rng(5);
  const QuadraticProgram qp = RandomQp(rng, 10, 8);
  QpSolver solver(qp);
  const QpSolution first = solver.Solve();
  ASSERT_EQ(first.status, QpStatus::kOptimal);
  solver.WarmStart(first.z, &first.y);
  const QpSolution second = solver.Solve();
  ASSERT_EQ(second.status, QpStatus::kOptimal);
  EXPECT_NEAR(first.objective, second.objective, 1e-9);
}

TEST(QpSolverTest, DeterministicAcrossRuns) {
  std::mt19937_64 rng(9);
  const QuadraticProgram qp = RandomQp(rng, 12, 9);
  const QpSolution a = SolveQp(qp);
  const QpSolution b = SolveQp(qp);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.z, b.z);
  EXPECT_EQ(a.objective, b.objective);
}

TEST(QpSolverTest, DetectsInfeasibleRows) {
  ProgramBuilder b;
  const int z = b.AddVariable("z", -kInf, kInf);
  b.AddQuadratic(z, z, 2.0);
  b.AddInequality("ge1", {{z, -1.0}}, -1.0);
  b.AddInequality("le0", {{z, 1.0}}, 0.0);
  const QpSolution s = SolveQp(std::move(b).Build());
  EXPECT_EQ(s.status, QpStatus::kInfeasible);
  EXPECT_GT(s.infeasibility_certificate, 0.0);
}

TEST(QpSolverTest, IterationLimitReturnsIterateWithResiduals) {
  std::mt19937_64 rng(13);
  QpSettings settings;
  settings.max_iter = 10;
  settings.polish = false;
  const QpSolution s = SolveQp(RandomQp(rng, 10, 8), settings);
  EXPECT_EQ(s.status, QpStatus::kIterationLimit);
  EXPECT_EQ(s.z.size(), 10);
  EXPECT_GT(std::max(s.primal_residual, s.dual_residual), 0.0);
}

TEST(QpSolverTest, BoundUpdatesReuseTheWorkspace) {
  QpSolver solver(SquareWithLowerBound(false));
  ASSERT_NEAR(solver.Solve().objective, 1.0, 1e-9);
  Eigen::VectorXd lo(1);
  Eigen::VectorXd hi(1);
  lo << 3.0;
  hi << kInf;
  solver.SetVariableBounds(lo, hi);
  EXPECT_NEAR(solver.Solve().objective, 9.0, 1e-8);
  lo << -kInf;
  EXPECT_THROW(solver.SetVariableBounds(lo, hi), Error);
}

TEST(DenseQpTest, HandlesFixedVariablesAndEqualities) {
  ProgramBuilder b;
  b.AddVariable("a", 2.0, 2.0);
  b.AddVariable("b", -kInf, kInf);
  b.AddQuadratic(1, 1, 2.0);
  b.AddEquality("sum", {{0, 1.0}, {1, 1.0}}, 5.0);
  const QpSolution s = SolveQpDense(std::move(b).Build());
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_NEAR(s.z[0], 2.0, 0.0);
  EXPECT_NEAR(s.z[1], 3.0, 1e-9);
  EXPECT_NEAR(s.objective, 9.0, 1e-8);
}

TEST(DenseQpTest, MatchesClosedForm) {
  std::mt19937_64 rng(17);
  const auto inst = RandomEqualityLeastSquares(rng, 5, 9, 2);
  const QpSolution s = SolveQpDense(inst.qp);
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_LE((s.z - inst.solution).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SparseQpTest, HandlesFixedVariablesAndEqualities) {
  ProgramBuilder b;
  b.AddVariable("a", 2.0, 2.0);
  b.AddVariable("b", -kInf, kInf);
  b.AddQuadratic(1, 1, 2.0);
  b.AddEquality("sum", {{0, 1.0}, {1, 1.0}}, 5.0);
  const QpSolution s = SolveQpSparse(std::move(b).Build());
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_NEAR(s.z[0], 2.0, 0.0);
  EXPECT_NEAR(s.z[1], 3.0, 1e-9);
  EXPECT_NEAR(s.objective, 9.0, 1e-8);
}

TEST(SparseQpTest, MatchesClosedForm) {
  std::mt19937_64 rng(17);
  const auto inst = RandomEqualityLeastSquares(rng, 5, 9, 2);
  const QpSolution s = SolveQpSparse(inst.qp);
  ASSERT_EQ(s.status, QpStatus::kOptimal);
  EXPECT_LE((s.z - inst.solution).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SparseQpTest, AgreesWithDenseInteriorPoint) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const QuadraticProgram qp = RandomQp(rng, 6 + trial % 4, 4 + trial % 3);
    const QpSolution dense = SolveQpDense(qp);
    const QpSolution sparse = SolveQpSparse(qp);
    ASSERT_EQ(dense.status, QpStatus::kOptimal);
    ASSERT_EQ(sparse.status, QpStatus::kOptimal);
    EXPECT_NEAR(sparse.objective, dense.objective, 1e-7 * (1.0 + std::fabs(dense.objective)));
    EXPECT_LE(qp.MaxViolation(sparse.z), 1e-7);
  }
}

TEST(SparseQpTest, SolvesBigMRelaxationOfAFitProgram) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RowMatrix x(40, 1);
  Eigen::VectorXd y(40);
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = u(rng);
    y[i] = std::fabs(x(i, 0)) + 0.1 * u(rng);
  }
  FitConfig cfg;
  cfg.p1 = 2;
  cfg.p2 = 1;
  cfg.symmetry_breaking = false;
  const FeatureMap g = AffineFeatureMap(1);
  MixedIntegerProgram mip = BuildMiqp(Dataset(x, y), g, g, cfg);
  for (int b : mip.binaries) {
    mip.base.lower[b] = 0.0;
    mip.base.upper[b] = 1.0;
  }
  const QpSolution dense = SolveQpDense(mip.base);
  const QpSolution sparse = SolveQpSparse(mip.base);
  ASSERT_EQ(dense.status, QpStatus::kOptimal);
  ASSERT_EQ(sparse.status, QpStatus::kOptimal);
  EXPECT_NEAR(sparse.objective, dense.objective, 1e-6 * (1.0 + std::fabs(dense.objective)));
  EXPECT_LE(mip.base.MaxViolation(sparse.z), 1e-6);
}

}  // namespace
}  // namespace pwreg
