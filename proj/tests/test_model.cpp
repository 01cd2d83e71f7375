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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "pwreg/error.hpp"
#include "pwreg/generators.hpp"
#include "pwreg/model.hpp"

namespace pwreg {
namespace {

RowMatrix Rows(int rows, int cols, std::initializer_list<double> values) {
  RowMatrix m(rows, cols);
  std::copy(values.begin(), values.end(), m.data());
  return m;
}

PiecewiseModel Abs() {
  return PiecewiseModel(Rows(2, 2, {1, 0, -1, 0}), Rows(1, 2, {0, 0}),
                        AffineFeatureMap(1), AffineFeatureMap(1));
}

double Eval(const PiecewiseModel& m, double x) { return m.Evaluate(std::vector<double>{x}); }

TEST(ModelTest, ZeroWeightsGiveZero) {
  const PiecewiseModel m(Rows(1, 2, {0, 0}), Rows(1, 2, {0, 0}), AffineFeatureMap(1),
                         AffineFeatureMap(1));
  EXPECT_EQ(Eval(m, 7.0), 0.0);
}

TEST(ModelTest, AbsoluteValue) { EXPECT_EQ(Eval(Abs(), -3.0), 3.0); }

TEST(ModelTest, HandEvaluatedDifferenceOfMax) {
  const PiecewiseModel m(Rows(2, 2, {1, 0, -1, 2}), Rows(1, 2, {0, 1}), AffineFeatureMap(1),
                         AffineFeatureMap(1));
  EXPECT_EQ(Eval(m, 1.0), 0.0);
  const std::vector<double> x = {3.0};
  EXPECT_EQ(m.ActiveSegments(x), (PiecewiseModel::Active{0, 0}));
}

TEST(ModelTest, ActiveSegmentsBreakTiesToLowestIndex) {
  const PiecewiseModel m = Abs();
  EXPECT_EQ(m.ActiveSegments(std::vector<double>{5.0}), (PiecewiseModel::Active{0, 0}));
  EXPECT_EQ(m.ActiveSegments(std::vector<double>{0.0}), (PiecewiseModel::Active{0, 0}));
  EXPECT_EQ(m.ActiveSegments(std::vector<double>{-5.0}), (PiecewiseModel::Active{1, 0}));
}

TEST(ModelTest, ConvexModelHasNoSecondTerm) {
  const PiecewiseModel m = PiecewiseModel::Convex(Rows(2, 2, {1, 0, -1, 0}), AffineFeatureMap(1));
  EXPECT_EQ(m.p2(), 0);
  EXPECT_EQ(Eval(m, -2.5), 2.5);
  EXPECT_EQ(m.ActiveSegments(std::vector<double>{1.0}).w_row, -1);
  EXPECT_EQ(m.WSegments(std::vector<double>{1.0}).size(), 0);
}

TEST(ModelTest, ConstructorValidatesShapes) {
  const FeatureMap g = AffineFeatureMap(1);
  EXPECT_THROW(PiecewiseModel(RowMatrix(0, 2), Rows(1, 2, {0, 0}), g, g), Error);
  EXPECT_THROW(PiecewiseModel(Rows(1, 3, {0, 0, 0}), Rows(1, 2, {0, 0}), g, g), Error);
  EXPECT_THROW(PiecewiseModel(Rows(1, 2, {0, 0}), Rows(1, 3, {0, 0, 0}), g, g), Error);
  EXPECT_THROW(PiecewiseModel(Rows(1, 2, {0, 0}), Rows(1, 2, {0, 0}), g, std::nullopt), Error);
  EXPECT_THROW(PiecewiseModel(Rows(1, 2, {0, 0}), Rows(1, 3, {0, 0, 0}), g, AffineFeatureMap(2)),
               Error);
  try {
    PiecewiseModel(Rows(1, 2, {std::numeric_limits<double>::infinity(), 0}), RowMatrix(0, 0), g,
                   std::nullopt);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNumericInput);
  }
  try {
    Abs().Evaluate(std::vector<double>{1.0, 2.0});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidDimension);
  }
}

Dataset Points(std::initializer_list<double> xs, std::initializer_list<double> ys) {
  RowMatrix x(static_cast<int>(xs.size()), 1);
  std::copy(xs.begin(), xs.end(), x.data());
  Eigen::VectorXd y(static_cast<int>(ys.size()));
  std::copy(ys.begin(), ys.end(), y.data());
  return Dataset(x, y);
}

TEST(ModelTest, MetricsOfExactInterpolant) {
  const FitMetrics m = ComputeFitMetrics(Abs(), Points({-1.0, 0.0, 2.0}, {1.0, 0.0, 2.0}));
  EXPECT_EQ(m.mse, 0.0);
  EXPECT_EQ(m.e_max, 0.0);
  EXPECT_EQ(m.n_points, 3);
}

TEST(ModelTest, MetricsOfZeroModel) {
  const PiecewiseModel zero = PiecewiseModel::Convex(Rows(1, 2, {0, 0}), AffineFeatureMap(1));
  const FitMetrics m = ComputeFitMetrics(zero, Points({0.0, 0.0}, {1.0, -1.0}));
  EXPECT_EQ(m.mse, 1.0);
  EXPECT_EQ(m.e_max, 1.0);
}

TEST(ModelTest, MetricsOfAbsModel) {
  const FitMetrics m = ComputeFitMetrics(Abs(), Points({1.0, -1.0}, {2.0, 0.0}));
  EXPECT_EQ(m.mse, 1.0);
  EXPECT_EQ(m.e_max, 1.0);
}

TEST(ModelTest, MetricsErrors) {
  EXPECT_THROW(ComputeFitMetrics(Abs(), Dataset()), Error);
  RowMatrix x(1, 2);
  x << 1.0, 2.0;
  EXPECT_THROW(ComputeFitMetrics(Abs(), Dataset(x, Eigen::VectorXd::Ones(1))), Error);
}

TEST(ModelTest, LipschitzBounds) {
  const PiecewiseModel zero(Rows(1, 2, {0, 0}), Rows(1, 2, {0, 0}), AffineFeatureMap(1),
                            AffineFeatureMap(1));
  EXPECT_EQ(LipschitzBound(zero), 0.0);
  EXPECT_EQ(LipschitzBound(Abs()), 1.0);
  const PiecewiseModel m(Rows(2, 2, {3, 0, -4, 1}), Rows(1, 2, {0, 0}), AffineFeatureMap(1),
                         AffineFeatureMap(1));
  EXPECT_EQ(LipschitzBound(m), 4.0);
  EXPECT_THROW(LipschitzBound(SinPiecewiseModel()), Error);
}

std::vector<double> RandomPoint(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> x(n);
  for (double& v : x) v = u(rng);
  return x;
}

TEST(ModelPropertyTest, RowPermutationInvariance) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PiecewiseModel m = RandomPwaModel(2, 4, 3, 100 + trial);
    std::vector<int> pv(4);
    std::vector<int> pw(3);
    std::iota(pv.begin(), pv.end(), 0);
    std::iota(pw.begin(), pw.end(), 0);
    std::shuffle(pv.begin(), pv.end(), rng);
    std::shuffle(pw.begin(), pw.end(), rng);
    RowMatrix v(4, m.v().cols());
    RowMatrix w(3, m.w().cols());
    for (int k = 0; k < 4; ++k) v.row(k) = m.v().row(pv[k]);
    for (int k = 0; k < 3; ++k) w.row(k) = m.w().row(pw[k]);
    const PiecewiseModel permuted(v, w, m.g(), m.h());
    for (int s = 0; s < 20; ++s) {
      const auto x = RandomPoint(rng, 2);
      EXPECT_EQ(permuted.Evaluate(x), m.Evaluate(x));
    }
  }
}

TEST(ModelPropertyTest, LipschitzContinuity) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const PiecewiseModel m = RandomPwaModel(3, 3, 2, 200 + trial);
    const double lip = LipschitzBound(m);
    for (int s = 0; s < 50; ++s) {
      const auto a = RandomPoint(rng, 3);
      const auto b = RandomPoint(rng, 3);
      double dist = 0.0;
      for (int j = 0; j < 3; ++j) dist += (a[j] - b[j]) * (a[j] - b[j]);
      dist = std::sqrt(dist);
      EXPECT_LE(std::fabs(m.Evaluate(a) - m.Evaluate(b)), lip * dist * (1.0 + 1e-12) + 1e-12);
    }
  }
}

TEST(ModelPropertyTest, ValueMatchesActiveSegments) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const PiecewiseModel m = RandomPwaModel(2, 3, 3, 300 + trial);
    for (int s = 0; s < 30; ++s) {
      const auto x = RandomPoint(rng, 2);
      const auto active = m.ActiveSegments(x);
      const double expected = m.VSegments(x)[active.v_row] - m.WSegments(x)[active.w_row];
      EXPECT_EQ(m.Evaluate(x), expected);
    }
  }
}

TEST(ModelPropertyTest, DuplicateRowDoesNotChangeValue) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const PiecewiseModel m = RandomPwaModel(2, 3, 2, 400 + trial);
    RowMatrix v(4, m.v().cols());
    v.topRows(3) = m.v();
    v.row(3) = m.v().row(trial % 3);
    const PiecewiseModel dup(v, m.w(), m.g(), m.h());
    for (int s = 0; s < 30; ++s) {
      const auto x = RandomPoint(rng, 2);
      EXPECT_EQ(dup.Evaluate(x), m.Evaluate(x));
    }
  }
}

TEST(ModelPropertyTest, MseIsBoundedBySquaredMaxError) {
  std::mt19937_64 rng(15);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    const PiecewiseModel m = RandomPwaModel(2, 2, 2, 500 + trial);
    RowMatrix x(25, 2);
    Eigen::VectorXd y(25);
    for (int i = 0; i < 25; ++i) {
      const auto p = RandomPoint(rng, 2);
      x(i, 0) = p[0];
      x(i, 1) = p[1];
      y[i] = normal(rng);
    }
    const FitMetrics f = ComputeFitMetrics(m, Dataset(x, y));
    EXPECT_TRUE(std::isfinite(f.mse));
    EXPECT_TRUE(std::isfinite(f.e_max));
    EXPECT_LE(f.mse, f.e_max * f.e_max * (1.0 + 1e-12));
  }
}

}  // namespace
}  // namespace pwreg
