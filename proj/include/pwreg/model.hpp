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

#pragma once

#include <optional>
#include <span>

#include "pwreg/dataset.hpp"
#include "pwreg/features.hpp"

namespace pwreg {

/// Phi(x) = max_k V_k g(x) - max_l W_l h(x).
///
/// W may have zero rows (the convex case); the second max is then 0 and h is
/// optional. Weights are dense row-major, p and r are expected to be small.
class PiecewiseModel {
 public:
  /// Throws kInvalidDimension when shapes disagree with the feature maps and
  /// kNumericInput for non-finite weights.
  PiecewiseModel(RowMatrix v, RowMatrix w, FeatureMap g,
                 std::optional<FeatureMap> h);

  /// Convex model max_k V_k g(x).
  static PiecewiseModel Convex(RowMatrix v, FeatureMap g);

  const RowMatrix& v() const { return v_; }
  const RowMatrix& w() const { return w_; }
  const FeatureMap& g() const { return g_; }
  const std::optional<FeatureMap>& h() const { return h_; }
  int p1() const { return static_cast<int>(v_.rows()); }
  int p2() const { return static_cast<int>(w_.rows()); }
  int dimension() const { return g_.dimension(); }

  double Evaluate(std::span<const double> x) const;

  struct Active {
    int v_row;
    int w_row;  // -1 when p2 == 0
    friend bool operator==(const Active&, const Active&) = default;
  };
  /// Argmax row of each max term, ties to the lowest index.
  Active ActiveSegments(std::span<const double> x) const;

  /// Segment values V g(x) and W h(x).
  Eigen::VectorXd VSegments(std::span<const double> x) const;
  Eigen::VectorXd WSegments(std::span<const double> x) const;

 private:
  void CheckInput(std::span<const double> x) const;

  RowMatrix v_;
  RowMatrix w_;
  FeatureMap g_;
  std::optional<FeatureMap> h_;
};

struct FitMetrics {
  double mse = 0.0;
  double e_max = 0.0;
  int n_points = 0;
};

/// Throws kEmptyDataset for empty data, kInvalidDimension on a mismatch.
FitMetrics ComputeFitMetrics(const PiecewiseModel& model, const Dataset& data);

/// max_k ||V_{k,x}||_2 + max_l ||W_{l,x}||_2, where V_{k,x} is the gradient of
/// segment k. Valid Lipschitz constant of Phi w.r.t. the Euclidean norm.
/// Requires affine feature maps (kUnsupportedFeature otherwise).
double LipschitzBound(const PiecewiseModel& model);

}  // namespace pwreg
