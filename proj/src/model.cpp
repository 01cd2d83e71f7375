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

#include "pwreg/model.hpp"

#include <cmath>
#include <string>

#include "pwreg/error.hpp"
#include "pwreg/kernels.hpp"

namespace pwreg {
namespace {

Eigen::VectorXd RowValues(const RowMatrix& m, const Eigen::VectorXd& features) {
  const auto& k = kernels::Active();
  Eigen::VectorXd out(m.rows());
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    out[j] = k.dot(m.row(j).data(), features.data(),
                   static_cast<std::size_t>(features.size()));
  }
  return out;
}

int ArgMax(const Eigen::VectorXd& values) {
  int best = 0;
  for (int j = 1; j < values.size(); ++j) {
    if (values[j] > values[best]) best = j;
  }
  return best;
}

}  // namespace

PiecewiseModel::PiecewiseModel(RowMatrix v, RowMatrix w, FeatureMap g,
                               std::optional<FeatureMap> h)
    : v_(std::move(v)), w_(std::move(w)), g_(std::move(g)), h_(std::move(h)) {
  Require(v_.rows() >= 1, ErrorKind::kInvalidDimension, "V needs p1 >= 1 rows");
  Require(v_.cols() == g_.size(), ErrorKind::kInvalidDimension,
          "V has " + std::to_string(v_.cols()) + " columns but g has " +
              std::to_string(g_.size()) + " features");
  if (w_.rows() > 0) {
    Require(h_.has_value(), ErrorKind::kInvalidDimension,
            "W has rows but no feature map h");
  }
  if (h_) {
    Require(h_->dimension() == g_.dimension(), ErrorKind::kInvalidDimension,
            "g and h act on different input dimensions");
    Require(w_.rows() == 0 || w_.cols() == h_->size(),
            ErrorKind::kInvalidDimension,
            "W has " + std::to_string(w_.cols()) + " columns but h has " +
                std::to_string(h_->size()) + " features");
  }
  Require(v_.allFinite() && w_.allFinite(), ErrorKind::kNumericInput,
          "model weights must be finite");
}

PiecewiseModel PiecewiseModel::Convex(RowMatrix v, FeatureMap g) {
  return PiecewiseModel(std::move(v), RowMatrix(0, 0), std::move(g), std::nullopt);
}

void PiecewiseModel::CheckInput(std::span<const double> x) const {
  Require(static_cast<int>(x.size()) == dimension(), ErrorKind::kInvalidDimension,
          "input has length " + std::to_string(x.size()) +
              ", model expects " + std::to_string(dimension()));
}

Eigen::VectorXd PiecewiseModel::VSegments(std::span<const double> x) const {
  CheckInput(x);
  return RowValues(v_, g_.Evaluate(x));
}

Eigen::VectorXd PiecewiseModel::WSegments(std::span<const double> x) const {
  CheckInput(x);
  if (p2() == 0) return Eigen::VectorXd(0);
  return RowValues(w_, h_->Evaluate(x));
}

double PiecewiseModel::Evaluate(std::span<const double> x) const {
  const Eigen::VectorXd a = VSegments(x);
  double value = a.maxCoeff();
  if (p2() > 0) value -= WSegments(x).maxCoeff();
  return value;
}

PiecewiseModel::Active PiecewiseModel::ActiveSegments(
    std::span<const double> x) const {
  Active active{ArgMax(VSegments(x)), -1};
  if (p2() > 0) active.w_row = ArgMax(WSegments(x));
  return active;
}

FitMetrics ComputeFitMetrics(const PiecewiseModel& model, const Dataset& data) {
  Require(!data.empty(), ErrorKind::kEmptyDataset, "fit metrics need data");
  Require(data.dimension() == model.dimension(), ErrorKind::kInvalidDimension,
          "dataset dimension " + std::to_string(data.dimension()) +
              " does not match model dimension " +
              std::to_string(model.dimension()));
  FitMetrics m;
  m.n_points = data.size();
  double sum = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    const double r = data.target(i) - model.Evaluate(data.point(i));
    sum += r * r;
    m.e_max = std::max(m.e_max, std::fabs(r));
  }
  m.mse = sum / data.size();
  return m;
}

double LipschitzBound(const PiecewiseModel& model) {
  const AffineParts g = model.g().Affine();
  double bound = (model.v() * g.linear).rowwise().norm().maxCoeff();
  if (model.p2() > 0) {
    const AffineParts h = model.h()->Affine();
    bound += (model.w() * h.linear).rowwise().norm().maxCoeff();
  }
  return bound;
}

}  // namespace pwreg
