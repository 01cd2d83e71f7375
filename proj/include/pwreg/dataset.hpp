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
#include <vector>

#include <Eigen/Dense>

namespace pwreg {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Samples (x_i, y_i), x_i in R^n, optionally with a cluster label per point.
class Dataset {
 public:
  Dataset() = default;

  /// Validates: rows of x match y, n >= 1 (unless empty), all values finite,
  /// labels (if any) cover every cluster index in [0, K) at least once.
  Dataset(RowMatrix x, Eigen::VectorXd y,
          std::optional<std::vector<int>> labels = std::nullopt);

  int size() const { return static_cast<int>(y_.size()); }
  bool empty() const { return y_.size() == 0; }
  int dimension() const { return static_cast<int>(x_.cols()); }

  const RowMatrix& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  std::span<const double> point(int i) const {
    return {x_.row(i).data(), static_cast<std::size_t>(x_.cols())};
  }
  double target(int i) const { return y_[i]; }

  bool has_labels() const { return labels_.has_value(); }
  const std::vector<int>& labels() const;
  int num_clusters() const { return num_clusters_; }

  /// Copy with labels replaced.
  Dataset WithLabels(std::vector<int> labels) const;
  Dataset WithoutLabels() const;

 private:
  RowMatrix x_;
  Eigen::VectorXd y_;
  std::optional<std::vector<int>> labels_;
  int num_clusters_ = 0;
};

}  // namespace pwreg
