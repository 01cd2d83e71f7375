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

#include "pwreg/dataset.hpp"

#include <algorithm>
#include <string>

#include "pwreg/error.hpp"

namespace pwreg {

Dataset::Dataset(RowMatrix x, Eigen::VectorXd y,
                 std::optional<std::vector<int>> labels)
    : x_(std::move(x)), y_(std::move(y)), labels_(std::move(labels)) {
  Require(x_.rows() == y_.size(), ErrorKind::kInvalidDimension,
          "x has " + std::to_string(x_.rows()) + " rows but y has " +
              std::to_string(y_.size()) + " entries");
  Require(y_.size() == 0 || x_.cols() >= 1, ErrorKind::kInvalidDimension,
          "points need at least one coordinate");
  Require(x_.allFinite() && y_.allFinite(), ErrorKind::kNumericInput,
          "dataset contains non-finite values");
  if (labels_) {
    Require(static_cast<Eigen::Index>(labels_->size()) == y_.size(),
            ErrorKind::kInvalidDimension, "one cluster label per point required");
    int max_label = -1;
    for (int l : *labels_) {
      Require(l >= 0, ErrorKind::kInvalidConfig, "cluster labels must be >= 0");
      max_label = std::max(max_label, l);
    }
    num_clusters_ = max_label + 1;
    std::vector<char> seen(num_clusters_, 0);
    for (int l : *labels_) seen[l] = 1;
    for (int k = 0; k < num_clusters_; ++k) {
      Require(seen[k] != 0, ErrorKind::kInvalidConfig,
              "cluster " + std::to_string(k) + " has no points");
    }
  }
}

const std::vector<int>& Dataset::labels() const {
  Require(labels_.has_value(), ErrorKind::kInvalidConfig,
          "dataset has no cluster labels");
  return *labels_;
}

Dataset Dataset::WithLabels(std::vector<int> labels) const {
  return Dataset(x_, y_, std::move(labels));
}

Dataset Dataset::WithoutLabels() const { return Dataset(x_, y_); }

}  // namespace pwreg
