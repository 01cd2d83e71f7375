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


// k-means++ seeding followed by Lloyd iterations, on the inputs x only.

#pragma once

#include <cstdint>
#include <vector>

#include "pwreg/dataset.hpp"

namespace pwreg {

struct Clustering {
  std::vector<int> labels;  // one per point, values in [0, K)
  RowMatrix centers;        // K x n, original coordinates
  double inertia = 0.0;     // sum of squared distances to own center
  // Objective after every assignment step of the selected restart, in the
  // (possibly standardized) working coordinates.
  std::vector<double> trace;
  int restart = 0;          // index of the selected restart
};

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
  double shift_tolerance = 1e-10;
  // Scale every coordinate to unit variance before clustering.
  bool standardize = true;
};

/// Best of `restarts` runs by working-space objective, ties to the lowest
/// restart. Every cluster is non-empty. Throws kInvalidConfig when K < 1 or
/// K > N, kEmptyDataset for empty data.
Clustering KMeansPlusPlus(const Dataset& data, int k, std::uint64_t seed,
                          const KMeansOptions& options = {});

}  // namespace pwreg
