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


// Exhaustive reference solver for tiny instances: every assignment of each
// point to one V segment and one W segment is tried, and the convex QP of
// that assignment is solved with the dense interior point method.

#pragma once

#include <cstdint>

#include "pwreg/dataset.hpp"
#include "pwreg/features.hpp"
#include "pwreg/model.hpp"

namespace pwreg {

struct OracleResult {
  double objective = 0.0;
  PiecewiseModel model;
  std::int64_t assignments = 0;
};

/// Minimum over all assignments of
///   sum_i (y_i - alpha_i + beta_i)^2 + ridge * (|V|^2 + |W|^2)
/// s.t. alpha_i = V_{k_i} g_i, V_k g_i <= alpha_i, alpha_i - V_k g_i <= M
/// (and likewise for W, beta). h is ignored when p2 == 0.
/// Throws kBudgetExceeded when p1^N * p2^N > max_assignments.
OracleResult BruteForceOracle(const Dataset& data, const FeatureMap& g,
                              const FeatureMap& h, int p1, int p2, double big_m,
                              double ridge_epsilon = 1e-9,
                              std::int64_t max_assignments = 1000000);

}  // namespace pwreg
