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


// Mixed-integer encoding of y = Phi(x) for a trained model with affine
// feature maps, for use inside other optimization problems:
//   V_k g(x) <= alpha,  alpha - V_k g(x) + M d_k <= M,  sum_k d_k = 1
//   W_l h(x) <= beta,   beta - W_l h(x) + M g_l <= M,   sum_l g_l = 1
//   y - alpha + beta = 0,  x within the box.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pwreg/model.hpp"
#include "pwreg/program.hpp"

namespace pwreg {

struct MiEmbedding {
  MixedIntegerProgram program;  // zero objective
  int n = 0;
  int p1 = 0;
  int p2 = 0;
  double big_m = 0.0;
  // Variable indices inside program.base.
  int x_offset = 0;
  int y_index = 0;
  int alpha_index = 0;
  int beta_index = 0;
  int delta_offset = 0;
  int gamma_offset = 0;
};

/// Smallest big-M valid over the whole box, plus one: the largest spread
/// max_k hi_k - min_k lo_k of either max term, where [lo_k, hi_k] is the
/// range of segment k over the box.
double EmbeddingBigM(const PiecewiseModel& model, const Eigen::VectorXd& x_lower,
                     const Eigen::VectorXd& x_upper);

/// Throws kUnsupportedFeature for non-affine feature maps, kInvalidDimension
/// for box/model mismatch, kInvalidConfig for an empty or non-finite box or a
/// non-positive big-M.
MiEmbedding EmbedModel(const PiecewiseModel& model, const Eigen::VectorXd& x_lower,
                       const Eigen::VectorXd& x_upper,
                       std::optional<double> big_m = std::nullopt);

/// Every y admitted by the embedding at a fixed x, one entry per feasible
/// binary pattern (alpha, beta are determined by the pattern). Feasibility is
/// checked to `tolerance`.
std::vector<double> EnumerateOutputs(const MiEmbedding& embedding,
                                     std::span<const double> x,
                                     double tolerance = 1e-9);

}  // namespace pwreg
