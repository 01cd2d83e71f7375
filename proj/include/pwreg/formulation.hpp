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

// Training programs for difference-of-max regression.
//
// Variables, in order: V (p1 x r1, row-major), W (p2 x r2), alpha (N),
// beta (N), then the binaries delta (units x p1) and gamma (units x p2).
// The objective is sum_i (y_i - (alpha_i - beta_i))^2 plus a vanishing ridge
// eps * (||V||_F^2 + ||W||_F^2).
//
// For every point i and segment k the MIQP carries
//   V_k g(x_i) - alpha_i <= 0                      (alpha_i >= every segment)
//   alpha_i - V_k g(x_i) + M delta_uk <= M         (alpha_i == active segment)
// and sum_k delta_uk == 1 per assignment unit u; likewise for W, beta, gamma.
// The unit is the point itself, or its cluster when preclustered.

#pragma once

#include <optional>

#include "pwreg/dataset.hpp"
#include "pwreg/features.hpp"
#include "pwreg/model.hpp"
#include "pwreg/program.hpp"

namespace pwreg {

struct FitConfig {
  int p1 = 1;
  int p2 = 0;
  std::optional<double> big_m;  // nullopt: data-scaled automatic value
  bool symmetry_breaking = true;
  double ridge_epsilon = 1e-9;
};

/// 100 * (max y - min y + max_i ||phi(x_i)||_inf + 1), phi stacking g and
/// (when used) h. Throws kEmptyDataset on empty data.
double AutoBigM(const Dataset& data, const FeatureMap& g, const FeatureMap* h);

/// Number of binaries fixed to zero by the segment-order symmetry breaking
/// for a max term with p segments: (p - 1) + (p - 2) + ... + 1.
int SymmetryFixingCount(int p);

/// Point-wise MIQP. Throws kEmptyDataset, or kInvalidConfig when p1 < 1,
/// p2 < 0, p_j > N, or the big-M is not positive.
MixedIntegerProgram BuildMiqp(const Dataset& data, const FeatureMap& g,
                              const FeatureMap& h, const FitConfig& cfg);

/// Cluster-wise MIQP: one delta/gamma vector per cluster of `data.labels()`.
/// With symmetry breaking the fixings are indexed by cluster.
MixedIntegerProgram BuildClusteredMiqp(const Dataset& data, const FeatureMap& g,
                                       const FeatureMap& h, const FitConfig& cfg);

/// Binary-free QP with one segment per point (p1 = p2 = N).
QuadraticProgram BuildQpFull(const Dataset& data, const FeatureMap& g,
                             const FeatureMap& h, double ridge_epsilon = 1e-9);

/// Binary-free QP with one segment per cluster (p1 = p2 = K).
QuadraticProgram BuildQpClustered(const Dataset& data, const FeatureMap& g,
                                  const FeatureMap& h,
                                  double ridge_epsilon = 1e-9);

struct ExtractedModel {
  PiecewiseModel model;
  // Largest |alpha_i - max V g(x_i)| / |beta_i - max W h(x_i)|.
  double consistency_violation = 0.0;
  // Smallest M - (max_k V_k g(x_i) - min_k V_k g(x_i)) over points and both
  // max terms; a value near zero means a big-M row is binding.
  double big_m_slack = 0.0;
  // Set when either quantity above is beyond tolerance: the big-M restricted
  // the fit (or the solution is inconsistent with Phi).
  bool big_m_warning = false;
  // sum_i (y_i - Phi(x_i))^2 of the extracted model.
  double loss = 0.0;
};

/// Reads V and W out of a solution of one of the programs above.
/// Throws kInvalidConfig if the program carries no layout.
ExtractedModel ExtractModel(const QuadraticProgram& program,
                            const Eigen::VectorXd& solution, const FeatureMap& g,
                            const FeatureMap& h, double tolerance = 1e-6);

}  // namespace pwreg
