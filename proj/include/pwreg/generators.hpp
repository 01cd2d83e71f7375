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


// Synthetic datasets: inputs on a regular grid or drawn uniformly from a box,
// targets from a known model plus optional Gaussian noise.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pwreg/dataset.hpp"
#include "pwreg/model.hpp"

namespace pwreg {

/// 1 - |x_1 - 1|: p1 = 1, p2 = 2 with affine maps.
PiecewiseModel TentModel(int n = 1);
/// |x_1|: p1 = 2, p2 = 0.
PiecewiseModel AbsModel(int n = 1);
/// Weights drawn from N(0, 1), affine maps in n dimensions.
PiecewiseModel RandomPwaModel(int n, int p1, int p2, std::uint64_t seed);
/// One-dimensional model with sinusoidal segments,
/// g = (1, x, sin(0.2 x)), h = (1, x), p1 = p2 = 3.
PiecewiseModel SinPiecewiseModel();

struct GeneratorConfig {
  // pwa-tent, abs, random-pwa, sin-piecewise or model (uses `model`).
  std::string name = "abs";
  int n = 1;
  std::vector<double> lower;  // one entry, or n
  std::vector<double> upper;
  // Points per coordinate for a grid; empty means uniform sampling.
  std::vector<int> grid;
  int samples = 0;  // uniform sampling only
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  int p1 = 2;  // random-pwa only
  int p2 = 2;
  std::optional<std::uint64_t> model_seed;  // random-pwa, defaults to seed
  std::optional<PiecewiseModel> model;
};

/// Grid points, last coordinate varying fastest. A coordinate with a single
/// grid point sits at its lower bound.
RowMatrix GridPoints(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                     const std::vector<int>& counts);

/// The model a configuration samples from.
PiecewiseModel GeneratorModel(const GeneratorConfig& cfg);

/// Throws kInvalidConfig on unknown names or inconsistent sizes.
Dataset Generate(const GeneratorConfig& cfg);

}  // namespace pwreg
