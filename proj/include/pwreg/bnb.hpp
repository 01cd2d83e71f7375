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

// Branch and bound over the binaries of a MixedIntegerProgram.
//
// Nodes are explored depth-first until the first incumbent, then best-bound
// first (ties: deeper node, then lower id). Each node solves the relaxation
// with binaries in [0, 1], runs a rounding heuristic (argmax segment per
// assignment unit, then the QP with all binaries fixed) and branches on the
// most fractional binary.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "pwreg/program.hpp"
#include "pwreg/qp_solver.hpp"

namespace pwreg {

enum class BnbStatus { kOptimal, kGapLimit, kNodeLimit, kTimeLimit };

std::string_view ToString(BnbStatus status);

struct BnbEvent {
  std::int64_t node = 0;
  int depth = 0;
  double bound = 0.0;      // relaxation bound of this node
  double incumbent = 0.0;  // +inf while none is known
  // Largest min(b, 1 - b) over the binaries of the node's relaxation.
  double fractionality = 0.0;
};

/// One JSON object, no trailing newline.
std::string FormatEvent(const BnbEvent& event);

struct BnbConfig {
  double rel_gap = 1e-6;
  double abs_gap = 1e-9;
  double int_tol = 1e-6;
  std::int64_t node_limit = 1000000;
  double time_limit_seconds = std::numeric_limits<double>::infinity();
  // Results are reproducible run to run only with a single worker.
  int workers = 1;
  QpSettings qp;
  std::function<void(const BnbEvent&)> on_node;  // called under a lock
};

struct BnbResult {
  QpSolution incumbent;
  bool has_incumbent = false;
  double bound = 0.0;
  double gap = 0.0;
  std::int64_t nodes_explored = 0;
  BnbStatus status = BnbStatus::kOptimal;
};

/// Throws kInvalidConfig for negative tolerances or workers < 1.
BnbResult SolveMiqp(const MixedIntegerProgram& mip, const BnbConfig& cfg = {});

/// Relaxation of `mip` with binaries fixed per `fixing` (one entry per element
/// of mip.binaries: -1 free, 0 or 1 fixed).
QpSolution SolveNodeRelaxation(const MixedIntegerProgram& mip,
                               const std::vector<int>& fixing,
                               const QpSettings& settings = {});

}  // namespace pwreg
