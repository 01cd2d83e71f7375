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


#include "pwreg/oracle.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pwreg/error.hpp"
#include "pwreg/program.hpp"
#include "pwreg/qp_solver.hpp"

namespace pwreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Term {
  int p = 0;
  int r = 0;
  int offset = 0;     // first weight variable
  int aux = 0;        // first alpha/beta variable
  RowMatrix values;   // N x r
};

void AddAssignedTerm(ProgramBuilder& b, const Term& t, const std::vector<int>& assign,
                     double big_m) {
  const int n_points = static_cast<int>(t.values.rows());
  for (int i = 0; i < n_points; ++i) {
    for (int k = 0; k < t.p; ++k) {
      std::vector<std::pair<int, double>> seg;
      for (int j = 0; j < t.r; ++j) seg.emplace_back(t.offset + k * t.r + j, t.values(i, j));
      if (k == assign[i]) {
        auto eq = seg;
        for (auto& e : eq) e.second = -e.second;
        eq.emplace_back(t.aux + i, 1.0);
        b.AddEquality("eq", std::move(eq), 0.0);
        continue;
      }
      auto le = seg;
      le.emplace_back(t.aux + i, -1.0);
      b.AddInequality("env", std::move(le), 0.0);
      auto gap = seg;
      for (auto& e : gap) e.second = -e.second;
      gap.emplace_back(t.aux + i, 1.0);
      b.AddInequality("gap", std::move(gap), big_m);
    }
  }
}

bool Next(std::vector<int>& digits, int base) {
  for (int& d : digits) {
    if (++d < base) return true;
    d = 0;
  }
  return false;
}

}  // namespace

OracleResult BruteForceOracle(const Dataset& data, const FeatureMap& g,
                              const FeatureMap& h, int p1, int p2, double big_m,
                              double ridge_epsilon, std::int64_t max_assignments) {
  Require(!data.empty(), ErrorKind::kEmptyDataset, "oracle needs data");
  Require(p1 >= 1 && p2 >= 0, ErrorKind::kInvalidConfig, "oracle needs p1 >= 1, p2 >= 0");
  Require(big_m > 0.0, ErrorKind::kInvalidConfig, "big-M must be positive");
  const int n_points = data.size();
  double count = std::pow(static_cast<double>(p1), n_points) *
                 (p2 > 0 ? std::pow(static_cast<double>(p2), n_points) : 1.0);
  Require(count <= static_cast<double>(max_assignments), ErrorKind::kBudgetExceeded,
          "oracle enumeration budget exceeded (" + std::to_string(count) + " assignments)");

  Term tv;
  tv.p = p1;
  tv.r = g.size();
  tv.values.resize(n_points, tv.r);
  Term tw;
  tw.p = p2;
  tw.r = p2 > 0 ? h.size() : 0;
  tw.values.resize(n_points, tw.r);
  for (int i = 0; i < n_points; ++i) {
    const Eigen::VectorXd gv = g.Evaluate(data.point(i));
    tv.values.row(i) = gv.transpose();
    if (p2 > 0) tw.values.row(i) = h.Evaluate(data.point(i)).transpose();
  }
  tv.offset = 0;
  tw.offset = p1 * tv.r;
  tv.aux = tw.offset + p2 * tw.r;
  tw.aux = tv.aux + n_points;

  std::vector<int> av(n_points, 0);
  std::vector<int> aw(n_points, 0);
  double best = kInf;
  Eigen::VectorXd best_z;
  std::int64_t evaluated = 0;
  while (true) {
    ProgramBuilder b;
    for (int k = 0; k < tv.aux; ++k) {
      b.AddVariable("w" + std::to_string(k), -kInf, kInf);
      b.AddQuadratic(k, k, 2.0 * ridge_epsilon);
    }
    for (int i = 0; i < n_points; ++i) b.AddVariable("a", -kInf, kInf);
    for (int i = 0; i < n_points; ++i) {
      b.AddVariable("b", p2 > 0 ? -kInf : 0.0, p2 > 0 ? kInf : 0.0);
    }
    for (int i = 0; i < n_points; ++i) {
      const double y = data.target(i);
      const int a = tv.aux + i;
      const int bt = tw.aux + i;
      b.AddQuadratic(a, a, 2.0);
      b.AddQuadratic(bt, bt, 2.0);
      b.AddQuadratic(a, bt, -2.0);
      b.AddLinear(a, -2.0 * y);
      b.AddLinear(bt, 2.0 * y);
      b.AddConstant(y * y);
    }
    AddAssignedTerm(b, tv, av, big_m);
    if (p2 > 0) AddAssignedTerm(b, tw, aw, big_m);
    const QuadraticProgram qp = std::move(b).Build();
    const QpSolution s = SolveQpDense(qp);
    ++evaluated;
    if (s.status == QpStatus::kOptimal && s.objective < best) {
      best = s.objective;
      best_z = s.z;
    }
    if (Next(av, p1)) continue;
    if (p2 > 0 && Next(aw, p2)) continue;
    break;
  }
  Require(best_z.size() > 0, ErrorKind::kNumericInput, "oracle found no solvable assignment");

  RowMatrix v(p1, tv.r);
  RowMatrix w(p2, tw.r);
  for (int k = 0; k < p1; ++k) {
    for (int j = 0; j < tv.r; ++j) v(k, j) = best_z[tv.offset + k * tv.r + j];
  }
  for (int k = 0; k < p2; ++k) {
    for (int j = 0; j < tw.r; ++j) w(k, j) = best_z[tw.offset + k * tw.r + j];
  }
  std::optional<FeatureMap> h_map;
  if (p2 > 0) h_map = h;
  return OracleResult{best, PiecewiseModel(std::move(v), std::move(w), g, std::move(h_map)),
                      evaluated};
}

}  // namespace pwreg
