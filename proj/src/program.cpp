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

#include "pwreg/program.hpp"

#include <algorithm>
#include <cmath>

#include "pwreg/error.hpp"

namespace pwreg {

double QuadraticProgram::Objective(const Eigen::VectorXd& z) const {
  return 0.5 * z.dot(q * z) + c.dot(z) + constant;
}

double QuadraticProgram::MaxViolation(const Eigen::VectorXd& z) const {
  double v = 0.0;
  if (num_inequalities() > 0) {
    v = std::max(v, (a_ineq * z - b_ineq).cwiseMax(0.0).maxCoeff());
  }
  if (num_equalities() > 0) {
    v = std::max(v, (a_eq * z - b_eq).cwiseAbs().maxCoeff());
  }
  if (num_variables() > 0) {
    v = std::max(v, (lower - z).cwiseMax(0.0).maxCoeff());
    v = std::max(v, (z - upper).cwiseMax(0.0).maxCoeff());
  }
  return v;
}

void QuadraticProgram::Validate() const {
  const auto n = c.size();
  Require(q.rows() == n && q.cols() == n, ErrorKind::kInvalidDimension,
          "Q must be n x n");
  Require(a_ineq.cols() == n && a_ineq.rows() == b_ineq.size(),
          ErrorKind::kInvalidDimension, "inequality system shape mismatch");
  Require(a_eq.cols() == n && a_eq.rows() == b_eq.size(),
          ErrorKind::kInvalidDimension, "equality system shape mismatch");
  Require(lower.size() == n && upper.size() == n, ErrorKind::kInvalidDimension,
          "bound vectors must have one entry per variable");
  Require(c.allFinite() && b_ineq.allFinite() && b_eq.allFinite() &&
              std::isfinite(constant),
          ErrorKind::kNumericInput, "program data must be finite");
  for (Eigen::Index i = 0; i < n; ++i) {
    Require(!std::isnan(lower[i]) && !std::isnan(upper[i]) &&
                lower[i] <= upper[i],
            ErrorKind::kNumericInput, "variable bounds must satisfy lower <= upper");
  }
  const SparseMatrix asym = q - SparseMatrix(q.transpose());
  for (int k = 0; k < asym.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(asym, k); it; ++it) {
      Require(std::fabs(it.value()) <= 1e-12, ErrorKind::kNumericInput,
              "Q must be symmetric");
    }
  }
}

int MixedIntegerProgram::num_free_binaries() const {
  int free = 0;
  for (int b : binaries) {
    if (base.lower[b] < base.upper[b]) ++free;
  }
  return free;
}

int MixedIntegerProgram::PropagateAssignmentRows() {
  int fixed = 0;
  for (const auto& row : assignment_rows) {
    int open = -1;
    int n_open = 0;
    bool has_one = false;
    for (int b : row) {
      if (base.lower[b] >= 1.0) has_one = true;
      if (base.lower[b] < base.upper[b]) {
        open = b;
        ++n_open;
      }
    }
    if (!has_one && n_open == 1) {
      base.lower[open] = 1.0;
      base.upper[open] = 1.0;
      ++fixed;
    } else if (has_one && n_open > 0) {
      for (int b : row) {
        if (base.lower[b] < base.upper[b]) {
          base.upper[b] = 0.0;
          ++fixed;
        }
      }
    }
  }
  return fixed;
}

void MixedIntegerProgram::Validate() const {
  base.Validate();
  std::vector<int> row_count(base.num_variables(), 0);
  for (const auto& row : assignment_rows) {
    for (int b : row) {
      Require(b >= 0 && b < base.num_variables(), ErrorKind::kInvalidDimension,
              "assignment row references a variable out of range");
      ++row_count[b];
    }
  }
  for (int b : binaries) {
    Require(b >= 0 && b < base.num_variables(), ErrorKind::kInvalidDimension,
            "binary index out of range");
    Require(base.lower[b] >= 0.0 && base.upper[b] <= 1.0,
            ErrorKind::kInvalidConfig, "binary bounds must lie in [0, 1]");
    Require(row_count[b] == 1, ErrorKind::kInvalidConfig,
            "every binary must belong to exactly one assignment row");
  }
}

int ProgramBuilder::AddVariable(std::string name, double lower, double upper) {
  names_.push_back(std::move(name));
  lower_.push_back(lower);
  upper_.push_back(upper);
  linear_.push_back(0.0);
  return static_cast<int>(names_.size()) - 1;
}

void ProgramBuilder::AddInequality(std::string name,
                                   std::vector<std::pair<int, double>> terms,
                                   double rhs) {
  const int row = static_cast<int>(ineq_rhs_.size());
  for (const auto& [col, value] : terms) ineq_.emplace_back(row, col, value);
  ineq_rhs_.push_back(rhs);
  ineq_names_.push_back(std::move(name));
}

void ProgramBuilder::AddEquality(std::string name,
                                 std::vector<std::pair<int, double>> terms,
                                 double rhs) {
  const int row = static_cast<int>(eq_rhs_.size());
  for (const auto& [col, value] : terms) eq_.emplace_back(row, col, value);
  eq_rhs_.push_back(rhs);
  eq_names_.push_back(std::move(name));
}

void ProgramBuilder::AddQuadratic(int i, int j, double value) {
  q_.emplace_back(i, j, value);
  if (i != j) q_.emplace_back(j, i, value);
}

void ProgramBuilder::AddLinear(int i, double value) { linear_[i] += value; }

void ProgramBuilder::AddConstant(double value) { constant_ += value; }

void ProgramBuilder::SetBounds(int i, double lower, double upper) {
  lower_[i] = lower;
  upper_[i] = upper;
}

QuadraticProgram ProgramBuilder::Build() && {
  const int n = num_variables();
  QuadraticProgram qp;
  qp.q.resize(n, n);
  qp.q.setFromTriplets(q_.begin(), q_.end());
  qp.c = Eigen::Map<const Eigen::VectorXd>(linear_.data(), n);
  qp.constant = constant_;
  qp.a_ineq.resize(static_cast<int>(ineq_rhs_.size()), n);
  qp.a_ineq.setFromTriplets(ineq_.begin(), ineq_.end());
  qp.b_ineq = Eigen::Map<const Eigen::VectorXd>(ineq_rhs_.data(),
                                                static_cast<Eigen::Index>(ineq_rhs_.size()));
  qp.a_eq.resize(static_cast<int>(eq_rhs_.size()), n);
  qp.a_eq.setFromTriplets(eq_.begin(), eq_.end());
  qp.b_eq = Eigen::Map<const Eigen::VectorXd>(eq_rhs_.data(),
                                              static_cast<Eigen::Index>(eq_rhs_.size()));
  qp.lower = Eigen::Map<const Eigen::VectorXd>(lower_.data(), n);
  qp.upper = Eigen::Map<const Eigen::VectorXd>(upper_.data(), n);
  qp.variable_names = std::move(names_);
  qp.inequality_names = std::move(ineq_names_);
  qp.equality_names = std::move(eq_names_);
  qp.q.makeCompressed();
  qp.a_ineq.makeCompressed();
  qp.a_eq.makeCompressed();
  return qp;
}

}  // namespace pwreg
