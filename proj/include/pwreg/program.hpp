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
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "pwreg/dataset.hpp"

namespace pwreg {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

/// Where the regression variables live inside the solution vector z, plus the
/// data the program was built from (needed to turn a solution back into a
/// model and to check it).
struct ProgramLayout {
  int p1 = 0;
  int r1 = 0;
  int p2 = 0;
  int r2 = 0;
  int n_points = 0;
  // Number of assignment units carrying binaries: points, or clusters when
  // preclustered. Zero for the binary-free QPs.
  int n_units = 0;

  int v_offset = 0;
  int w_offset = 0;
  int alpha_offset = 0;
  int beta_offset = 0;
  int delta_offset = -1;
  int gamma_offset = -1;

  std::vector<int> unit_of_point;
  RowMatrix g_values;  // N x r1
  RowMatrix h_values;  // N x r2
  Eigen::VectorXd targets;
  double big_m = 0.0;  // 0 for the binary-free QPs

  int V(int k, int j) const { return v_offset + k * r1 + j; }
  int W(int k, int j) const { return w_offset + k * r2 + j; }
  int Alpha(int i) const { return alpha_offset + i; }
  int Beta(int i) const { return beta_offset + i; }
  int Delta(int unit, int k) const { return delta_offset + unit * p1 + k; }
  int Gamma(int unit, int k) const { return gamma_offset + unit * p2 + k; }
};

/// minimize 1/2 z'Qz + c'z + constant
/// s.t.     A_ineq z <= b_ineq,  A_eq z = b_eq,  lower <= z <= upper.
/// Q is stored with both triangles.
struct QuadraticProgram {
  SparseMatrix q;
  Eigen::VectorXd c;
  double constant = 0.0;
  SparseMatrix a_ineq;
  Eigen::VectorXd b_ineq;
  SparseMatrix a_eq;
  Eigen::VectorXd b_eq;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  std::vector<std::string> variable_names;
  std::vector<std::string> inequality_names;
  std::vector<std::string> equality_names;

  std::optional<ProgramLayout> layout;

  int num_variables() const { return static_cast<int>(c.size()); }
  int num_inequalities() const { return static_cast<int>(a_ineq.rows()); }
  int num_equalities() const { return static_cast<int>(a_eq.rows()); }

  double Objective(const Eigen::VectorXd& z) const;

  /// Largest violation over inequalities, equalities and bounds.
  double MaxViolation(const Eigen::VectorXd& z) const;

  /// Throws kInvalidDimension on inconsistent shapes and kNumericInput on
  /// non-finite data or an asymmetric Q.
  void Validate() const;
};

/// A QuadraticProgram plus binary variables. Every binary belongs to exactly
/// one assignment row (sum of the row == 1). Binaries fixed through their
/// bounds stay listed in `binaries`.
struct MixedIntegerProgram {
  QuadraticProgram base;
  std::vector<int> binaries;
  std::vector<std::vector<int>> assignment_rows;
  // Binaries fixed to zero by the segment-order symmetry breaking.
  int symmetry_fixings = 0;

  int num_binaries() const { return static_cast<int>(binaries.size()); }
  /// Binaries whose bounds still allow both 0 and 1.
  int num_free_binaries() const;

  /// Fixes the last free binary of an assignment row to 1 once every other
  /// entry of the row is fixed to 0. Returns the number of new fixings.
  int PropagateAssignmentRows();

  void Validate() const;
};

/// Incremental builder used by the formulations.
class ProgramBuilder {
 public:
  int AddVariable(std::string name, double lower, double upper);
  void AddInequality(std::string name, std::vector<std::pair<int, double>> terms,
                     double rhs);
  void AddEquality(std::string name, std::vector<std::pair<int, double>> terms,
                   double rhs);
  void AddQuadratic(int i, int j, double value);  // adds value to Q(i,j) and Q(j,i) when i != j
  void AddLinear(int i, double value);
  void AddConstant(double value);
  void SetBounds(int i, double lower, double upper);
  int num_variables() const { return static_cast<int>(names_.size()); }

  QuadraticProgram Build() &&;

 private:
  std::vector<std::string> names_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> linear_;
  double constant_ = 0.0;
  std::vector<Triplet> q_;
  std::vector<Triplet> ineq_;
  std::vector<double> ineq_rhs_;
  std::vector<std::string> ineq_names_;
  std::vector<Triplet> eq_;
  std::vector<double> eq_rhs_;
  std::vector<std::string> eq_names_;
};

}  // namespace pwreg
