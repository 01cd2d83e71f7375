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

// Convex QP solver: operator splitting (ADMM) on
//   minimize 1/2 x'Px + q'x  s.t.  l <= Cx <= u
// where C stacks the inequality rows, the equality rows and one identity row
// per variable with a finite bound. Problem data are Ruiz-equilibrated; the
// quasi-definite KKT matrix [P + sigma I, C'; C, -diag(1/rho)] is factored
// once per rho with a sparse LDL'. Once the iterates are moderately accurate
// the solver guesses the active set from the duals and solves the reduced
// equality-constrained KKT system ("polish"); an accepted polish gives
// solutions accurate to roughly machine precision times the data scale.

#pragma once

#include <memory>
#include <optional>
#include <string_view>

#include <Eigen/Dense>

#include "pwreg/program.hpp"

namespace pwreg {

enum class QpStatus { kOptimal, kInfeasible, kIterationLimit };

std::string_view ToString(QpStatus status);

struct QpSettings {
  double tol_feas = 1e-8;
  double tol_opt = 1e-8;
  int max_iter = 200000;
  double rho = 0.1;
  double sigma = 1e-6;
  double relaxation = 1.6;
  bool adaptive_rho = true;
  int scaling_iterations = 10;
  bool polish = true;
  int check_interval = 10;
  // Norm growth of the dual iterate that triggers the infeasibility test.
  double divergence_threshold = 1e6;
  double infeasibility_tol = 1e-7;
};

/// Residuals are normalized: primal = max|violation| / max(1, |Cz|, |bounds|),
/// dual = |Qz + c + C'y|_inf / max(1, |Qz|, |c|, |C'y|).
struct QpSolution {
  Eigen::VectorXd z;
  // Multipliers in the order inequalities, equalities, variable bounds
  // (bound multipliers only for variables with a finite bound).
  Eigen::VectorXd y;
  double objective = 0.0;
  QpStatus status = QpStatus::kIterationLimit;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  // Magnitude of the Farkas-type certificate when status == kInfeasible.
  double infeasibility_certificate = 0.0;
  int iterations = 0;
  bool polished = false;
};

/// Reusable solver workspace. Variable bounds may be changed between solves
/// (the branch-and-bound nodes differ only in bounds). An instance must not be
/// used from two threads at once.
class QpSolver {
 public:
  QpSolver(const QuadraticProgram& qp, QpSettings settings = {});
  ~QpSolver();
  QpSolver(QpSolver&&) noexcept;
  QpSolver& operator=(QpSolver&&) noexcept;

  /// New bounds must keep the finiteness pattern of the bounds the solver was
  /// built with (kInvalidConfig otherwise).
  void SetVariableBounds(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

  /// Primal (and optionally dual, in QpSolution::y layout) starting point.
  void WarmStart(const Eigen::VectorXd& z, const Eigen::VectorXd* y = nullptr);

  QpSolution Solve();

  const QpSettings& settings() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper.
QpSolution SolveQp(const QuadraticProgram& qp, const QpSettings& settings = {});

/// Dense primal-dual interior point method (Mehrotra predictor-corrector).
/// Independent of the ADMM path; intended for small problems (a few hundred
/// variables) such as the brute-force oracle's subproblems.
QpSolution SolveQpDense(const QuadraticProgram& qp, double tolerance = 1e-10,
                        int max_iter = 200);

/// The same interior point method with a sparse LDL' factorization of the
/// reduced Newton system. Suited to programs with thousands of variables and
/// big-M rows, where the splitting method converges slowly.
QpSolution SolveQpSparse(const QuadraticProgram& qp, double tolerance = 1e-10,
                         int max_iter = 200);

}  // namespace pwreg
