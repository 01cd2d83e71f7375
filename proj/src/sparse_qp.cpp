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

// Sparse Mehrotra predictor-corrector on
//   minimize 1/2 z'Qz + c'z  s.t.  Gz + s = h, s >= 0, Ez = f
// after fixed variables are substituted out. Slacks are eliminated, leaving
// the quasi-definite augmented system
//   [Q    G'          E'] [dz  ]
//   [G   -S/Lambda    0 ] [dlam]
//   [E    0           0 ] [dnu ]
// which is regularized and factored by a sparse LDL' with AMD ordering. The
// augmented form avoids G' (Lambda/S) G, whose scaling spreads over many
// orders of magnitude near the solution when big-M rows are present.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/SparseCholesky>

#include "pwreg/error.hpp"
#include "pwreg/qp_solver.hpp"

namespace pwreg {
namespace {

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower,
                                   Eigen::AMDOrdering<int>>;

// Initial regularization; raised by kRegularizationGrowth (up to
// kMaxRegularization) when a factorization hits a zero pivot.
constexpr double kRegularization = 1e-10;
constexpr double kRegularizationGrowth = 100.0;
constexpr double kMaxRegularization = 1e-4;
// Iterative refinement against the unregularized system stops after this many
// steps or once the residual stops decreasing.
constexpr int kRefinementSteps = 10;
// Accepted when the iteration stalls short of the requested tolerance.
constexpr double kAcceptableError = 1e-8;
constexpr double kStepFraction = 0.995;
// Iterations without a tenfold improvement of the best error after which an
// acceptable iterate is returned.
constexpr int kStallIterations = 5;

double NormInf(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

double MaxStep(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double a = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) a = std::min(a, -v[i] / dv[i]);
  }
  return a;
}

// Columns of `a` restricted to the free variables; the fixed part moves to
// the right-hand side.
SparseMatrix RestrictColumns(const SparseMatrix& a, const std::vector<int>& position,
                             int n_free) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (int j = 0; j < a.outerSize(); ++j) {
    if (position[j] < 0) continue;
    for (SparseMatrix::InnerIterator it(a, j); it; ++it) {
      t.emplace_back(static_cast<int>(it.row()), position[j], it.value());
    }
  }
  SparseMatrix out(a.rows(), n_free);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace

QpSolution SolveQpSparse(const QuadraticProgram& qp, double tolerance, int max_iter) {
  qp.Validate();
  const int n_all = qp.num_variables();
  const int m_in = qp.num_inequalities();
  const int m_eq = qp.num_equalities();

  std::vector<int> free_vars;
  std::vector<int> position(n_all, -1);
  Eigen::VectorXd z_fixed = Eigen::VectorXd::Zero(n_all);
  for (int j = 0; j < n_all; ++j) {
    if (qp.lower[j] == qp.upper[j]) {
      z_fixed[j] = qp.lower[j];
    } else {
      position[j] = static_cast<int>(free_vars.size());
      free_vars.push_back(j);
    }
  }
  const int n = static_cast<int>(free_vars.size());

  // Q restricted to free rows and columns; c absorbs the fixed coupling.
  const Eigen::VectorXd q_fixed = qp.q * z_fixed;
  SparseMatrix q;
  {
    std::vector<Triplet> t;
    for (int j = 0; j < n_all; ++j) {
      if (position[j] < 0) continue;
      for (SparseMatrix::InnerIterator it(qp.q, j); it; ++it) {
        const int r = position[it.row()];
        if (r >= 0) t.emplace_back(r, position[j], it.value());
      }
    }
    q.resize(n, n);
    q.setFromTriplets(t.begin(), t.end());
  }
  Eigen::VectorXd c(n);
  for (int a = 0; a < n; ++a) c[a] = qp.c[free_vars[a]] + q_fixed[free_vars[a]];

  // Inequality block: original rows, then upper bounds, then lower bounds.
  std::vector<int> upper_rows;
  std::vector<int> lower_rows;
  for (int a = 0; a < n; ++a) {
    if (std::isfinite(qp.upper[free_vars[a]])) upper_rows.push_back(a);
    if (std::isfinite(qp.lower[free_vars[a]])) lower_rows.push_back(a);
  }
  const int m = m_in + static_cast<int>(upper_rows.size() + lower_rows.size());
  SparseMatrix g;
  Eigen::VectorXd h(m);
  {
    const SparseMatrix a_in = RestrictColumns(qp.a_ineq, position, n);
    std::vector<Triplet> t;
    for (int j = 0; j < a_in.outerSize(); ++j) {
      for (SparseMatrix::InnerIterator it(a_in, j); it; ++it) {
        t.emplace_back(static_cast<int>(it.row()), j, it.value());
      }
    }
    if (m_in > 0) h.head(m_in) = qp.b_ineq - qp.a_ineq * z_fixed;
    int row = m_in;
    for (int a : upper_rows) {
      t.emplace_back(row, a, 1.0);
      h[row++] = qp.upper[free_vars[a]];
    }
    for (int a : lower_rows) {
      t.emplace_back(row, a, -1.0);
      h[row++] = -qp.lower[free_vars[a]];
    }
    g.resize(m, n);
    g.setFromTriplets(t.begin(), t.end());
  }
  const SparseMatrix gt = g.transpose();
  const SparseMatrix e = RestrictColumns(qp.a_eq, position, n);
  const SparseMatrix et = e.transpose();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(m_eq);
  if (m_eq > 0) f = qp.b_eq - qp.a_eq * z_fixed;

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = (h - g * z).cwiseMax(1.0);
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(m_eq);

  const double scale_c = 1.0 + NormInf(c);
  const double scale_h = 1.0 + std::max(NormInf(h), NormInf(f));
  QpStatus status = QpStatus::kIterationLimit;
  int iter = 0;

  double best_err = std::numeric_limits<double>::infinity();
  double stall_ref = best_err;
  int stall = 0;
  Eigen::VectorXd best_z = z;
  Eigen::VectorXd best_lam = lam;
  Eigen::VectorXd best_nu = nu;

  const int k = n + m + m_eq;
  // Constant part of the augmented matrix; the (2,2) block is refreshed
  // every iteration through `diag_pos`.
  std::vector<Triplet> base;
  base.reserve(static_cast<std::size_t>(q.nonZeros() + 2 * g.nonZeros() + 2 * e.nonZeros() + k));
  for (int j = 0; j < q.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(q, j); it; ++it) {
      base.emplace_back(static_cast<int>(it.row()), j, it.value());
    }
  }
  for (int j = 0; j < g.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(g, j); it; ++it) {
      base.emplace_back(n + static_cast<int>(it.row()), j, it.value());
      base.emplace_back(j, n + static_cast<int>(it.row()), it.value());
    }
  }
  for (int j = 0; j < e.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(e, j); it; ++it) {
      base.emplace_back(n + m + static_cast<int>(it.row()), j, it.value());
      base.emplace_back(j, n + m + static_cast<int>(it.row()), it.value());
    }
  }
  for (int i = 0; i < k; ++i) base.emplace_back(i, i, 0.0);
  SparseMatrix kkt(k, k);
  kkt.setFromTriplets(base.begin(), base.end());
  kkt.makeCompressed();
  std::vector<double*> diag_pos(k);
  for (int i = 0; i < k; ++i) diag_pos[i] = &kkt.coeffRef(i, i);
  SparseMatrix kkt_reg = kkt;
  std::vector<double*> diag_pos_reg(k);
  for (int i = 0; i < k; ++i) diag_pos_reg[i] = &kkt_reg.coeffRef(i, i);
  std::vector<double> q_diag(n, 0.0);
  for (int i = 0; i < n; ++i) q_diag[i] = q.coeff(i, i);
  Ldlt ldlt;
  ldlt.analyzePattern(kkt_reg);

  for (iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd qz = q * z;
    const Eigen::VectorXd gtl = gt * lam;
    const Eigen::VectorXd etn = et * nu;
    const Eigen::VectorXd r_d = qz + c + gtl + etn;
    const Eigen::VectorXd r_e = e * z - f;
    const Eigen::VectorXd r_i = g * z + s - h;
    const double mu = m > 0 ? s.dot(lam) / m : 0.0;
    const double obj = 0.5 * z.dot(qz) + c.dot(z);
    // Relative to the largest term of the sum: with big-M rows G'lambda is
    // much larger than c and bounds the attainable accuracy.
    const double scale_d = std::max({scale_c, NormInf(qz), NormInf(gtl), NormInf(etn)});
    const double err = std::max({NormInf(r_d) / scale_d,
                                 std::max(NormInf(r_e), NormInf(r_i)) / scale_h,
                                 m * mu / (1.0 + std::fabs(obj))});
    if (!std::isfinite(err)) break;
    if (err < best_err) {
      best_err = err;
      best_z = z;
      best_lam = lam;
      best_nu = nu;
    }
    if (err <= tolerance) {
      status = QpStatus::kOptimal;
      break;
    }
    if (best_err < 0.1 * stall_ref) {
      stall_ref = best_err;
      stall = 0;
    } else if (++stall >= kStallIterations && best_err <= kAcceptableError) {
      break;
    }

    const Eigen::VectorXd s_over_l = s.cwiseQuotient(lam);
    for (int i = 0; i < n; ++i) *diag_pos[i] = q_diag[i];
    for (int i = 0; i < m; ++i) *diag_pos[n + i] = -s_over_l[i];
    for (int i = 0; i < m_eq; ++i) *diag_pos[n + m + i] = 0.0;
    bool factored = false;
    for (double reg = kRegularization; reg <= kMaxRegularization; reg *= kRegularizationGrowth) {
      for (int i = 0; i < k; ++i) *diag_pos_reg[i] = *diag_pos[i] + (i < n ? reg : -reg);
      ldlt.factorize(kkt_reg);
      if (ldlt.info() == Eigen::Success) {
        factored = true;
        break;
      }
    }
    if (!factored) break;

    const auto direction = [&](const Eigen::VectorXd& r_c, Eigen::VectorXd* dz,
                               Eigen::VectorXd* ds, Eigen::VectorXd* dl,
                               Eigen::VectorXd* dn) {
      Eigen::VectorXd rhs(k);
      rhs.head(n) = -r_d;
      rhs.segment(n, m) = -r_i + r_c.cwiseQuotient(lam);
      rhs.tail(m_eq) = -r_e;
      Eigen::VectorXd sol = ldlt.solve(rhs);
      Eigen::VectorXd res = rhs - kkt * sol;
      double res_norm = NormInf(res);
      for (int r = 0; r < kRefinementSteps && res_norm > 0.0; ++r) {
        const Eigen::VectorXd next = sol + ldlt.solve(res);
        const Eigen::VectorXd next_res = rhs - kkt * next;
        const double next_norm = NormInf(next_res);
        if (!(next_norm < res_norm)) break;
        sol = next;
        res = next_res;
        res_norm = next_norm;
      }
      *dz = sol.head(n);
      *dl = sol.segment(n, m);
      *dn = sol.tail(m_eq);
      *ds = -(r_c + s.cwiseProduct(*dl)).cwiseQuotient(lam);
    };

    Eigen::VectorXd dz;
    Eigen::VectorXd ds;
    Eigen::VectorXd dl;
    Eigen::VectorXd dn;
    direction(s.cwiseProduct(lam), &dz, &ds, &dl, &dn);
    const double a_aff = std::min(MaxStep(s, ds), MaxStep(lam, dl));
    double sigma = 0.0;
    if (m > 0) {
      const double mu_aff = (s + a_aff * ds).dot(lam + a_aff * dl) / m;
      sigma = std::pow(mu_aff / std::max(mu, 1e-300), 3.0);
    }
    const Eigen::VectorXd r_c = s.cwiseProduct(lam) + ds.cwiseProduct(dl) -
                                Eigen::VectorXd::Constant(m, sigma * mu);
    direction(r_c, &dz, &ds, &dl, &dn);
    const double a = std::min(1.0, kStepFraction * std::min(MaxStep(s, ds), MaxStep(lam, dl)));
    z += a * dz;
    s += a * ds;
    lam += a * dl;
    nu += a * dn;
  }
  if (status != QpStatus::kOptimal) {
    z = best_z;
    lam = best_lam;
    nu = best_nu;
    if (best_err <= kAcceptableError) status = QpStatus::kOptimal;
  }

  QpSolution out;
  out.z = z_fixed;
  for (int a = 0; a < n; ++a) out.z[free_vars[a]] = z[a];
  out.objective = qp.Objective(out.z);
  out.status = status;
  out.iterations = iter;

  // Multipliers in the QpSolution::y layout.
  std::vector<int> bounded;
  for (int j = 0; j < n_all; ++j) {
    if (std::isfinite(qp.lower[j]) || std::isfinite(qp.upper[j])) bounded.push_back(j);
  }
  out.y = Eigen::VectorXd::Zero(m_in + m_eq + static_cast<Eigen::Index>(bounded.size()));
  out.y.head(m_in) = lam.head(m_in);
  out.y.segment(m_in, m_eq) = nu;
  Eigen::VectorXd bound_mult = Eigen::VectorXd::Zero(n_all);
  int row = m_in;
  for (int a : upper_rows) bound_mult[free_vars[a]] += lam[row++];
  for (int a : lower_rows) bound_mult[free_vars[a]] -= lam[row++];
  Eigen::VectorXd stat = qp.q * out.z + qp.c;
  if (m_in > 0) stat += qp.a_ineq.transpose() * out.y.head(m_in);
  if (m_eq > 0) stat += qp.a_eq.transpose() * nu;
  for (int j = 0; j < n_all; ++j) {
    if (position[j] < 0) bound_mult[j] = -stat[j];
  }
  for (std::size_t b = 0; b < bounded.size(); ++b) {
    out.y[m_in + m_eq + static_cast<Eigen::Index>(b)] = bound_mult[bounded[b]];
  }

  const Eigen::VectorXd full_stat = stat + bound_mult;
  const Eigen::VectorXd qz = qp.q * out.z;
  out.dual_residual = NormInf(full_stat) / std::max({1.0, NormInf(qz), NormInf(qp.c)});
  out.primal_residual = qp.MaxViolation(out.z) / scale_h;
  return out;
}

}  // namespace pwreg
