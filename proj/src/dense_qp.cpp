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

// Mehrotra predictor-corrector on
//   minimize 1/2 z'Qz + c'z  s.t.  Gz + s = h, s >= 0, Ez = f
// after fixed variables are substituted out. Variable bounds become rows of G.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "pwreg/error.hpp"
#include "pwreg/qp_solver.hpp"

namespace pwreg {
namespace {

constexpr double kRegularization = 1e-12;
constexpr int kRefinementSteps = 3;
// Accepted when the iteration stalls short of the requested tolerance.
constexpr double kAcceptableError = 1e-8;
constexpr double kStepFraction = 0.995;

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

}  // namespace

QpSolution SolveQpDense(const QuadraticProgram& qp, double tolerance, int max_iter) {
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

  const Eigen::MatrixXd q_all = Eigen::MatrixXd(qp.q);
  const Eigen::MatrixXd a_in_all = Eigen::MatrixXd(qp.a_ineq);
  const Eigen::MatrixXd a_eq_all = Eigen::MatrixXd(qp.a_eq);

  Eigen::MatrixXd q(n, n);
  Eigen::VectorXd c(n);
  for (int a = 0; a < n; ++a) {
    c[a] = qp.c[free_vars[a]] + q_all.row(free_vars[a]).dot(z_fixed);
    for (int b = 0; b < n; ++b) q(a, b) = q_all(free_vars[a], free_vars[b]);
  }

  // Inequality block: original rows, then upper bounds, then lower bounds.
  std::vector<int> upper_rows;
  std::vector<int> lower_rows;
  for (int a = 0; a < n; ++a) {
    if (std::isfinite(qp.upper[free_vars[a]])) upper_rows.push_back(a);
    if (std::isfinite(qp.lower[free_vars[a]])) lower_rows.push_back(a);
  }
  const int m = m_in + static_cast<int>(upper_rows.size() + lower_rows.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, n);
  Eigen::VectorXd h(m);
  for (int i = 0; i < m_in; ++i) {
    for (int a = 0; a < n; ++a) g(i, a) = a_in_all(i, free_vars[a]);
    h[i] = qp.b_ineq[i] - a_in_all.row(i).dot(z_fixed);
  }
  int row = m_in;
  for (int a : upper_rows) {
    g(row, a) = 1.0;
    h[row++] = qp.upper[free_vars[a]];
  }
  for (int a : lower_rows) {
    g(row, a) = -1.0;
    h[row++] = -qp.lower[free_vars[a]];
  }
  Eigen::MatrixXd e(m_eq, n);
  Eigen::VectorXd f(m_eq);
  for (int i = 0; i < m_eq; ++i) {
    for (int a = 0; a < n; ++a) e(i, a) = a_eq_all(i, free_vars[a]);
    f[i] = qp.b_eq[i] - a_eq_all.row(i).dot(z_fixed);
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd s = (h - g * z).cwiseMax(1.0);
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(m_eq);

  const double scale_c = 1.0 + NormInf(c);
  const double scale_h = 1.0 + std::max(NormInf(h), NormInf(f));
  QpStatus status = QpStatus::kIterationLimit;
  int iter = 0;

  // Augmented system in (dz, dlam, dnu):
  //   [Q     G'        E'] [dz  ]   [-r_d              ]
  //   [G  -S/Lambda    0 ] [dlam] = [-r_i + r_c/lambda ]
  //   [E     0         0 ] [dnu ]   [-r_e              ]
  const int k = n + m + m_eq;
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k, k);
  kkt.topLeftCorner(n, n) = q;
  kkt.block(0, n, n, m) = g.transpose();
  kkt.block(n, 0, m, n) = g;
  kkt.block(0, n + m, n, m_eq) = e.transpose();
  kkt.block(n + m, 0, m_eq, n) = e;
  Eigen::MatrixXd kkt_reg = kkt;
  kkt_reg.topLeftCorner(n, n).diagonal().array() += kRegularization;
  kkt_reg.bottomRightCorner(m_eq, m_eq).diagonal().array() -= kRegularization;
  Eigen::VectorXd rhs(k);

  // Best iterate by the scaled KKT error, kept in case of numerical breakdown.
  double best_err = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_z = z;
  Eigen::VectorXd best_lam = lam;
  Eigen::VectorXd best_nu = nu;

  for (iter = 0; iter < max_iter; ++iter) {
    const Eigen::VectorXd r_d = q * z + c + g.transpose() * lam + e.transpose() * nu;
    const Eigen::VectorXd r_e = e * z - f;
    const Eigen::VectorXd r_i = g * z + s - h;
    const double mu = m > 0 ? s.dot(lam) / m : 0.0;
    const double obj = 0.5 * z.dot(q * z) + c.dot(z);
    const double err = std::max({NormInf(r_d) / scale_c,
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
    const Eigen::VectorXd s_over_l = s.cwiseQuotient(lam);
    kkt.block(n, n, m, m).diagonal() = -s_over_l;
    kkt_reg.block(n, n, m, m).diagonal() = -s_over_l;
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(kkt_reg);

    const auto direction = [&](const Eigen::VectorXd& r_c, Eigen::VectorXd* dz,
                               Eigen::VectorXd* ds, Eigen::VectorXd* dl,
                               Eigen::VectorXd* dn) {
      rhs.head(n) = -r_d;
      rhs.segment(n, m) = -r_i + r_c.cwiseQuotient(lam);
      rhs.tail(m_eq) = -r_e;
      Eigen::VectorXd sol = lu.solve(rhs);
      for (int r = 0; r < kRefinementSteps; ++r) sol += lu.solve(rhs - kkt * sol);
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
    const Eigen::VectorXd r_c =
        s.cwiseProduct(lam) + ds.cwiseProduct(dl) -
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
  row = m_in;
  for (int a : upper_rows) bound_mult[free_vars[a]] += lam[row++];
  for (int a : lower_rows) bound_mult[free_vars[a]] -= lam[row++];
  Eigen::VectorXd stat = q_all * out.z + qp.c;
  if (m_in > 0) stat += a_in_all.transpose() * out.y.head(m_in);
  if (m_eq > 0) stat += a_eq_all.transpose() * nu;
  for (int j = 0; j < n_all; ++j) {
    if (position[j] < 0) bound_mult[j] = -stat[j];
  }
  for (std::size_t b = 0; b < bounded.size(); ++b) {
    out.y[m_in + m_eq + static_cast<Eigen::Index>(b)] = bound_mult[bounded[b]];
  }

  const Eigen::VectorXd full_stat = stat + bound_mult;
  const Eigen::VectorXd qz = q_all * out.z;
  out.dual_residual = NormInf(full_stat) / std::max({1.0, NormInf(qz), NormInf(qp.c)});
  out.primal_residual = qp.MaxViolation(out.z) / scale_h;
  return out;
}

}  // namespace pwreg
