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

#include "pwreg/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/SparseCholesky>

#include "pwreg/error.hpp"
#include "pwreg/kernels.hpp"

namespace pwreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRhoMin = 1e-6;
constexpr double kRhoMax = 1e6;
constexpr double kRhoEqualityFactor = 1e3;
constexpr double kScaleMin = 1e-4;
constexpr double kScaleMax = 1e4;
constexpr double kPolishDelta = 1e-9;
constexpr int kPolishRefinement = 12;
constexpr int kPolishRounds = 40;
constexpr int kPolishBulkRounds = 2;

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower,
                                   Eigen::AMDOrdering<int>>;

double InfNorm(const Eigen::VectorXd& v) {
  return kernels::Active().inf_norm(v.data(), static_cast<std::size_t>(v.size()));
}

double ColumnInfNorm(const SparseMatrix& m, int col) {
  double r = 0.0;
  for (SparseMatrix::InnerIterator it(m, col); it; ++it) {
    r = std::max(r, std::fabs(it.value()));
  }
  return r;
}

double ClampScale(double norm) {
  if (norm < kScaleMin) return 1.0;
  return 1.0 / std::sqrt(std::min(norm, kScaleMax * kScaleMax));
}

// Lower triangle of [P + diag_top, C'; C, -diag_bottom].
SparseMatrix AssembleKkt(const SparseMatrix& p, const SparseMatrix& c,
                         const Eigen::VectorXd& diag_top,
                         const Eigen::VectorXd& diag_bottom) {
  const int n = static_cast<int>(p.rows());
  const int m = static_cast<int>(c.rows());
  std::vector<Triplet> t;
  t.reserve(p.nonZeros() / 2 + n + c.nonZeros() + m);
  for (int col = 0; col < n; ++col) {
    for (SparseMatrix::InnerIterator it(p, col); it; ++it) {
      if (it.row() > col) t.emplace_back(static_cast<int>(it.row()), col, it.value());
    }
  }
  const Eigen::VectorXd pd = p.diagonal();
  for (int j = 0; j < n; ++j) t.emplace_back(j, j, pd[j] + diag_top[j]);
  for (int col = 0; col < n; ++col) {
    for (SparseMatrix::InnerIterator it(c, col); it; ++it) {
      t.emplace_back(n + static_cast<int>(it.row()), col, it.value());
    }
  }
  for (int i = 0; i < m; ++i) t.emplace_back(n + i, n + i, -diag_bottom[i]);
  SparseMatrix k(n + m, n + m);
  k.setFromTriplets(t.begin(), t.end());
  k.makeCompressed();
  return k;
}

}  // namespace

std::string_view ToString(QpStatus status) {
  switch (status) {
    case QpStatus::kOptimal: return "optimal";
    case QpStatus::kInfeasible: return "infeasible";
    case QpStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

struct QpSolver::Impl {
  QpSettings settings;
  QuadraticProgram qp;  // original data
  int n = 0;
  int m = 0;
  int m_ineq = 0;
  int m_eq = 0;
  std::vector<int> bounded;  // variables carrying a bound row
  std::vector<char> lower_finite;
  std::vector<char> upper_finite;

  SparseMatrix c_orig;  // stacked constraint matrix, unscaled
  Eigen::VectorXd l_orig;
  Eigen::VectorXd u_orig;

  // Scaled problem.
  SparseMatrix p;
  SparseMatrix c;
  SparseMatrix ct;
  Eigen::VectorXd q;
  Eigen::VectorXd l;
  Eigen::VectorXd u;
  Eigen::VectorXd d;  // variable scaling
  Eigen::VectorXd e;  // constraint scaling
  double cost_scale = 1.0;

  // Iterates (scaled).
  Eigen::VectorXd x;
  Eigen::VectorXd z;
  Eigen::VectorXd y;
  Eigen::VectorXd rho;
  Eigen::VectorXd rho_inv;
  double rho_scalar = 0.1;

  SparseMatrix kkt;
  std::vector<int> kkt_rho_entries;  // value index of each -1/rho diagonal
  Ldlt ldlt;
  bool factored = false;

  Impl(const QuadraticProgram& program, QpSettings s)
      : settings(s), qp(program) {
    qp.Validate();
    n = qp.num_variables();
    m_ineq = qp.num_inequalities();
    m_eq = qp.num_equalities();
    lower_finite.resize(n);
    upper_finite.resize(n);
    for (int j = 0; j < n; ++j) {
      lower_finite[j] = std::isfinite(qp.lower[j]);
      upper_finite[j] = std::isfinite(qp.upper[j]);
      if (lower_finite[j] || upper_finite[j]) bounded.push_back(j);
    }
    m = m_ineq + m_eq + static_cast<int>(bounded.size());

    std::vector<Triplet> t;
    t.reserve(qp.a_ineq.nonZeros() + qp.a_eq.nonZeros() + bounded.size());
    for (int col = 0; col < n; ++col) {
      for (SparseMatrix::InnerIterator it(qp.a_ineq, col); it; ++it) {
        t.emplace_back(static_cast<int>(it.row()), col, it.value());
      }
      for (SparseMatrix::InnerIterator it(qp.a_eq, col); it; ++it) {
        t.emplace_back(m_ineq + static_cast<int>(it.row()), col, it.value());
      }
    }
    for (std::size_t b = 0; b < bounded.size(); ++b) {
      t.emplace_back(m_ineq + m_eq + static_cast<int>(b), bounded[b], 1.0);
    }
    c_orig.resize(m, n);
    c_orig.setFromTriplets(t.begin(), t.end());
    c_orig.makeCompressed();
    l_orig.resize(m);
    u_orig.resize(m);
    l_orig.head(m_ineq).setConstant(-kInf);
    u_orig.head(m_ineq) = qp.b_ineq;
    l_orig.segment(m_ineq, m_eq) = qp.b_eq;
    u_orig.segment(m_ineq, m_eq) = qp.b_eq;
    SetBoundRows(qp.lower, qp.upper);

    Equilibrate();
    x = Eigen::VectorXd::Zero(n);
    z = Eigen::VectorXd::Zero(m);
    y = Eigen::VectorXd::Zero(m);
    rho_scalar = settings.rho;
    rho.resize(m);
    rho_inv.resize(m);
    AssembleFactorization();
  }

  void SetBoundRows(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper) {
    for (std::size_t b = 0; b < bounded.size(); ++b) {
      const int j = bounded[b];
      l_orig[m_ineq + m_eq + b] = lower[j];
      u_orig[m_ineq + m_eq + b] = upper[j];
    }
  }

  void Equilibrate() {
    p = qp.q;
    c = c_orig;
    q = qp.c;
    d = Eigen::VectorXd::Ones(n);
    e = Eigen::VectorXd::Ones(m);
    cost_scale = 1.0;
    Eigen::VectorXd dt(n);
    Eigen::VectorXd et(m);
    for (int iter = 0; iter < settings.scaling_iterations; ++iter) {
      const SparseMatrix c_rows = c.transpose();
      for (int j = 0; j < n; ++j) {
        dt[j] = ClampScale(std::max(ColumnInfNorm(p, j), ColumnInfNorm(c, j)));
      }
      for (int i = 0; i < m; ++i) et[i] = ClampScale(ColumnInfNorm(c_rows, i));
      p = dt.asDiagonal() * p * dt.asDiagonal();
      c = et.asDiagonal() * c * dt.asDiagonal();
      q = dt.cwiseProduct(q);
      d = d.cwiseProduct(dt);
      e = e.cwiseProduct(et);

      double mean_col = 0.0;
      for (int j = 0; j < n; ++j) mean_col += ColumnInfNorm(p, j);
      mean_col = n > 0 ? mean_col / n : 0.0;
      double ct_scale = std::max(mean_col, InfNorm(q));
      ct_scale = ct_scale < kScaleMin ? 1.0 : 1.0 / std::min(ct_scale, kScaleMax);
      p *= ct_scale;
      q *= ct_scale;
      cost_scale *= ct_scale;
    }
    p.makeCompressed();
    c.makeCompressed();
    ct = c.transpose();
    ScaleBounds();
  }

  void ScaleBounds() {
    l = e.cwiseProduct(l_orig);
    u = e.cwiseProduct(u_orig);
  }

  void ComputeRho() {
    for (int i = 0; i < m; ++i) {
      double r = rho_scalar;
      if (l[i] == u[i]) {
        r = kRhoEqualityFactor * rho_scalar;
      } else if (!std::isfinite(l[i]) && !std::isfinite(u[i])) {
        r = kRhoMin;
      }
      rho[i] = r;
      rho_inv[i] = 1.0 / r;
    }
  }

  void AssembleFactorization() {
    ComputeRho();
    kkt = AssembleKkt(p, c, Eigen::VectorXd::Constant(n, settings.sigma), rho_inv);
    kkt_rho_entries.assign(m, -1);
    for (int i = 0; i < m; ++i) {
      const int col = n + i;
      for (int k = kkt.outerIndexPtr()[col]; k < kkt.outerIndexPtr()[col + 1]; ++k) {
        if (kkt.innerIndexPtr()[k] == col) kkt_rho_entries[i] = k;
      }
    }
    ldlt.analyzePattern(kkt);
    Refactor();
  }

  void Refactor() {
    for (int i = 0; i < m; ++i) kkt.valuePtr()[kkt_rho_entries[i]] = -rho_inv[i];
    ldlt.factorize(kkt);
    factored = ldlt.info() == Eigen::Success;
  }

  void UpdateRho(double new_rho) {
    rho_scalar = std::clamp(new_rho, kRhoMin, kRhoMax);
    ComputeRho();
    Refactor();
  }

  struct Residuals {
    double primal = 0.0;      // normalized
    double dual = 0.0;        // normalized
    double primal_scaled = 0.0;
    double dual_scaled = 0.0;
    double primal_norm_scaled = 0.0;
    double dual_norm_scaled = 0.0;
  };

  Residuals ComputeResiduals(const Eigen::VectorXd& xs, const Eigen::VectorXd& zs,
                             const Eigen::VectorXd& ys) const {
    Residuals r;
    const Eigen::VectorXd cx = c * xs;
    const Eigen::VectorXd px = p * xs;
    const Eigen::VectorXd cty = ct * ys;
    const Eigen::VectorXd e_inv = e.cwiseInverse();
    const Eigen::VectorXd d_inv = d.cwiseInverse();

    const Eigen::VectorXd cx_u = e_inv.cwiseProduct(cx);
    const Eigen::VectorXd z_u = e_inv.cwiseProduct(zs);
    r.primal = InfNorm(cx_u - z_u) / std::max({1.0, InfNorm(cx_u), InfNorm(z_u)});
    const double inv_c = 1.0 / cost_scale;
    const Eigen::VectorXd px_u = inv_c * d_inv.cwiseProduct(px);
    const Eigen::VectorXd cty_u = inv_c * d_inv.cwiseProduct(cty);
    const Eigen::VectorXd q_u = inv_c * d_inv.cwiseProduct(q);
    r.dual = InfNorm(px_u + q_u + cty_u) /
             std::max({1.0, InfNorm(px_u), InfNorm(cty_u), InfNorm(q_u)});

    r.primal_scaled = InfNorm(cx - zs);
    r.primal_norm_scaled = std::max(InfNorm(cx), InfNorm(zs));
    r.dual_scaled = InfNorm(px + q + cty);
    r.dual_norm_scaled = std::max({InfNorm(px), InfNorm(cty), InfNorm(q)});
    return r;
  }

  // Largest tolerated wrong-sign multiplier per row, in scaled units. It is
  // relative to the objective data so that large multipliers on big-M rows
  // cannot mask a non-optimal active set.
  Eigen::VectorXd SignTolerances(const Eigen::VectorXd& xs) const {
    const Eigen::VectorXd d_inv = d.cwiseInverse();
    const double inv_c = 1.0 / cost_scale;
    const double obj_scale =
        std::max({1.0, inv_c * InfNorm(d_inv.cwiseProduct(p * xs)),
                  inv_c * InfNorm(d_inv.cwiseProduct(q))});
    return (settings.tol_opt * obj_scale * cost_scale) * e.cwiseInverse();
  }

  // Residuals of an exact-complementarity candidate (x, y) with z = Cx.
  // Rejects multipliers with the wrong sign.
  bool CheckCandidate(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                      Residuals* out) const {
    const Eigen::VectorXd cx = c * xs;
    Eigen::VectorXd zproj = cx.cwiseMax(l).cwiseMin(u);
    *out = ComputeResiduals(xs, zproj, ys);
    const Eigen::VectorXd tol = SignTolerances(xs);
    for (int i = 0; i < m; ++i) {
      if (l[i] == u[i]) continue;
      if (ys[i] < -tol[i] && !(std::fabs(cx[i] - l[i]) <= 1e-9 * (1.0 + std::fabs(l[i])))) {
        return false;
      }
      if (ys[i] > tol[i] && !(std::fabs(cx[i] - u[i]) <= 1e-9 * (1.0 + std::fabs(u[i])))) {
        return false;
      }
    }
    return out->primal <= settings.tol_feas && out->dual <= settings.tol_opt;
  }

  // Active-set guess from the current iterate, then a few rounds of repair:
  // violated rows join the set, rows whose multiplier has the wrong sign
  // leave it. Each round solves the reduced KKT system with iterative
  // refinement.
  bool Polish(Eigen::VectorXd* x_out, Eigen::VectorXd* y_out, Residuals* res) {
    // side: 0 inactive, -1 at lower, +1 at upper, 2 equality row.
    std::vector<int> side(m, 0);
    for (int i = 0; i < m; ++i) {
      if (l[i] == u[i]) {
        side[i] = 2;
      } else if (z[i] - l[i] < -y[i]) {
        side[i] = -1;
      } else if (u[i] - z[i] < y[i]) {
        side[i] = 1;
      }
    }
    Eigen::VectorXd xp;
    Eigen::VectorXd yp;
    for (int round = 0; round < kPolishRounds; ++round) {
      if (!SolveReduced(side, &xp, &yp)) return false;
      const Eigen::VectorXd cx = c * xp;
      const double feas_tol =
          settings.tol_feas * std::max({1.0, InfNorm(cx)});
      const Eigen::VectorXd sign_tol = SignTolerances(xp);
      // Early rounds move every offending row at once; later rounds change a
      // single row (most wrong multiplier first, else most violated row),
      // which avoids cycling at degenerate vertices.
      const bool bulk = round < kPolishBulkRounds;
      int worst_sign = -1;
      double worst_sign_v = 0.0;
      int worst_viol = -1;
      double worst_viol_v = feas_tol;
      bool changed = false;
      for (int i = 0; i < m; ++i) {
        if (side[i] == 0) {
          const double v = std::max(l[i] - cx[i], cx[i] - u[i]);
          if (v > worst_viol_v) {
            worst_viol_v = v;
            worst_viol = i;
          }
          if (bulk && v > feas_tol) {
            side[i] = cx[i] < l[i] ? -1 : 1;
            changed = true;
          }
        } else if (side[i] == -1 || side[i] == 1) {
          const double wrong = (side[i] == -1 ? yp[i] : -yp[i]) - sign_tol[i];
          if (wrong > worst_sign_v) {
            worst_sign_v = wrong;
            worst_sign = i;
          }
          if (bulk && wrong > 0.0) {
            side[i] = 0;
            changed = true;
          }
        }
      }
      if (!bulk) {
        if (worst_sign >= 0) {
          side[worst_sign] = 0;
          changed = true;
        } else if (worst_viol >= 0) {
          side[worst_viol] = cx[worst_viol] < l[worst_viol] ? -1 : 1;
          changed = true;
        }
      }
      if (!changed) break;
    }
    if (!CheckCandidate(xp, yp, res)) return false;
    *x_out = xp;
    *y_out = yp;
    return true;
  }

  bool SolveReduced(const std::vector<int>& side, Eigen::VectorXd* x_out,
                    Eigen::VectorXd* y_out) const {
    std::vector<int> active;
    std::vector<double> target;
    for (int i = 0; i < m; ++i) {
      if (side[i] == 0) continue;
      active.push_back(i);
      target.push_back(side[i] == 1 ? u[i] : l[i]);
    }
    const int na = static_cast<int>(active.size());
    std::vector<Triplet> t;
    for (int a = 0; a < na; ++a) {
      for (SparseMatrix::InnerIterator it(ct, active[a]); it; ++it) {
        t.emplace_back(a, static_cast<int>(it.row()), it.value());
      }
    }
    SparseMatrix ca(na, n);
    ca.setFromTriplets(t.begin(), t.end());
    const SparseMatrix kreg =
        AssembleKkt(p, ca, Eigen::VectorXd::Constant(n, kPolishDelta),
                    Eigen::VectorXd::Constant(na, kPolishDelta));
    Ldlt solver;
    solver.compute(kreg);
    if (solver.info() != Eigen::Success) return false;

    Eigen::VectorXd rhs(n + na);
    rhs.head(n) = -q;
    for (int a = 0; a < na; ++a) rhs[n + a] = target[a];
    const SparseMatrix cat = ca.transpose();
    const auto apply_exact = [&](const Eigen::VectorXd& s) {
      Eigen::VectorXd out(n + na);
      out.head(n) = p * s.head(n) + cat * s.tail(na);
      out.tail(na) = ca * s.head(n);
      return out;
    };
    Eigen::VectorXd sol = solver.solve(rhs);
    for (int k = 0; k < kPolishRefinement; ++k) {
      const Eigen::VectorXd r = rhs - apply_exact(sol);
      if (InfNorm(r) <= 1e-15 * std::max(1.0, InfNorm(rhs))) break;
      sol += solver.solve(r);
    }
    if (!sol.allFinite()) return false;
    *y_out = Eigen::VectorXd::Zero(m);
    for (int a = 0; a < na; ++a) (*y_out)[active[a]] = sol[n + a];
    *x_out = sol.head(n);
    return true;
  }

  // Farkas-type certificate on the dual increment: C'dy ~ 0 while the support
  // function of [l, u] along dy is negative.
  bool PrimalInfeasible(const Eigen::VectorXd& dy, double* certificate) const {
    const Eigen::VectorXd dy_u = e.cwiseProduct(dy);
    const double norm = InfNorm(dy_u);
    if (norm <= 1e-30) return false;
    const double eps = settings.infeasibility_tol;
    const Eigen::VectorXd ct_dy = d.cwiseInverse().cwiseProduct(ct * dy);
    if (InfNorm(ct_dy) > eps * norm) return false;
    double support = 0.0;
    for (int i = 0; i < m; ++i) {
      const double v = dy_u[i];
      if (v > eps * norm) {
        if (!std::isfinite(u_orig[i])) return false;
        support += u_orig[i] * v;
      } else if (v < -eps * norm) {
        if (!std::isfinite(l_orig[i])) return false;
        support += l_orig[i] * v;
      }
    }
    if (support >= -eps * norm) return false;
    *certificate = -support / norm;
    return true;
  }

  QpSolution MakeSolution(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys,
                          QpStatus status, const Residuals& res, int iterations,
                          bool polished) const {
    QpSolution s;
    s.z = d.cwiseProduct(xs);
    s.y = e.cwiseProduct(ys) / cost_scale;
    s.objective = qp.Objective(s.z);
    s.status = status;
    s.primal_residual = res.primal;
    s.dual_residual = res.dual;
    s.iterations = iterations;
    s.polished = polished;
    return s;
  }

  QpSolution Solve() {
    if (!factored) {
      Fail(ErrorKind::kNumericInput, "KKT factorization failed");
    }
    const auto& k = kernels::Active();
    Eigen::VectorXd rhs(n + m);
    Eigen::VectorXd sol(n + m);
    Eigen::VectorXd x_tilde(n);
    Eigen::VectorXd z_tilde(m);
    Eigen::VectorXd y_prev = y;
    // Polish is tried at the first check, then whenever the residuals have
    // dropped tenfold since the last failed attempt.
    double polish_level = kInf;
    Residuals res;

    int iter = 0;
    for (iter = 1; iter <= settings.max_iter; ++iter) {
      const bool check = iter % settings.check_interval == 0 || iter == settings.max_iter;
      if (check) y_prev = y;
      rhs.head(n) = settings.sigma * x - q;
      rhs.tail(m) = z - rho_inv.cwiseProduct(y);
      sol = ldlt.solve(rhs);
      x_tilde = sol.head(n);
      z_tilde = z + rho_inv.cwiseProduct(sol.tail(m) - y);
      k.relax(settings.relaxation, x_tilde.data(), x.data(), x.data(),
              static_cast<std::size_t>(n));
      k.admm_project(kernels::AdmmProjectArgs{
          z_tilde.data(), rho.data(), rho_inv.data(), l.data(), u.data(),
          z.data(), y.data(), settings.relaxation, static_cast<std::size_t>(m)});
      if (!check) continue;

      res = ComputeResiduals(x, z, y);
      if (res.primal <= settings.tol_feas && res.dual <= settings.tol_opt) {
        Residuals pres;
        Eigen::VectorXd xp;
        Eigen::VectorXd yp;
        if (settings.polish && Polish(&xp, &yp, &pres)) {
          return MakeSolution(xp, yp, QpStatus::kOptimal, pres, iter, true);
        }
        return MakeSolution(x, y, QpStatus::kOptimal, res, iter, false);
      }
      if (settings.polish && std::max(res.primal, res.dual) <= polish_level) {
        Residuals pres;
        Eigen::VectorXd xp;
        Eigen::VectorXd yp;
        if (Polish(&xp, &yp, &pres)) {
          x = xp;
          y = yp;
          z = (c * x).cwiseMax(l).cwiseMin(u);
          return MakeSolution(xp, yp, QpStatus::kOptimal, pres, iter, true);
        }
        polish_level = std::max(0.1 * std::max(res.primal, res.dual), 1e-12);
      }
      double certificate = 0.0;
      if (InfNorm(y) > settings.divergence_threshold ||
          iter % (settings.check_interval * 10) == 0) {
        if (PrimalInfeasible(y - y_prev, &certificate)) {
          QpSolution s = MakeSolution(x, y, QpStatus::kInfeasible, res, iter, false);
          s.infeasibility_certificate = certificate;
          return s;
        }
      }
      if (settings.adaptive_rho) {
        const double prim = res.primal_scaled / std::max(res.primal_norm_scaled, 1e-30);
        const double dual = res.dual_scaled / std::max(res.dual_norm_scaled, 1e-30);
        const double candidate = rho_scalar * std::sqrt(prim / std::max(dual, 1e-30));
        if (std::isfinite(candidate) &&
            (candidate > 5.0 * rho_scalar || candidate < 0.2 * rho_scalar)) {
          UpdateRho(candidate);
        }
      }
    }
    return MakeSolution(x, y, QpStatus::kIterationLimit, res, settings.max_iter, false);
  }
};

QpSolver::QpSolver(const QuadraticProgram& qp, QpSettings settings)
    : impl_(std::make_unique<Impl>(qp, settings)) {}

QpSolver::~QpSolver() = default;
QpSolver::QpSolver(QpSolver&&) noexcept = default;
QpSolver& QpSolver::operator=(QpSolver&&) noexcept = default;

const QpSettings& QpSolver::settings() const { return impl_->settings; }

void QpSolver::SetVariableBounds(const Eigen::VectorXd& lower,
                                 const Eigen::VectorXd& upper) {
  Impl& s = *impl_;
  Require(lower.size() == s.n && upper.size() == s.n, ErrorKind::kInvalidDimension,
          "bound vectors must have one entry per variable");
  for (int j = 0; j < s.n; ++j) {
    Require(static_cast<bool>(std::isfinite(lower[j])) == static_cast<bool>(s.lower_finite[j]) &&
                static_cast<bool>(std::isfinite(upper[j])) == static_cast<bool>(s.upper_finite[j]),
            ErrorKind::kInvalidConfig,
            "bound update changes which bounds are finite");
    Require(lower[j] <= upper[j], ErrorKind::kNumericInput,
            "variable bounds must satisfy lower <= upper");
  }
  s.qp.lower = lower;
  s.qp.upper = upper;
  s.SetBoundRows(lower, upper);
  s.ScaleBounds();
  const Eigen::VectorXd old_rho = s.rho;
  s.ComputeRho();
  if (old_rho != s.rho) s.Refactor();
  s.z = s.z.cwiseMax(s.l).cwiseMin(s.u);
}

void QpSolver::WarmStart(const Eigen::VectorXd& z, const Eigen::VectorXd* y) {
  Impl& s = *impl_;
  Require(z.size() == s.n, ErrorKind::kInvalidDimension, "warm start length mismatch");
  s.x = s.d.cwiseInverse().cwiseProduct(z);
  s.z = (s.c * s.x).cwiseMax(s.l).cwiseMin(s.u);
  if (y != nullptr) {
    Require(y->size() == s.m, ErrorKind::kInvalidDimension,
            "warm start dual length mismatch");
    s.y = s.cost_scale * s.e.cwiseInverse().cwiseProduct(*y);
  }
}

QpSolution QpSolver::Solve() { return impl_->Solve(); }

QpSolution SolveQp(const QuadraticProgram& qp, const QpSettings& settings) {
  QpSolver solver(qp, settings);
  return solver.Solve();
}

}  // namespace pwreg
