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


#include "pwreg/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pwreg/error.hpp"

namespace pwreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Segment values as affine functions of x: rows of `slope` and `offset`.
struct AffineRows {
  Eigen::MatrixXd slope;   // p x n
  Eigen::VectorXd offset;  // p
};

AffineRows ToAffine(const RowMatrix& weights, const FeatureMap& f) {
  const AffineParts parts = f.Affine();
  return {weights * parts.linear, weights * parts.offset};
}

double Spread(const AffineRows& rows, const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  if (rows.slope.rows() == 0) return 0.0;
  double top = -kInf;
  double bottom = kInf;
  for (Eigen::Index k = 0; k < rows.slope.rows(); ++k) {
    double row_hi = rows.offset[k];
    double row_lo = rows.offset[k];
    for (Eigen::Index j = 0; j < rows.slope.cols(); ++j) {
      const double a = rows.slope(k, j);
      row_hi += a >= 0.0 ? a * hi[j] : a * lo[j];
      row_lo += a >= 0.0 ? a * lo[j] : a * hi[j];
    }
    top = std::max(top, row_hi);
    bottom = std::min(bottom, row_lo);
  }
  return top - bottom;
}

void CheckBox(const PiecewiseModel& model, const Eigen::VectorXd& lo,
              const Eigen::VectorXd& hi) {
  Require(lo.size() == model.dimension() && hi.size() == model.dimension(),
          ErrorKind::kInvalidDimension,
          "box has dimension " + std::to_string(lo.size()) + ", model expects " +
              std::to_string(model.dimension()));
  Require(lo.allFinite() && hi.allFinite(), ErrorKind::kInvalidConfig,
          "box bounds must be finite");
  Require((lo.array() <= hi.array()).all(), ErrorKind::kInvalidConfig,
          "box lower bound exceeds upper bound");
}

}  // namespace

double EmbeddingBigM(const PiecewiseModel& model, const Eigen::VectorXd& x_lower,
                     const Eigen::VectorXd& x_upper) {
  CheckBox(model, x_lower, x_upper);
  double spread = Spread(ToAffine(model.v(), model.g()), x_lower, x_upper);
  if (model.p2() > 0) {
    spread = std::max(spread, Spread(ToAffine(model.w(), *model.h()), x_lower, x_upper));
  }
  return spread + 1.0;
}

MiEmbedding EmbedModel(const PiecewiseModel& model, const Eigen::VectorXd& x_lower,
                       const Eigen::VectorXd& x_upper, std::optional<double> big_m) {
  Require(model.g().IsAffine() && (!model.h() || model.h()->IsAffine()),
          ErrorKind::kUnsupportedFeature,
          "mixed-integer embedding needs affine feature maps");
  const double m = big_m ? *big_m : EmbeddingBigM(model, x_lower, x_upper);
  CheckBox(model, x_lower, x_upper);
  Require(std::isfinite(m) && m > 0.0, ErrorKind::kInvalidConfig,
          "big-M must be positive and finite");

  MiEmbedding e;
  e.n = model.dimension();
  e.p1 = model.p1();
  e.p2 = model.p2();
  e.big_m = m;

  ProgramBuilder b;
  e.x_offset = 0;
  for (int j = 0; j < e.n; ++j) {
    b.AddVariable("x_" + std::to_string(j + 1), x_lower[j], x_upper[j]);
  }
  e.y_index = b.AddVariable("y", -kInf, kInf);
  e.alpha_index = b.AddVariable("alpha", -kInf, kInf);
  e.beta_index = b.AddVariable("beta", e.p2 > 0 ? -kInf : 0.0, e.p2 > 0 ? kInf : 0.0);
  e.delta_offset = b.num_variables();
  std::vector<int> deltas;
  for (int k = 0; k < e.p1; ++k) deltas.push_back(b.AddVariable("d_" + std::to_string(k), 0.0, 1.0));
  e.gamma_offset = b.num_variables();
  std::vector<int> gammas;
  for (int k = 0; k < e.p2; ++k) gammas.push_back(b.AddVariable("g_" + std::to_string(k), 0.0, 1.0));

  const auto add_term = [&](const AffineRows& rows, int aux, const std::vector<int>& bins,
                            const char* upper_name, const char* select_name,
                            const char* sum_name) {
    std::vector<std::pair<int, double>> sum;
    for (Eigen::Index k = 0; k < rows.slope.rows(); ++k) {
      const std::string tag = "_" + std::to_string(k);
      // Constant parts of the segment move to the right-hand side.
      std::vector<std::pair<int, double>> upper;
      std::vector<std::pair<int, double>> select;
      for (int j = 0; j < e.n; ++j) {
        const double a = rows.slope(k, j);
        if (a == 0.0) continue;
        upper.emplace_back(e.x_offset + j, a);
        select.emplace_back(e.x_offset + j, -a);
      }
      upper.emplace_back(aux, -1.0);
      select.emplace_back(aux, 1.0);
      select.emplace_back(bins[k], m);
      b.AddInequality(upper_name + tag, std::move(upper), -rows.offset[k]);
      b.AddInequality(select_name + tag, std::move(select), m + rows.offset[k]);
      sum.emplace_back(bins[k], 1.0);
    }
    b.AddEquality(sum_name, std::move(sum), 1.0);
  };
  add_term(ToAffine(model.v(), model.g()), e.alpha_index, deltas, "va", "vm", "sd");
  if (e.p2 > 0) add_term(ToAffine(model.w(), *model.h()), e.beta_index, gammas, "wa", "wm", "sg");
  b.AddEquality("out", {{e.y_index, 1.0}, {e.alpha_index, -1.0}, {e.beta_index, 1.0}}, 0.0);

  e.program.base = std::move(b).Build();
  e.program.binaries = deltas;
  e.program.binaries.insert(e.program.binaries.end(), gammas.begin(), gammas.end());
  e.program.assignment_rows.push_back(deltas);
  if (e.p2 > 0) e.program.assignment_rows.push_back(gammas);
  e.program.Validate();
  return e;
}

std::vector<double> EnumerateOutputs(const MiEmbedding& e, std::span<const double> x,
                                     double tolerance) {
  Require(static_cast<int>(x.size()) == e.n, ErrorKind::kInvalidDimension,
          "point has length " + std::to_string(x.size()) + ", embedding expects " +
              std::to_string(e.n));
  const QuadraticProgram& qp = e.program.base;
  std::vector<double> outputs;
  const int p2_patterns = std::max(e.p2, 1);
  for (int k = 0; k < e.p1; ++k) {
    for (int l = 0; l < p2_patterns; ++l) {
      Eigen::VectorXd z = Eigen::VectorXd::Zero(qp.num_variables());
      for (int j = 0; j < e.n; ++j) z[e.x_offset + j] = x[j];
      z[e.delta_offset + k] = 1.0;
      if (e.p2 > 0) z[e.gamma_offset + l] = 1.0;
      // With its binary at one, the select row and the upper row of the
      // chosen segment pin the auxiliary variable to the segment value.
      const auto pinned = [&](const char* upper_name, int index, int aux) {
        const std::string name = std::string(upper_name) + "_" + std::to_string(index);
        const auto it = std::find(qp.inequality_names.begin(), qp.inequality_names.end(), name);
        const int row = static_cast<int>(it - qp.inequality_names.begin());
        // The row reads a'x - aux <= -offset, so the pinned value is a'x + offset.
        Eigen::VectorXd without = z;
        without[aux] = 0.0;
        return (qp.a_ineq * without)[row] - qp.b_ineq[row];
      };
      z[e.alpha_index] = pinned("va", k, e.alpha_index);
      if (e.p2 > 0) z[e.beta_index] = pinned("wa", l, e.beta_index);
      z[e.y_index] = z[e.alpha_index] - z[e.beta_index];
      if (qp.MaxViolation(z) <= tolerance) outputs.push_back(z[e.y_index]);
    }
  }
  return outputs;
}

}  // namespace pwreg
