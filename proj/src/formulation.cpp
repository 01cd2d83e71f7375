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

#include "pwreg/formulation.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pwreg/error.hpp"

namespace pwreg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Name(const char* prefix, int a) {
  return std::string(prefix) + "_" + std::to_string(a);
}

std::string Name(const char* prefix, int a, int b) {
  return std::string(prefix) + "_" + std::to_string(a) + "_" + std::to_string(b);
}

RowMatrix EvaluateAll(const Dataset& data, const FeatureMap& f) {
  Require(f.dimension() == data.dimension(), ErrorKind::kInvalidDimension,
          "feature map dimension " + std::to_string(f.dimension()) +
              " does not match data dimension " +
              std::to_string(data.dimension()));
  RowMatrix values(data.size(), f.size());
  for (int i = 0; i < data.size(); ++i) {
    f.EvaluateInto(data.point(i),
                   std::span<double>(values.row(i).data(), values.cols()));
  }
  return values;
}

// Shared skeleton: weights, alpha/beta and the squared-residual objective.
struct RegressionSkeleton {
  ProgramBuilder builder;
  ProgramLayout layout;
};

RegressionSkeleton MakeSkeleton(const Dataset& data, const FeatureMap& g,
                                const FeatureMap& h, int p1, int p2,
                                double ridge) {
  Require(ridge >= 0.0 && std::isfinite(ridge), ErrorKind::kInvalidConfig,
          "ridge epsilon must be finite and non-negative");
  RegressionSkeleton s;
  ProgramLayout& lay = s.layout;
  ProgramBuilder& b = s.builder;
  lay.p1 = p1;
  lay.r1 = g.size();
  lay.p2 = p2;
  lay.r2 = p2 > 0 ? h.size() : 0;
  lay.n_points = data.size();
  lay.g_values = EvaluateAll(data, g);
  if (p2 > 0) lay.h_values = EvaluateAll(data, h);
  lay.targets = data.y();

  lay.v_offset = b.num_variables();
  for (int k = 0; k < p1; ++k) {
    for (int j = 0; j < lay.r1; ++j) {
      const int v = b.AddVariable(Name("V", k, j), -kInf, kInf);
      if (ridge > 0.0) b.AddQuadratic(v, v, 2.0 * ridge);
    }
  }
  lay.w_offset = b.num_variables();
  for (int k = 0; k < p2; ++k) {
    for (int j = 0; j < lay.r2; ++j) {
      const int w = b.AddVariable(Name("W", k, j), -kInf, kInf);
      if (ridge > 0.0) b.AddQuadratic(w, w, 2.0 * ridge);
    }
  }
  // With p2 == 0 the second max is identically zero, so beta is pinned.
  const double beta_bound = p2 > 0 ? kInf : 0.0;
  lay.alpha_offset = b.num_variables();
  for (int i = 0; i < lay.n_points; ++i) b.AddVariable(Name("alpha", i), -kInf, kInf);
  lay.beta_offset = b.num_variables();
  for (int i = 0; i < lay.n_points; ++i) {
    b.AddVariable(Name("beta", i), -beta_bound, beta_bound);
  }
  // (y - a + b)^2 = a^2 - 2ab + b^2 - 2y a + 2y b + y^2, as 1/2 z'Qz + c'z + k.
  for (int i = 0; i < lay.n_points; ++i) {
    const int a = lay.Alpha(i);
    const int bt = lay.Beta(i);
    const double y = data.target(i);
    b.AddQuadratic(a, a, 2.0);
    b.AddQuadratic(bt, bt, 2.0);
    b.AddQuadratic(a, bt, -2.0);
    b.AddLinear(a, -2.0 * y);
    b.AddLinear(bt, 2.0 * y);
    b.AddConstant(y * y);
  }
  return s;
}

std::vector<std::pair<int, double>> SegmentTerms(const ProgramLayout& lay,
                                                 bool second_term, int k,
                                                 int point, double scale) {
  std::vector<std::pair<int, double>> terms;
  const RowMatrix& feats = second_term ? lay.h_values : lay.g_values;
  const int r = second_term ? lay.r2 : lay.r1;
  terms.reserve(r + 2);
  for (int j = 0; j < r; ++j) {
    const double f = feats(point, j);
    if (f != 0.0) {
      terms.emplace_back(second_term ? lay.W(k, j) : lay.V(k, j), scale * f);
    }
  }
  return terms;
}

// seg_k(x_i) - aux_i <= 0 for every segment k: aux_i bounds every segment.
void AddUpperEnvelope(ProgramBuilder& b, const ProgramLayout& lay,
                      bool second_term, int segments) {
  const char* name = second_term ? "wa" : "va";
  for (int i = 0; i < lay.n_points; ++i) {
    const int aux = second_term ? lay.Beta(i) : lay.Alpha(i);
    for (int k = 0; k < segments; ++k) {
      auto terms = SegmentTerms(lay, second_term, k, i, 1.0);
      terms.emplace_back(aux, -1.0);
      b.AddInequality(Name(name, i, k), std::move(terms), 0.0);
    }
  }
}

void ValidateSizes(const Dataset& data, const FitConfig& cfg) {
  Require(!data.empty(), ErrorKind::kEmptyDataset,
          "cannot build a training program from an empty dataset");
  Require(cfg.p1 >= 1, ErrorKind::kInvalidConfig, "p1 must be >= 1");
  Require(cfg.p2 >= 0, ErrorKind::kInvalidConfig, "p2 must be >= 0");
  Require(cfg.p1 <= data.size() && cfg.p2 <= data.size(),
          ErrorKind::kInvalidConfig,
          "p1 = " + std::to_string(cfg.p1) + ", p2 = " + std::to_string(cfg.p2) +
              " exceed N = " + std::to_string(data.size()) +
              "; p_j <= N is assumed without loss of generality (extra "
              "segments would be inactive at every data point)");
}

MixedIntegerProgram BuildAssignmentMiqp(const Dataset& data, const FeatureMap& g,
                                        const FeatureMap& h, const FitConfig& cfg,
                                        const std::vector<int>& unit_of_point,
                                        int n_units) {
  const double big_m =
      cfg.big_m ? *cfg.big_m : AutoBigM(data, g, cfg.p2 > 0 ? &h : nullptr);
  Require(std::isfinite(big_m) && big_m > 0.0, ErrorKind::kInvalidConfig,
          "big-M must be positive and finite");

  RegressionSkeleton s = MakeSkeleton(data, g, h, cfg.p1, cfg.p2, cfg.ridge_epsilon);
  ProgramBuilder& b = s.builder;
  ProgramLayout& lay = s.layout;
  lay.n_units = n_units;
  lay.unit_of_point = unit_of_point;
  lay.big_m = big_m;

  MixedIntegerProgram mip;
  lay.delta_offset = b.num_variables();
  for (int u = 0; u < n_units; ++u) {
    for (int k = 0; k < cfg.p1; ++k) {
      mip.binaries.push_back(b.AddVariable(Name("d", u, k), 0.0, 1.0));
    }
  }
  lay.gamma_offset = b.num_variables();
  for (int u = 0; u < n_units; ++u) {
    for (int k = 0; k < cfg.p2; ++k) {
      mip.binaries.push_back(b.AddVariable(Name("g", u, k), 0.0, 1.0));
    }
  }

  const auto add_term = [&](bool second_term, int segments) {
    AddUpperEnvelope(b, lay, second_term, segments);
    const char* name = second_term ? "wm" : "vm";
    for (int i = 0; i < lay.n_points; ++i) {
      const int aux = second_term ? lay.Beta(i) : lay.Alpha(i);
      const int unit = unit_of_point[i];
      for (int k = 0; k < segments; ++k) {
        auto terms = SegmentTerms(lay, second_term, k, i, -1.0);
        terms.emplace_back(aux, 1.0);
        terms.emplace_back(second_term ? lay.Gamma(unit, k) : lay.Delta(unit, k),
                           big_m);
        b.AddInequality(Name(name, i, k), std::move(terms), big_m);
      }
    }
    const char* sum_name = second_term ? "sg" : "sd";
    for (int u = 0; u < n_units; ++u) {
      std::vector<std::pair<int, double>> terms;
      std::vector<int> row;
      for (int k = 0; k < segments; ++k) {
        const int var = second_term ? lay.Gamma(u, k) : lay.Delta(u, k);
        terms.emplace_back(var, 1.0);
        row.push_back(var);
      }
      b.AddEquality(Name(sum_name, u), std::move(terms), 1.0);
      mip.assignment_rows.push_back(std::move(row));
    }
  };
  add_term(false, cfg.p1);
  if (cfg.p2 > 0) add_term(true, cfg.p2);

  if (cfg.symmetry_breaking) {
    // Unit u may only activate segments 0..u: delta_u,k = 0 for k > u.
    const auto fix = [&](int p, bool second_term) {
      for (int u = 0; u + 1 < p && u < n_units; ++u) {
        for (int k = u + 1; k < p; ++k) {
          const int var = second_term ? lay.Gamma(u, k) : lay.Delta(u, k);
          b.SetBounds(var, 0.0, 0.0);
          ++mip.symmetry_fixings;
        }
      }
    };
    fix(cfg.p1, false);
    fix(cfg.p2, true);
  }

  mip.base = std::move(b).Build();
  mip.base.layout = std::move(lay);
  mip.PropagateAssignmentRows();
  return mip;
}

QuadraticProgram BuildSegmentPerUnitQp(const Dataset& data, const FeatureMap& g,
                                       const FeatureMap& h, double ridge,
                                       const std::vector<int>& unit_of_point,
                                       int n_units) {
  Require(!data.empty(), ErrorKind::kEmptyDataset,
          "cannot build a training program from an empty dataset");
  RegressionSkeleton s = MakeSkeleton(data, g, h, n_units, n_units, ridge);
  ProgramBuilder& b = s.builder;
  ProgramLayout& lay = s.layout;
  lay.unit_of_point = unit_of_point;
  AddUpperEnvelope(b, lay, false, n_units);
  AddUpperEnvelope(b, lay, true, n_units);
  // The segment owned by the point's unit attains the maximum.
  for (int second = 0; second < 2; ++second) {
    const bool second_term = second == 1;
    for (int i = 0; i < lay.n_points; ++i) {
      auto terms = SegmentTerms(lay, second_term, unit_of_point[i], i, -1.0);
      terms.emplace_back(second_term ? lay.Beta(i) : lay.Alpha(i), 1.0);
      b.AddInequality(Name(second_term ? "wk" : "vk", i), std::move(terms), 0.0);
    }
  }
  QuadraticProgram qp = std::move(b).Build();
  qp.layout = std::move(lay);
  return qp;
}

std::vector<int> Identity(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

double MaxOfRow(const RowMatrix& w, const RowMatrix& f, int i, int row_count,
                double* min_out) {
  double mx = -kInf;
  double mn = kInf;
  for (int k = 0; k < row_count; ++k) {
    const double v = w.row(k).dot(f.row(i));
    mx = std::max(mx, v);
    mn = std::min(mn, v);
  }
  if (min_out) *min_out = mn;
  return mx;
}

}  // namespace

double AutoBigM(const Dataset& data, const FeatureMap& g, const FeatureMap* h) {
  Require(!data.empty(), ErrorKind::kEmptyDataset,
          "automatic big-M needs a non-empty dataset");
  const double y_range = data.y().maxCoeff() - data.y().minCoeff();
  double feature_max = EvaluateAll(data, g).cwiseAbs().maxCoeff();
  if (h != nullptr) {
    feature_max = std::max(feature_max, EvaluateAll(data, *h).cwiseAbs().maxCoeff());
  }
  return 100.0 * (y_range + feature_max + 1.0);
}

int SymmetryFixingCount(int p) { return p > 1 ? p * (p - 1) / 2 : 0; }

MixedIntegerProgram BuildMiqp(const Dataset& data, const FeatureMap& g,
                              const FeatureMap& h, const FitConfig& cfg) {
  ValidateSizes(data, cfg);
  return BuildAssignmentMiqp(data, g, h, cfg, Identity(data.size()), data.size());
}

MixedIntegerProgram BuildClusteredMiqp(const Dataset& data, const FeatureMap& g,
                                       const FeatureMap& h, const FitConfig& cfg) {
  ValidateSizes(data, cfg);
  Require(data.has_labels(), ErrorKind::kInvalidConfig,
          "preclustered formulation needs cluster labels");
  return BuildAssignmentMiqp(data, g, h, cfg, data.labels(), data.num_clusters());
}

QuadraticProgram BuildQpFull(const Dataset& data, const FeatureMap& g,
                             const FeatureMap& h, double ridge_epsilon) {
  return BuildSegmentPerUnitQp(data, g, h, ridge_epsilon, Identity(data.size()),
                               data.size());
}

QuadraticProgram BuildQpClustered(const Dataset& data, const FeatureMap& g,
                                  const FeatureMap& h, double ridge_epsilon) {
  Require(!data.empty(), ErrorKind::kEmptyDataset,
          "cannot build a training program from an empty dataset");
  Require(data.has_labels(), ErrorKind::kInvalidConfig,
          "clustered QP needs cluster labels");
  return BuildSegmentPerUnitQp(data, g, h, ridge_epsilon, data.labels(),
                               data.num_clusters());
}

ExtractedModel ExtractModel(const QuadraticProgram& program,
                            const Eigen::VectorXd& solution, const FeatureMap& g,
                            const FeatureMap& h, double tolerance) {
  Require(program.layout.has_value(), ErrorKind::kInvalidConfig,
          "program has no regression layout to extract a model from");
  const ProgramLayout& lay = *program.layout;
  Require(solution.size() == program.num_variables(),
          ErrorKind::kInvalidDimension, "solution length does not match program");
  Require(g.size() == lay.r1 && (lay.p2 == 0 || h.size() == lay.r2),
          ErrorKind::kInvalidDimension, "feature maps do not match program");

  RowMatrix v(lay.p1, lay.r1);
  for (int k = 0; k < lay.p1; ++k) {
    for (int j = 0; j < lay.r1; ++j) v(k, j) = solution[lay.V(k, j)];
  }
  RowMatrix w(lay.p2, lay.r2);
  for (int k = 0; k < lay.p2; ++k) {
    for (int j = 0; j < lay.r2; ++j) w(k, j) = solution[lay.W(k, j)];
  }

  double consistency = 0.0;
  double slack = kInf;
  double loss = 0.0;
  for (int i = 0; i < lay.n_points; ++i) {
    double v_min = 0.0;
    const double v_max = MaxOfRow(v, lay.g_values, i, lay.p1, &v_min);
    consistency = std::max(consistency, std::fabs(solution[lay.Alpha(i)] - v_max));
    double phi = v_max;
    if (lay.big_m > 0.0 && lay.p1 > 1) slack = std::min(slack, lay.big_m - (v_max - v_min));
    if (lay.p2 > 0) {
      double w_min = 0.0;
      const double w_max = MaxOfRow(w, lay.h_values, i, lay.p2, &w_min);
      consistency =
          std::max(consistency, std::fabs(solution[lay.Beta(i)] - w_max));
      phi -= w_max;
      if (lay.big_m > 0.0 && lay.p2 > 1) {
        slack = std::min(slack, lay.big_m - (w_max - w_min));
      }
    }
    const double r = lay.targets[i] - phi;
    loss += r * r;
  }

  std::optional<FeatureMap> h_map;
  if (lay.p2 > 0) h_map = h;
  ExtractedModel out{PiecewiseModel(std::move(v), std::move(w), g, std::move(h_map))};
  out.consistency_violation = consistency;
  out.big_m_slack = slack;
  const double slack_tol = tolerance * std::max(1.0, lay.big_m);
  out.big_m_warning = consistency > tolerance || slack <= slack_tol;
  out.loss = loss;
  return out;
}

}  // namespace pwreg
