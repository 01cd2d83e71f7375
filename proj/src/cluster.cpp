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


#include "pwreg/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "pwreg/error.hpp"
#include "pwreg/kernels.hpp"

namespace pwreg {
namespace {

struct Run {
  std::vector<int> labels;
  RowMatrix centers;
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
};

double Distance(const RowMatrix& a, int i, const RowMatrix& b, int j) {
  return kernels::Active().squared_distance(a.row(i).data(), b.row(j).data(),
                                            static_cast<std::size_t>(a.cols()));
}

RowMatrix SeedCenters(const RowMatrix& x, int k, std::mt19937_64& rng) {
  const int n_points = static_cast<int>(x.rows());
  RowMatrix centers(k, x.cols());
  std::vector<char> chosen(n_points, 0);
  std::uniform_int_distribution<int> first(0, n_points - 1);
  int pick = first(rng);
  centers.row(0) = x.row(pick);
  chosen[pick] = 1;
  std::vector<double> d2(n_points);
  for (int i = 0; i < n_points; ++i) d2[i] = Distance(x, i, centers, 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    pick = -1;
    if (total > 0.0) {
      const double r = unit(rng) * total;
      double acc = 0.0;
      for (int i = 0; i < n_points; ++i) {
        acc += d2[i];
        if (d2[i] > 0.0 && acc >= r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (int i = n_points - 1; i >= 0; --i) {
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      for (int i = 0; i < n_points; ++i) {
        if (!chosen[i]) {
          pick = i;
          break;
        }
      }
    }
    centers.row(c) = x.row(pick);
    chosen[pick] = 1;
    for (int i = 0; i < n_points; ++i) d2[i] = std::min(d2[i], Distance(x, i, centers, c));
  }
  return centers;
}

double Assign(const RowMatrix& x, const RowMatrix& centers, std::vector<int>& labels) {
  double total = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    int best = 0;
    double best_d = Distance(x, i, centers, 0);
    for (int c = 1; c < centers.rows(); ++c) {
      const double d = Distance(x, i, centers, c);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels[i] = best;
    total += best_d;
  }
  return total;
}

// Moves the point farthest from its center out of the largest cluster into
// each empty cluster.
void RepairEmpty(const RowMatrix& x, RowMatrix& centers, std::vector<int>& labels) {
  const int k = static_cast<int>(centers.rows());
  while (true) {
    std::vector<int> count(k, 0);
    for (int l : labels) ++count[l];
    const auto empty = std::find(count.begin(), count.end(), 0);
    if (empty == count.end()) return;
    const int target = static_cast<int>(empty - count.begin());
    const int largest =
        static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin());
    int far = -1;
    double far_d = -1.0;
    for (int i = 0; i < x.rows(); ++i) {
      if (labels[i] != largest) continue;
      const double d = Distance(x, i, centers, largest);
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    labels[far] = target;
    centers.row(target) = x.row(far);
  }
}

RowMatrix Means(const RowMatrix& x, const std::vector<int>& labels, int k) {
  RowMatrix centers = RowMatrix::Zero(k, x.cols());
  std::vector<int> count(k, 0);
  for (int i = 0; i < x.rows(); ++i) {
    centers.row(labels[i]) += x.row(i);
    ++count[labels[i]];
  }
  for (int c = 0; c < k; ++c) centers.row(c) /= static_cast<double>(count[c]);
  return centers;
}

double Objective(const RowMatrix& x, const RowMatrix& centers, const std::vector<int>& labels) {
  double total = 0.0;
  for (int i = 0; i < x.rows(); ++i) total += Distance(x, i, centers, labels[i]);
  return total;
}

Run Lloyd(const RowMatrix& x, int k, std::mt19937_64& rng, const KMeansOptions& opt) {
  Run run;
  run.centers = SeedCenters(x, k, rng);
  run.labels.assign(x.rows(), 0);
  for (int it = 0; it < opt.max_iterations; ++it) {
    Assign(x, run.centers, run.labels);
    RepairEmpty(x, run.centers, run.labels);
    run.trace.push_back(Objective(x, run.centers, run.labels));
    RowMatrix updated = Means(x, run.labels, k);
    double shift = 0.0;
    for (int c = 0; c < k; ++c) shift = std::max(shift, Distance(updated, c, run.centers, c));
    run.centers = std::move(updated);
    if (std::sqrt(shift) < opt.shift_tolerance) break;
  }
  // Final assignment against the converged centers, kept only if it helps.
  std::vector<int> final_labels(x.rows());
  Assign(x, run.centers, final_labels);
  RowMatrix centers = run.centers;
  RepairEmpty(x, centers, final_labels);
  const RowMatrix final_centers = Means(x, final_labels, k);
  const double final_obj = Objective(x, final_centers, final_labels);
  const double current = Objective(x, run.centers, run.labels);
  if (final_obj < current) {
    run.labels = std::move(final_labels);
    run.centers = final_centers;
    run.objective = final_obj;
    run.trace.push_back(final_obj);
  } else {
    run.objective = current;
  }
  return run;
}

}  // namespace

Clustering KMeansPlusPlus(const Dataset& data, int k, std::uint64_t seed,
                          const KMeansOptions& options) {
  Require(!data.empty(), ErrorKind::kEmptyDataset, "cannot cluster an empty dataset");
  Require(k >= 1, ErrorKind::kInvalidConfig, "K must be at least 1");
  Require(k <= data.size(), ErrorKind::kInvalidConfig,
          "K = " + std::to_string(k) + " exceeds the number of points " +
              std::to_string(data.size()));
  Require(options.restarts >= 1 && options.max_iterations >= 1, ErrorKind::kInvalidConfig,
          "restarts and iterations must be positive");

  RowMatrix x = data.x();
  if (options.standardize) {
    for (int j = 0; j < x.cols(); ++j) {
      const double mean = x.col(j).mean();
      const double sd = std::sqrt((x.col(j).array() - mean).square().mean());
      if (sd > 0.0) x.col(j) = (x.col(j).array() - mean) / sd;
    }
  }

  Run best;
  int best_restart = 0;
  for (int r = 0; r < options.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    Run run = Lloyd(x, k, rng, options);
    if (run.objective < best.objective) {
      best = std::move(run);
      best_restart = r;
    }
  }

  Clustering out;
  out.labels = best.labels;
  out.centers = Means(data.x(), best.labels, k);
  out.inertia = Objective(data.x(), out.centers, best.labels);
  out.trace = std::move(best.trace);
  out.restart = best_restart;
  return out;
}

}  // namespace pwreg
