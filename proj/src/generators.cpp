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


#include "pwreg/generators.hpp"

#include <cmath>
#include <random>

#include "pwreg/error.hpp"

namespace pwreg {
namespace {

// Independent streams from one user seed.
std::mt19937_64 Stream(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    stream};
  return std::mt19937_64(seq);
}

Eigen::VectorXd Expand(const std::vector<double>& v, int n, double fallback, const char* what) {
  if (v.empty()) return Eigen::VectorXd::Constant(n, fallback);
  if (v.size() == 1) return Eigen::VectorXd::Constant(n, v[0]);
  Require(static_cast<int>(v.size()) == n, ErrorKind::kInvalidConfig,
          std::string(what) + " needs 1 or n = " + std::to_string(n) + " values");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

// Affine-map weights acting on x_1 only: slope then constant.
RowMatrix OnFirst(int n, std::initializer_list<std::pair<double, double>> rows) {
  RowMatrix m = RowMatrix::Zero(static_cast<Eigen::Index>(rows.size()), n + 1);
  int k = 0;
  for (const auto& [slope, constant] : rows) {
    m(k, 0) = slope;
    m(k, n) = constant;
    ++k;
  }
  return m;
}

}  // namespace

PiecewiseModel TentModel(int n) {
  return PiecewiseModel(OnFirst(n, {{0.0, 1.0}}), OnFirst(n, {{1.0, -1.0}, {-1.0, 1.0}}),
                        AffineFeatureMap(n), AffineFeatureMap(n));
}

PiecewiseModel AbsModel(int n) {
  return PiecewiseModel::Convex(OnFirst(n, {{1.0, 0.0}, {-1.0, 0.0}}), AffineFeatureMap(n));
}

PiecewiseModel RandomPwaModel(int n, int p1, int p2, std::uint64_t seed) {
  Require(n >= 1 && p1 >= 1 && p2 >= 0, ErrorKind::kInvalidConfig,
          "random-pwa needs n >= 1, p1 >= 1, p2 >= 0");
  auto rng = Stream(seed, 7);
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix v(p1, n + 1);
  RowMatrix w(p2, n + 1);
  for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = normal(rng);
  if (p2 == 0) return PiecewiseModel::Convex(std::move(v), AffineFeatureMap(n));
  return PiecewiseModel(std::move(v), std::move(w), AffineFeatureMap(n), AffineFeatureMap(n));
}

PiecewiseModel SinPiecewiseModel() {
  FeatureMap g(1, {Constant{}, Monomial{{1}}, Sinusoid{0.2, 0}});
  RowMatrix v(3, 3);
  v << 0.0, 0.1, 2.0,
       1.0, -0.2, 1.0,
       -1.5, 0.3, -1.0;
  RowMatrix w(3, 2);
  w << 0.0, 0.05,
       1.0, -0.25,
       -2.0, 0.3;
  return PiecewiseModel(std::move(v), std::move(w), std::move(g), AffineFeatureMap(1));
}

RowMatrix GridPoints(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                     const std::vector<int>& counts) {
  const int n = static_cast<int>(lower.size());
  Require(static_cast<int>(counts.size()) == n, ErrorKind::kInvalidConfig,
          "grid needs one point count per coordinate");
  long long total = 1;
  for (int c : counts) {
    Require(c >= 1, ErrorKind::kInvalidConfig, "grid counts must be positive");
    total *= c;
    Require(total <= 100000000, ErrorKind::kInvalidConfig, "grid too large");
  }
  RowMatrix x(total, n);
  std::vector<int> idx(n, 0);
  for (long long r = 0; r < total; ++r) {
    for (int j = 0; j < n; ++j) {
      x(r, j) = counts[j] == 1
                    ? lower[j]
                    : lower[j] + (upper[j] - lower[j]) * idx[j] / (counts[j] - 1);
    }
    for (int j = n - 1; j >= 0; --j) {
      if (++idx[j] < counts[j]) break;
      idx[j] = 0;
    }
  }
  return x;
}

PiecewiseModel GeneratorModel(const GeneratorConfig& cfg) {
  Require(cfg.n >= 1, ErrorKind::kInvalidConfig, "dimension must be >= 1");
  if (cfg.name == "pwa-tent") return TentModel(cfg.n);
  if (cfg.name == "abs") return AbsModel(cfg.n);
  if (cfg.name == "random-pwa") {
    return RandomPwaModel(cfg.n, cfg.p1, cfg.p2, cfg.model_seed.value_or(cfg.seed));
  }
  if (cfg.name == "sin-piecewise") {
    Require(cfg.n == 1, ErrorKind::kInvalidConfig, "sin-piecewise is one-dimensional");
    return SinPiecewiseModel();
  }
  if (cfg.name == "model") {
    Require(cfg.model.has_value(), ErrorKind::kInvalidConfig, "generator 'model' needs a model");
    Require(cfg.model->dimension() == cfg.n, ErrorKind::kInvalidConfig,
            "model dimension differs from n");
    return *cfg.model;
  }
  Fail(ErrorKind::kInvalidConfig, "unknown generator '" + cfg.name +
                                      "' (pwa-tent, abs, random-pwa, sin-piecewise, model)");
}

Dataset Generate(const GeneratorConfig& cfg) {
  const PiecewiseModel model = GeneratorModel(cfg);
  const double default_hi = cfg.name == "sin-piecewise" ? 20.0 : 1.0;
  const Eigen::VectorXd lo = Expand(cfg.lower, cfg.n, -default_hi, "lower");
  const Eigen::VectorXd hi = Expand(cfg.upper, cfg.n, default_hi, "upper");
  Require(lo.allFinite() && hi.allFinite() && (lo.array() <= hi.array()).all(),
          ErrorKind::kInvalidConfig, "sampling box must be finite with lower <= upper");
  Require(cfg.noise_sigma >= 0.0 && std::isfinite(cfg.noise_sigma), ErrorKind::kInvalidConfig,
          "noise sigma must be finite and non-negative");

  RowMatrix x;
  if (!cfg.grid.empty()) {
    std::vector<int> counts = cfg.grid;
    if (counts.size() == 1) counts.assign(cfg.n, counts[0]);
    x = GridPoints(lo, hi, counts);
  } else {
    Require(cfg.samples >= 1, ErrorKind::kInvalidConfig,
            "give a grid or a positive number of samples");
    auto rng = Stream(cfg.seed, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    x.resize(cfg.samples, cfg.n);
    for (int i = 0; i < cfg.samples; ++i) {
      for (int j = 0; j < cfg.n; ++j) x(i, j) = lo[j] + (hi[j] - lo[j]) * unit(rng);
    }
  }
  Eigen::VectorXd y(x.rows());
  auto noise_rng = Stream(cfg.seed, 2);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    y[i] = model.Evaluate({x.row(i).data(), static_cast<std::size_t>(cfg.n)});
    if (cfg.noise_sigma > 0.0) y[i] += cfg.noise_sigma * noise(noise_rng);
  }
  return Dataset(std::move(x), std::move(y));
}

}  // namespace pwreg
