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

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace pwreg {

struct Constant {
  friend bool operator==(const Constant&, const Constant&) = default;
};

/// prod_j x_j^exponents[j]
struct Monomial {
  std::vector<int> exponents;
  int Degree() const;
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// sin(frequency * x[index])
struct Sinusoid {
  double frequency = 1.0;
  int index = 0;
  friend bool operator==(const Sinusoid&, const Sinusoid&) = default;
};

using BasisFunction = std::variant<Constant, Monomial, Sinusoid>;

/// Affine view of a feature map: features(x) = linear * x + offset.
struct AffineParts {
  Eigen::MatrixXd linear;  // r x n
  Eigen::VectorXd offset;  // r
};

/// Ordered list of scalar basis functions on R^n, the g(x) / h(x) of a
/// difference-of-max model. Immutable once built.
class FeatureMap {
 public:
  /// Throws kInvalidDimension if n < 1, the basis is empty, or a basis
  /// function is inconsistent with n.
  FeatureMap(int dimension, std::vector<BasisFunction> basis);

  int dimension() const { return dimension_; }
  int size() const { return static_cast<int>(basis_.size()); }
  const std::vector<BasisFunction>& basis() const { return basis_; }

  /// Throws kInvalidDimension on a length mismatch and kNumericInput on
  /// non-finite entries.
  Eigen::VectorXd Evaluate(std::span<const double> x) const;

  /// Unchecked evaluation into a caller-provided buffer of length size().
  void EvaluateInto(std::span<const double> x, std::span<double> out) const;

  /// True when every basis function is a constant or has total degree <= 1.
  bool IsAffine() const;

  /// Throws kUnsupportedFeature unless IsAffine().
  AffineParts Affine() const;

  bool HasConstant() const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  int dimension_;
  std::vector<BasisFunction> basis_;
};

/// x -> (x_1, ..., x_n, 1).
FeatureMap AffineFeatureMap(int n);

/// All monomials of total degree <= degree in graded lexicographic order,
/// constant first: for n = 2, degree = 2 that is 1, x1, x2, x1^2, x1 x2, x2^2.
std::vector<BasisFunction> MonomialBasis(int n, int degree);

/// Parses the feature mini-language used by the CLI:
///   "affine"            x_1..x_n, 1
///   "monomials:d"       MonomialBasis(n, d)
///   "...+sin:f:i"       append sin(f * x_i) (i is zero based)
///   "const"             the constant 1
/// Terms are joined with '+', e.g. "monomials:1+sin:0.2:0".
/// Monomial degree above max_degree is rejected (kInvalidConfig).
FeatureMap ParseFeatureSpec(const std::string& spec, int n, int max_degree = 3);

std::string Describe(const BasisFunction& f);

}  // namespace pwreg
