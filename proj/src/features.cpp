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

#include "pwreg/features.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pwreg/error.hpp"

namespace pwreg {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double EvaluateOne(const BasisFunction& f, std::span<const double> x) {
  return std::visit(
      Overloaded{
          [](const Constant&) { return 1.0; },
          [&](const Monomial& m) {
            double v = 1.0;
            for (std::size_t j = 0; j < m.exponents.size(); ++j) {
              for (int e = 0; e < m.exponents[j]; ++e) v *= x[j];
            }
            return v;
          },
          [&](const Sinusoid& s) { return std::sin(s.frequency * x[s.index]); },
      },
      f);
}

void CheckBasis(int n, const BasisFunction& f) {
  if (const auto* m = std::get_if<Monomial>(&f)) {
    Require(static_cast<int>(m->exponents.size()) == n,
            ErrorKind::kInvalidDimension,
            "monomial exponent vector has length " +
                std::to_string(m->exponents.size()) + ", expected " +
                std::to_string(n));
    for (int e : m->exponents) {
      Require(e >= 0, ErrorKind::kInvalidDimension,
              "monomial exponents must be non-negative");
    }
  } else if (const auto* s = std::get_if<Sinusoid>(&f)) {
    Require(s->index >= 0 && s->index < n, ErrorKind::kInvalidDimension,
            "sinusoid coordinate index " + std::to_string(s->index) +
                " outside [0, " + std::to_string(n) + ")");
    Require(std::isfinite(s->frequency), ErrorKind::kNumericInput,
            "sinusoid frequency must be finite");
  }
}

void AppendExponents(int n, int remaining, int position, std::vector<int>& current,
                     std::vector<BasisFunction>& out) {
  if (position == n - 1) {
    current[position] = remaining;
    out.emplace_back(Monomial{current});
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[position] = e;
    AppendExponents(n, remaining - e, position + 1, current, out);
  }
}

double ParseDouble(const std::string& token, const std::string& spec) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  Require(used == token.size() && !token.empty(), ErrorKind::kParse,
          "bad number '" + token + "' in feature spec '" + spec + "'");
  return v;
}

int ParseInt(const std::string& token, const std::string& spec) {
  int v = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), v);
  Require(ec == std::errc() && ptr == token.data() + token.size() &&
              !token.empty(),
          ErrorKind::kParse,
          "bad integer '" + token + "' in feature spec '" + spec + "'");
  return v;
}

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

int Monomial::Degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), 0);
}

FeatureMap::FeatureMap(int dimension, std::vector<BasisFunction> basis)
    : dimension_(dimension), basis_(std::move(basis)) {
  Require(dimension_ >= 1, ErrorKind::kInvalidDimension,
          "feature map dimension must be >= 1");
  Require(!basis_.empty(), ErrorKind::kInvalidDimension,
          "feature map needs at least one basis function");
  for (const auto& f : basis_) CheckBasis(dimension_, f);
}

Eigen::VectorXd FeatureMap::Evaluate(std::span<const double> x) const {
  Require(static_cast<int>(x.size()) == dimension_, ErrorKind::kInvalidDimension,
          "input has length " + std::to_string(x.size()) + ", expected " +
              std::to_string(dimension_));
  for (double v : x) {
    Require(std::isfinite(v), ErrorKind::kNumericInput, "non-finite input");
  }
  Eigen::VectorXd out(size());
  EvaluateInto(x, std::span<double>(out.data(), out.size()));
  return out;
}

void FeatureMap::EvaluateInto(std::span<const double> x,
                              std::span<double> out) const {
  for (std::size_t j = 0; j < basis_.size(); ++j) out[j] = EvaluateOne(basis_[j], x);
}

bool FeatureMap::IsAffine() const {
  for (const auto& f : basis_) {
    if (std::holds_alternative<Sinusoid>(f)) return false;
    if (const auto* m = std::get_if<Monomial>(&f); m && m->Degree() > 1) {
      return false;
    }
  }
  return true;
}

AffineParts FeatureMap::Affine() const {
  Require(IsAffine(), ErrorKind::kUnsupportedFeature,
          "feature map is not affine in x");
  AffineParts parts{Eigen::MatrixXd::Zero(size(), dimension_),
                    Eigen::VectorXd::Zero(size())};
  for (int j = 0; j < size(); ++j) {
    const auto& f = basis_[j];
    if (std::holds_alternative<Constant>(f)) {
      parts.offset[j] = 1.0;
      continue;
    }
    const auto& m = std::get<Monomial>(f);
    if (m.Degree() == 0) {
      parts.offset[j] = 1.0;
      continue;
    }
    for (int c = 0; c < dimension_; ++c) {
      if (m.exponents[c] == 1) parts.linear(j, c) = 1.0;
    }
  }
  return parts;
}

bool FeatureMap::HasConstant() const {
  for (const auto& f : basis_) {
    if (std::holds_alternative<Constant>(f)) return true;
    if (const auto* m = std::get_if<Monomial>(&f); m && m->Degree() == 0) {
      return true;
    }
  }
  return false;
}

FeatureMap AffineFeatureMap(int n) {
  Require(n >= 1, ErrorKind::kInvalidDimension,
          "affine feature map needs n >= 1");
  std::vector<BasisFunction> basis;
  basis.reserve(n + 1);
  for (int j = 0; j < n; ++j) {
    std::vector<int> e(n, 0);
    e[j] = 1;
    basis.emplace_back(Monomial{std::move(e)});
  }
  basis.emplace_back(Constant{});
  return FeatureMap(n, std::move(basis));
}

std::vector<BasisFunction> MonomialBasis(int n, int degree) {
  Require(n >= 1, ErrorKind::kInvalidDimension, "monomial basis needs n >= 1");
  Require(degree >= 0, ErrorKind::kInvalidConfig,
          "monomial degree must be non-negative");
  std::vector<BasisFunction> basis;
  basis.emplace_back(Constant{});
  std::vector<int> current(n, 0);
  for (int d = 1; d <= degree; ++d) AppendExponents(n, d, 0, current, basis);
  return basis;
}

FeatureMap ParseFeatureSpec(const std::string& spec, int n, int max_degree) {
  Require(n >= 1, ErrorKind::kInvalidDimension, "feature spec needs n >= 1");
  std::vector<BasisFunction> basis;
  for (const std::string& term : Split(spec, '+')) {
    const auto fields = Split(term, ':');
    Require(!fields.empty() && !fields[0].empty(), ErrorKind::kParse,
            "empty term in feature spec '" + spec + "'");
    const std::string& head = fields[0];
    if (head == "affine" && fields.size() == 1) {
      const auto affine = AffineFeatureMap(n).basis();
      basis.insert(basis.end(), affine.begin(), affine.end());
    } else if (head == "monomials" && fields.size() == 2) {
      const int d = ParseInt(fields[1], spec);
      Require(d <= max_degree, ErrorKind::kInvalidConfig,
              "monomial degree " + std::to_string(d) + " exceeds the cap " +
                  std::to_string(max_degree));
      const auto mono = MonomialBasis(n, d);
      basis.insert(basis.end(), mono.begin(), mono.end());
    } else if (head == "sin" && fields.size() == 3) {
      basis.emplace_back(
          Sinusoid{ParseDouble(fields[1], spec), ParseInt(fields[2], spec)});
    } else if (head == "const" && fields.size() == 1) {
      basis.emplace_back(Constant{});
    } else {
      Fail(ErrorKind::kParse, "unrecognized feature term '" + term + "'");
    }
  }
  return FeatureMap(n, std::move(basis));
}

std::string Describe(const BasisFunction& f) {
  return std::visit(
      Overloaded{
          [](const Constant&) { return std::string("1"); },
          [](const Monomial& m) {
            std::string s;
            for (std::size_t j = 0; j < m.exponents.size(); ++j) {
              if (m.exponents[j] == 0) continue;
              if (!s.empty()) s += "*";
              s += "x" + std::to_string(j + 1);
              if (m.exponents[j] > 1) s += "^" + std::to_string(m.exponents[j]);
            }
            return s.empty() ? std::string("1") : s;
          },
          [](const Sinusoid& s) {
            std::ostringstream o;
            o << "sin(" << s.frequency << "*x" << (s.index + 1) << ")";
            return o.str();
          },
      },
      f);
}

}  // namespace pwreg
