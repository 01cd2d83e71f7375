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

// Reference implementations. Compiled with -ffp-contract=off so that no
// multiply-add is fused behind our back; the AVX2 elementwise kernels follow
// the same operation order and must match these bit for bit.

#include <algorithm>
#include <cmath>

#include "pwreg/kernels.hpp"

namespace pwreg::kernels {
namespace {

double DotScalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double SquaredDistanceScalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double InfNormScalar(const double* a, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i]));
  return m;
}

double InfNormDiffScalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

void RelaxScalar(double alpha, const double* a, const double* b, double* out,
                 std::size_t n) {
  const double beta = 1.0 - alpha;
  for (std::size_t i = 0; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

void ClampScalar(const double* lower, const double* upper, double* v,
                 std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::min(std::max(v[i], lower[i]), upper[i]);
  }
}

void AdmmProjectScalar(const AdmmProjectArgs& a) {
  const double beta = 1.0 - a.alpha;
  for (std::size_t i = 0; i < a.n; ++i) {
    const double zr = a.alpha * a.z_tilde[i] + beta * a.z[i];
    const double v = zr + a.y[i] * a.rho_inv[i];
    const double z = std::min(std::max(v, a.lower[i]), a.upper[i]);
    a.y[i] = a.y[i] + a.rho[i] * (zr - z);
    a.z[i] = z;
  }
}

}  // namespace

const KernelTable& ScalarKernels() {
  static const KernelTable table{
      "scalar",          DotScalar,    SquaredDistanceScalar,
      InfNormScalar,     InfNormDiffScalar, RelaxScalar,
      ClampScalar,       AdmmProjectScalar,
  };
  return table;
}

}  // namespace pwreg::kernels
