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

// AVX2 variants. This translation unit is built with -mavx2 -mfma; nothing in
// it may run before the dispatcher has checked the CPU bits.

#include "pwreg/kernels.hpp"

#if defined(PWREG_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace pwreg::kernels {
namespace {

constexpr std::size_t kLanes = 4;

inline double HorizontalSum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double HorizontalMax(__m256d v) {
  alignas(32) double lanes[kLanes];
  _mm256_store_pd(lanes, v);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

inline __m256d Abs(__m256d v) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double DotAvx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 * kLanes <= n; i += 2 * kLanes) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + kLanes),
                           _mm256_loadu_pd(b + i + kLanes), acc1);
  }
  for (; i + kLanes <= n; i += kLanes) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double s = HorizontalSum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

double SquaredDistanceAvx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = HorizontalSum(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double InfNormAvx2(const double* a, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    m = _mm256_max_pd(Abs(_mm256_loadu_pd(a + i)), m);
  }
  double r = HorizontalMax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(a[i]));
  return r;
}

double InfNormDiffAvx2(const double* a, const double* b, std::size_t n) {
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    m = _mm256_max_pd(Abs(d), m);
  }
  double r = HorizontalMax(m);
  for (; i < n; ++i) r = std::max(r, std::fabs(a[i] - b[i]));
  return r;
}

void RelaxAvx2(double alpha, const double* a, const double* b, double* out,
               std::size_t n) {
  const double beta = 1.0 - alpha;
  const __m256d va = _mm256_set1_pd(alpha);
  const __m256d vb = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(va, _mm256_loadu_pd(a + i)),
                                    _mm256_mul_pd(vb, _mm256_loadu_pd(b + i)));
    _mm256_storeu_pd(out + i, r);
  }
  for (; i < n; ++i) out[i] = alpha * a[i] + beta * b[i];
}

// Operand order of max/min mirrors std::max/std::min in the scalar kernels so
// signed zeros resolve identically.
void ClampAvx2(const double* lower, const double* upper, double* v,
               std::size_t n) {
  std::size_t i = 0;
  for (; i + kLanes <= n; i += kLanes) {
    __m256d x = _mm256_max_pd(_mm256_loadu_pd(lower + i), _mm256_loadu_pd(v + i));
    x = _mm256_min_pd(_mm256_loadu_pd(upper + i), x);
    _mm256_storeu_pd(v + i, x);
  }
  for (; i < n; ++i) v[i] = std::min(std::max(v[i], lower[i]), upper[i]);
}

void AdmmProjectAvx2(const AdmmProjectArgs& a) {
  const double beta = 1.0 - a.alpha;
  const __m256d valpha = _mm256_set1_pd(a.alpha);
  const __m256d vbeta = _mm256_set1_pd(beta);
  std::size_t i = 0;
  for (; i + kLanes <= a.n; i += kLanes) {
    const __m256d zt = _mm256_loadu_pd(a.z_tilde + i);
    const __m256d zo = _mm256_loadu_pd(a.z + i);
    const __m256d y = _mm256_loadu_pd(a.y + i);
    const __m256d zr =
        _mm256_add_pd(_mm256_mul_pd(valpha, zt), _mm256_mul_pd(vbeta, zo));
    const __m256d v = _mm256_add_pd(zr, _mm256_mul_pd(y, _mm256_loadu_pd(a.rho_inv + i)));
    __m256d z = _mm256_max_pd(_mm256_loadu_pd(a.lower + i), v);
    z = _mm256_min_pd(_mm256_loadu_pd(a.upper + i), z);
    const __m256d yn = _mm256_add_pd(
        y, _mm256_mul_pd(_mm256_loadu_pd(a.rho + i), _mm256_sub_pd(zr, z)));
    _mm256_storeu_pd(a.y + i, yn);
    _mm256_storeu_pd(a.z + i, z);
  }
  for (; i < a.n; ++i) {
    const double zr = a.alpha * a.z_tilde[i] + beta * a.z[i];
    const double v = zr + a.y[i] * a.rho_inv[i];
    const double z = std::min(std::max(v, a.lower[i]), a.upper[i]);
    a.y[i] = a.y[i] + a.rho[i] * (zr - z);
    a.z[i] = z;
  }
}

}  // namespace

const KernelTable& Avx2KernelTable() {
  static const KernelTable table{
      "avx2",        DotAvx2,        SquaredDistanceAvx2, InfNormAvx2,
      InfNormDiffAvx2, RelaxAvx2,    ClampAvx2,           AdmmProjectAvx2,
  };
  return table;
}

}  // namespace pwreg::kernels

#endif  // PWREG_HAVE_AVX2
