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

#include <cstdlib>
#include <string_view>

#include "pwreg/kernels.hpp"

namespace pwreg::kernels {

#if defined(PWREG_HAVE_AVX2)
const KernelTable& Avx2KernelTable();
#endif

const KernelTable* Avx2Kernels() {
#if defined(PWREG_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool supported =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &Avx2KernelTable() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& Active() {
  static const KernelTable& table = []() -> const KernelTable& {
    const char* env = std::getenv("PWREG_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") {
      return ScalarKernels();
    }
    if (const KernelTable* avx2 = Avx2Kernels()) return *avx2;
    return ScalarKernels();
  }();
  return table;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  return Active().dot(a.data(), b.data(), a.size());
}

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  return Active().squared_distance(a.data(), b.data(), a.size());
}

double InfNorm(std::span<const double> a) {
  return Active().inf_norm(a.data(), a.size());
}

}  // namespace pwreg::kernels
