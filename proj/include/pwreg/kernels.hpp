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

// Data-parallel inner loops used by the solvers, the model evaluator and the
// clustering code. Every kernel has a portable scalar reference version and,
// on x86-64, an AVX2 version. The variant is picked once per process from the
// CPU feature bits (override with PWREG_SIMD=scalar), so results are
// reproducible run to run on a given machine.
//
// Elementwise kernels are bit-identical across variants. Reductions
// (dot, squared_distance) differ only in summation order.

#pragma once

#include <cstddef>
#include <span>

namespace pwreg::kernels {

/// Arguments of the fused ADMM projection / dual update, one entry per
/// constraint row:
///   zr    = alpha * z_tilde + (1 - alpha) * z
///   z     = clamp(zr + y / rho, lower, upper)
///   y    += rho * (zr - z)
struct AdmmProjectArgs {
  const double* z_tilde;
  const double* rho;
  const double* rho_inv;
  const double* lower;
  const double* upper;
  double* z;
  double* y;
  double alpha;
  std::size_t n;
};

struct KernelTable {
  const char* name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
  double (*inf_norm)(const double* a, std::size_t n);
  double (*inf_norm_diff)(const double* a, const double* b, std::size_t n);
  // out = alpha * a + (1 - alpha) * b
  void (*relax)(double alpha, const double* a, const double* b, double* out,
                std::size_t n);
  void (*clamp)(const double* lower, const double* upper, double* v,
                std::size_t n);
  void (*admm_project)(const AdmmProjectArgs& args);
};

const KernelTable& ScalarKernels();

/// AVX2 table, or nullptr when not compiled in or not supported by the CPU.
const KernelTable* Avx2Kernels();

/// The table selected for this process.
const KernelTable& Active();

// Span conveniences over the active table.
double Dot(std::span<const double> a, std::span<const double> b);
double SquaredDistance(std::span<const double> a, std::span<const double> b);
double InfNorm(std::span<const double> a);

}  // namespace pwreg::kernels
