// Copyright (c) 2026 codecshield authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CODECSHIELD_KERNELS_HPP_
#define CODECSHIELD_KERNELS_HPP_

#include <cstddef>

// Double-precision inner-loop kernels behind the feature, model, attack and
// codec math. A scalar reference implementation always exists; AVX2 (x86-64)
// and NEON (aarch64) variants are selected once at startup from CPU
// capabilities. The variants may differ from the reference in summation
// order only, so cross-variant tests compare with a relative tolerance while
// any fixed variant stays bit-deterministic run to run.
//
// Set CODECSHIELD_SIMD=scalar|avx2|neon to override the automatic choice.

namespace codecshield::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

Isa ActiveIsa();
const char* IsaName(Isa isa);

// Selects a variant; returns false (and leaves the selection unchanged)
// if the host cannot run it.
bool SetIsa(Isa isa);

// sum_i a[i] * b[i]
double Dot(const double* a, const double* b, size_t n);

// y[i] += alpha * x[i]
void Axpy(double alpha, const double* x, double* y, size_t n);

// sum_i a[i]^2
double SumSq(const double* a, size_t n);

// sum_i (a[i] - b[i])^2
double SumSqDiff(const double* a, const double* b, size_t n);

// out[i] = min(max(x[i] + step * sgn(g[i]), lo[i]), hi[i]) with sgn(0) = 0.
// The elementwise update of a sign-gradient attack step.
void ClippedSignStep(const double* x, const double* g, const double* lo,
                     const double* hi, double step, double* out, size_t n);

}  // namespace codecshield::kernels

#endif  // CODECSHIELD_KERNELS_HPP_
