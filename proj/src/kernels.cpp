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

#include "codecshield/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace codecshield::kernels {

// ---------------------------------------------------------------------------
// Scalar reference kernels. These define the semantics; SIMD variants must
// match them up to summation order.
// ---------------------------------------------------------------------------

namespace {

double DotScalar(const double* a, const double* b, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void AxpyScalar(double alpha, const double* x, double* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double SumSqScalar(const double* a, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double SumSqDiffScalar(const double* a, const double* b, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void ClippedSignStepScalar(const double* x, const double* g, const double* lo,
                           const double* hi, double step, double* out,
                           size_t n) {
  for (size_t i = 0; i < n; ++i) {
    double s = (g[i] > 0.0) ? 1.0 : (g[i] < 0.0 ? -1.0 : 0.0);
    double v = x[i] + step * s;
    if (v < lo[i]) v = lo[i];
    if (v > hi[i]) v = hi[i];
    out[i] = v;
  }
}

struct KernelTable {
  double (*dot)(const double*, const double*, size_t);
  void (*axpy)(double, const double*, double*, size_t);
  double (*sumsq)(const double*, size_t);
  double (*sumsq_diff)(const double*, const double*, size_t);
  void (*clipped_sign_step)(const double*, const double*, const double*,
                            const double*, double, double*, size_t);
};

constexpr KernelTable kScalarTable = {
    DotScalar, AxpyScalar, SumSqScalar, SumSqDiffScalar, ClippedSignStepScalar};

}  // namespace

namespace detail {

#if defined(CODECSHIELD_HAVE_AVX2)
double DotAvx2(const double* a, const double* b, size_t n);
void AxpyAvx2(double alpha, const double* x, double* y, size_t n);
double SumSqAvx2(const double* a, size_t n);
double SumSqDiffAvx2(const double* a, const double* b, size_t n);
void ClippedSignStepAvx2(const double* x, const double* g, const double* lo,
                         const double* hi, double step, double* out, size_t n);
#endif

#if defined(CODECSHIELD_HAVE_NEON)
double DotNeon(const double* a, const double* b, size_t n);
void AxpyNeon(double alpha, const double* x, double* y, size_t n);
double SumSqNeon(const double* a, size_t n);
double SumSqDiffNeon(const double* a, const double* b, size_t n);
void ClippedSignStepNeon(const double* x, const double* g, const double* lo,
                         const double* hi, double step, double* out, size_t n);
#endif

}  // namespace detail

namespace {

#if defined(CODECSHIELD_HAVE_AVX2)
constexpr KernelTable kAvx2Table = {
    detail::DotAvx2, detail::AxpyAvx2, detail::SumSqAvx2,
    detail::SumSqDiffAvx2, detail::ClippedSignStepAvx2};
#endif

#if defined(CODECSHIELD_HAVE_NEON)
constexpr KernelTable kNeonTable = {
    detail::DotNeon, detail::AxpyNeon, detail::SumSqNeon,
    detail::SumSqDiffNeon, detail::ClippedSignStepNeon};
#endif

bool IsaSupported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(CODECSHIELD_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(CODECSHIELD_HAVE_NEON)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* TableFor(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &kScalarTable;
    case Isa::kAvx2:
#if defined(CODECSHIELD_HAVE_AVX2)
      return &kAvx2Table;
#else
      return nullptr;
#endif
    case Isa::kNeon:
#if defined(CODECSHIELD_HAVE_NEON)
      return &kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

Isa PickDefaultIsa() {
  if (const char* env = std::getenv("CODECSHIELD_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Isa::kScalar;
    if (std::strcmp(env, "avx2") == 0 && IsaSupported(Isa::kAvx2))
      return Isa::kAvx2;
    if (std::strcmp(env, "neon") == 0 && IsaSupported(Isa::kNeon))
      return Isa::kNeon;
  }
  if (IsaSupported(Isa::kAvx2)) return Isa::kAvx2;
  if (IsaSupported(Isa::kNeon)) return Isa::kNeon;
  return Isa::kScalar;
}

struct Dispatch {
  Isa isa;
  const KernelTable* table;
  Dispatch() : isa(PickDefaultIsa()), table(TableFor(isa)) {}
};

Dispatch& ActiveDispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

Isa ActiveIsa() { return ActiveDispatch().isa; }

const char* IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool SetIsa(Isa isa) {
  if (!IsaSupported(isa)) return false;
  ActiveDispatch().isa = isa;
  ActiveDispatch().table = TableFor(isa);
  return true;
}

double Dot(const double* a, const double* b, size_t n) {
  return ActiveDispatch().table->dot(a, b, n);
}

void Axpy(double alpha, const double* x, double* y, size_t n) {
  ActiveDispatch().table->axpy(alpha, x, y, n);
}

double SumSq(const double* a, size_t n) {
  return ActiveDispatch().table->sumsq(a, n);
}

double SumSqDiff(const double* a, const double* b, size_t n) {
  return ActiveDispatch().table->sumsq_diff(a, b, n);
}

void ClippedSignStep(const double* x, const double* g, const double* lo,
                     const double* hi, double step, double* out, size_t n) {
  ActiveDispatch().table->clipped_sign_step(x, g, lo, hi, step, out, n);
}

}  // namespace codecshield::kernels
