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

// NEON variants of the double-precision kernels (aarch64, 2 lanes per
// vector). Compiled only on ARM builds.

#if defined(CODECSHIELD_HAVE_NEON)

#include <arm_neon.h>

#include <cstddef>

namespace codecshield::kernels::detail {

double DotNeon(const double* a, const double* b, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void AxpyNeon(double alpha, const double* x, double* y, size_t n) {
  float64x2_t va = vdupq_n_f64(alpha);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t y0 = vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i));
    float64x2_t y1 = vfmaq_f64(vld1q_f64(y + i + 2), va, vld1q_f64(x + i + 2));
    vst1q_f64(y + i, y0);
    vst1q_f64(y + i + 2, y1);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double SumSqNeon(const double* a, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t v0 = vld1q_f64(a + i);
    float64x2_t v1 = vld1q_f64(a + i + 2);
    acc0 = vfmaq_f64(acc0, v0, v0);
    acc1 = vfmaq_f64(acc1, v1, v1);
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) acc += a[i] * a[i];
  return acc;
}

double SumSqDiffNeon(const double* a, const double* b, size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    acc0 = vfmaq_f64(acc0, d0, d0);
    acc1 = vfmaq_f64(acc1, d1, d1);
  }
  double acc = vaddvq_f64(acc0) + vaddvq_f64(acc1);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

void ClippedSignStepNeon(const double* x, const double* g, const double* lo,
                         const double* hi, double step, double* out,
                         size_t n) {
  const float64x2_t vzero = vdupq_n_f64(0.0);
  const float64x2_t vone = vdupq_n_f64(1.0);
  const float64x2_t vmone = vdupq_n_f64(-1.0);
  const float64x2_t vstep = vdupq_n_f64(step);
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t gv = vld1q_f64(g + i);
    uint64x2_t pos = vcgtq_f64(gv, vzero);
    uint64x2_t neg = vcltq_f64(gv, vzero);
    float64x2_t sgn = vbslq_f64(pos, vone, vbslq_f64(neg, vmone, vzero));
    float64x2_t v = vfmaq_f64(vld1q_f64(x + i), vstep, sgn);
    v = vmaxq_f64(v, vld1q_f64(lo + i));
    v = vminq_f64(v, vld1q_f64(hi + i));
    vst1q_f64(out + i, v);
  }
  for (; i < n; ++i) {
    double s = (g[i] > 0.0) ? 1.0 : (g[i] < 0.0 ? -1.0 : 0.0);
    double v = x[i] + step * s;
    if (v < lo[i]) v = lo[i];
    if (v > hi[i]) v = hi[i];
    out[i] = v;
  }
}

}  // namespace codecshield::kernels::detail

#endif  // CODECSHIELD_HAVE_NEON
