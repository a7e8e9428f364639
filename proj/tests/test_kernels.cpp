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

#include <cmath>
#include <vector>

#include "codecshield/kernels.hpp"
#include "codecshield/rng.hpp"
#include "doctest.h"

using codecshield::Rng;
namespace kernels = codecshield::kernels;

namespace {

struct IsaGuard {
  kernels::Isa prev = kernels::ActiveIsa();
  ~IsaGuard() { kernels::SetIsa(prev); }
};

std::vector<double> RandVec(Rng* rng, size_t n, double lo = -2.0,
                            double hi = 2.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng->Uniform(lo, hi);
  return v;
}

std::vector<kernels::Isa> SupportedIsas() {
  std::vector<kernels::Isa> isas = {kernels::Isa::kScalar};
  IsaGuard guard;
  if (kernels::SetIsa(kernels::Isa::kAvx2)) isas.push_back(kernels::Isa::kAvx2);
  if (kernels::SetIsa(kernels::Isa::kNeon)) isas.push_back(kernels::Isa::kNeon);
  return isas;
}

}  // namespace

TEST_CASE("scalar kernels match hand-rolled loops") {
  IsaGuard guard;
  REQUIRE(kernels::SetIsa(kernels::Isa::kScalar));
  Rng rng(1);
  auto a = RandVec(&rng, 123);
  auto b = RandVec(&rng, 123);

  double dot = 0.0, asq = 0.0, dsq = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    asq += a[i] * a[i];
    double d = a[i] - b[i];
    dsq += d * d;
  }
  CHECK(kernels::Dot(a.data(), b.data(), a.size()) ==
        doctest::Approx(dot).epsilon(1e-15));
  CHECK(kernels::SumSq(a.data(), a.size()) ==
        doctest::Approx(asq).epsilon(1e-15));
  CHECK(kernels::SumSqDiff(a.data(), b.data(), a.size()) ==
        doctest::Approx(dsq).epsilon(1e-15));

  auto y = b;
  kernels::Axpy(0.37, a.data(), y.data(), a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(y[i] == doctest::Approx(b[i] + 0.37 * a[i]).epsilon(1e-15));
  }
}

TEST_CASE("simd variants agree with the scalar reference") {
  IsaGuard guard;
  Rng rng(2);
  const std::vector<size_t> sizes = {0,  1,  2,  3,  4,  5,   7,   8,  9,
                                     15, 16, 31, 63, 64, 257, 320, 1001};
  for (size_t n : sizes) {
    auto a = RandVec(&rng, n);
    auto b = RandVec(&rng, n);
    auto y0 = RandVec(&rng, n);

    REQUIRE(kernels::SetIsa(kernels::Isa::kScalar));
    double dot_ref = kernels::Dot(a.data(), b.data(), n);
    double sumsq_ref = kernels::SumSq(a.data(), n);
    double diff_ref = kernels::SumSqDiff(a.data(), b.data(), n);
    auto axpy_ref = y0;
    kernels::Axpy(1.7, a.data(), axpy_ref.data(), n);

    for (kernels::Isa isa : SupportedIsas()) {
      if (isa == kernels::Isa::kScalar) continue;
      REQUIRE(kernels::SetIsa(isa));
      CHECK(kernels::Dot(a.data(), b.data(), n) ==
            doctest::Approx(dot_ref).epsilon(1e-12));
      CHECK(kernels::SumSq(a.data(), n) ==
            doctest::Approx(sumsq_ref).epsilon(1e-12));
      CHECK(kernels::SumSqDiff(a.data(), b.data(), n) ==
            doctest::Approx(diff_ref).epsilon(1e-12));
      auto y = y0;
      kernels::Axpy(1.7, a.data(), y.data(), n);
      for (size_t i = 0; i < n; ++i) {
        CHECK(y[i] == doctest::Approx(axpy_ref[i]).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("clipped sign step: semantics and cross-isa bit equality") {
  IsaGuard guard;
  Rng rng(3);
  const size_t n = 133;
  auto x = RandVec(&rng, n, -0.9, 0.9);
  auto g = RandVec(&rng, n, -1.0, 1.0);
  g[0] = 0.0;  // sgn(0) must hold the sample still
  g[17] = 0.0;
  std::vector<double> lo(n), hi(n);
  for (size_t i = 0; i < n; ++i) {
    lo[i] = x[i] - 3.0 / 32768.0;
    hi[i] = x[i] + 3.0 / 32768.0;
  }
  // Tighten a few bounds so clipping actually engages.
  hi[5] = x[5];
  lo[9] = x[9];

  REQUIRE(kernels::SetIsa(kernels::Isa::kScalar));
  std::vector<double> ref(n);
  const double step = 1.0 / 32768.0;
  kernels::ClippedSignStep(x.data(), g.data(), lo.data(), hi.data(), step,
                           ref.data(), n);
  for (size_t i = 0; i < n; ++i) {
    double s = g[i] > 0 ? 1.0 : (g[i] < 0 ? -1.0 : 0.0);
    double want = std::min(std::max(x[i] + step * s, lo[i]), hi[i]);
    CHECK(ref[i] == want);
  }
  CHECK(ref[0] == x[0]);
  CHECK(ref[17] == x[17]);
  CHECK(ref[5] <= x[5]);
  CHECK(ref[9] >= x[9]);

  for (kernels::Isa isa : SupportedIsas()) {
    REQUIRE(kernels::SetIsa(isa));
    std::vector<double> out(n);
    kernels::ClippedSignStep(x.data(), g.data(), lo.data(), hi.data(), step,
                             out.data(), n);
    // Elementwise with no reduction: every variant must agree exactly.
    for (size_t i = 0; i < n; ++i) CHECK(out[i] == ref[i]);
  }
}

TEST_CASE("clipped sign step works in place") {
  IsaGuard guard;
  Rng rng(4);
  const size_t n = 77;
  auto x = RandVec(&rng, n, -0.5, 0.5);
  auto g = RandVec(&rng, n);
  std::vector<double> lo(n, -1.0), hi(n, 1.0);
  std::vector<double> expected(n);
  kernels::ClippedSignStep(x.data(), g.data(), lo.data(), hi.data(), 0.25,
                           expected.data(), n);
  auto inplace = x;
  kernels::ClippedSignStep(inplace.data(), g.data(), lo.data(), hi.data(), 0.25,
                           inplace.data(), n);
  for (size_t i = 0; i < n; ++i) CHECK(inplace[i] == expected[i]);
}
