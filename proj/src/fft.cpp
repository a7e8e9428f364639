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

#include "codecshield/fft.hpp"

#include <cmath>

#include "codecshield/common.hpp"

namespace codecshield {

Fft::Fft(size_t n) : n_(n) {
  if (n == 0 || (n & (n - 1)) != 0) {
    throw InputError("FFT size must be a nonzero power of two, got " +
                     std::to_string(n));
  }
  bitrev_.resize(n);
  size_t log2n = 0;
  while ((1u << log2n) < n) ++log2n;
  for (size_t i = 0; i < n; ++i) {
    size_t r = 0;
    for (size_t b = 0; b < log2n; ++b) {
      if (i & (1u << b)) r |= 1u << (log2n - 1 - b);
    }
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  twiddle_inv_.resize(n / 2);
  for (size_t k = 0; k < n / 2; ++k) {
    double theta = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
    twiddle_[k] = {std::cos(theta), std::sin(theta)};
    twiddle_inv_[k] = std::conj(twiddle_[k]);
  }
}

void Fft::Transform(std::complex<double>* data, bool inverse) const {
  const auto& tw = inverse ? twiddle_inv_ : twiddle_;
  for (size_t i = 0; i < n_; ++i) {
    size_t j = bitrev_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  for (size_t len = 2; len <= n_; len <<= 1) {
    size_t half = len >> 1;
    size_t step = n_ / len;
    for (size_t start = 0; start < n_; start += len) {
      for (size_t k = 0; k < half; ++k) {
        std::complex<double> w = tw[k * step];
        std::complex<double> u = data[start + k];
        std::complex<double> t = w * data[start + k + half];
        data[start + k] = u + t;
        data[start + k + half] = u - t;
      }
    }
  }
}

void Fft::Forward(std::complex<double>* data) const { Transform(data, false); }

void Fft::InverseUnnormalized(std::complex<double>* data) const {
  Transform(data, true);
}

}  // namespace codecshield
