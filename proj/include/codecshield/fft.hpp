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

#ifndef CODECSHIELD_FFT_HPP_
#define CODECSHIELD_FFT_HPP_

#include <complex>
#include <cstddef>
#include <vector>

namespace codecshield {

// Iterative radix-2 complex FFT with precomputed twiddles. Sizes are powers
// of two; forward uses e^{-i2pi kn/N}, Inverse() applies the unnormalized
// conjugate transform (no 1/N factor).
class Fft {
 public:
  explicit Fft(size_t n);

  size_t size() const { return n_; }

  // In-place transforms on a buffer of size() complex values.
  void Forward(std::complex<double>* data) const;
  void InverseUnnormalized(std::complex<double>* data) const;

 private:
  void Transform(std::complex<double>* data, bool inverse) const;

  size_t n_;
  std::vector<size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;      // e^{-i2pi k/N}, k < N/2
  std::vector<std::complex<double>> twiddle_inv_;  // conjugates
};

}  // namespace codecshield

#endif  // CODECSHIELD_FFT_HPP_
