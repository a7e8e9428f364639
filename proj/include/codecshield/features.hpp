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

#ifndef CODECSHIELD_FEATURES_HPP_
#define CODECSHIELD_FEATURES_HPP_

#include <complex>
#include <vector>

#include "codecshield/common.hpp"
#include "codecshield/fft.hpp"

namespace codecshield {

// Log-mel filterbank front-end: 25 ms Hamming frames at a 10 ms stride,
// 512-point power spectrum, 64 triangular mel filters, log with a 1e-10
// floor. LogMelBackward is the exact adjoint of LogMelForward, so the
// attack can differentiate scores with respect to raw samples.
//
// Filter weights and window coefficients are canonically float32 (that is
// what the model container stores); arithmetic promotes them to double.

constexpr double kLogMelFloor = 1e-10;

struct FrameSpec {
  int win_len = 400;  // 25 ms at 16 kHz
  int hop = 160;      // 10 ms
  int nfft = 512;
  std::vector<float> window;  // Hamming, win_len coefficients

  int bins() const { return nfft / 2 + 1; }

  // Rebuilds the double mirror after window changes (construction, load).
  void Finalize();
  const std::vector<double>& window_d() const { return window_d_; }

  static FrameSpec MakeDefault();

 private:
  std::vector<double> window_d_;
};

struct MelBank {
  int n_mels = 64;
  double fmin_hz = 20.0;
  double fmax_hz = 7600.0;
  std::vector<float> weights;  // n_mels x bins, row-major

  void Finalize();
  const std::vector<double>& weights_d() const { return weights_d_; }

  // HTK mel scale: 2595 * log10(1 + f/700).
  static double HzToMel(double hz);
  static double MelToHz(double mel);
  static MelBank MakeDefault(const FrameSpec& spec);

 private:
  std::vector<double> weights_d_;
};

// 1 + floor((n_samples - win_len) / hop); throws if the input is shorter
// than one window.
int FrameCount(size_t n_samples, const FrameSpec& spec);

struct LogMel {
  int n_mels = 0;
  int n_frames = 0;
  std::vector<double> values;  // values[m * n_frames + t]
};

// Intermediates LogMelBackward needs: one-sided spectra and pre-log mel
// energies, both frame-major.
struct LogMelCache {
  size_t n_samples = 0;
  int n_frames = 0;
  std::vector<std::complex<double>> spectra;  // n_frames x bins
  std::vector<double> mel_pre_log;            // n_frames x n_mels
};

LogMel LogMelForward(const Waveform& w, const FrameSpec& spec,
                     const MelBank& bank, const Fft& fft,
                     LogMelCache* cache = nullptr);

// Gradient of a scalar through LogMelForward: grad_out has the LogMel
// layout; the result has one entry per input sample. Floored mel energies
// propagate zero gradient.
std::vector<double> LogMelBackward(const std::vector<double>& grad_out,
                                   const FrameSpec& spec, const MelBank& bank,
                                   const Fft& fft, const LogMelCache& cache);

}  // namespace codecshield

#endif  // CODECSHIELD_FEATURES_HPP_
