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

#include "codecshield/features.hpp"

#include <algorithm>
#include <cmath>

#include "codecshield/kernels.hpp"

namespace codecshield {

void FrameSpec::Finalize() {
  window_d_.assign(window.begin(), window.end());
}

FrameSpec FrameSpec::MakeDefault() {
  FrameSpec spec;
  spec.window.resize(spec.win_len);
  for (int n = 0; n < spec.win_len; ++n) {
    double w = 0.54 - 0.46 * std::cos(2.0 * M_PI * n / (spec.win_len - 1));
    spec.window[n] = static_cast<float>(w);
  }
  spec.Finalize();
  return spec;
}

double MelBank::HzToMel(double hz) {
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double MelBank::MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

void MelBank::Finalize() {
  weights_d_.assign(weights.begin(), weights.end());
}

MelBank MelBank::MakeDefault(const FrameSpec& spec) {
  MelBank bank;
  const int bins = spec.bins();
  bank.weights.assign(static_cast<size_t>(bank.n_mels) * bins, 0.0f);

  const double mel_lo = HzToMel(bank.fmin_hz);
  const double mel_hi = HzToMel(bank.fmax_hz);
  std::vector<double> points(bank.n_mels + 2);
  for (int i = 0; i < bank.n_mels + 2; ++i) {
    points[i] = mel_lo + (mel_hi - mel_lo) * i / (bank.n_mels + 1);
  }

  const double hz_per_bin = static_cast<double>(kSampleRate) / spec.nfft;
  for (int m = 0; m < bank.n_mels; ++m) {
    const double left = points[m], center = points[m + 1], right = points[m + 2];
    bool any = false;
    for (int k = 0; k < bins; ++k) {
      double mel = HzToMel(k * hz_per_bin);
      double w = 0.0;
      if (mel > left && mel < right) {
        w = (mel <= center) ? (mel - left) / (center - left)
                            : (right - mel) / (right - center);
      }
      if (w > 0.0) {
        bank.weights[static_cast<size_t>(m) * bins + k] = static_cast<float>(w);
        any = true;
      }
    }
    if (!any) {
      throw InputError("mel filter " + std::to_string(m) +
                       " covers no FFT bin; check nfft/fmin/fmax");
    }
  }
  bank.Finalize();
  return bank;
}

int FrameCount(size_t n_samples, const FrameSpec& spec) {
  if (n_samples < static_cast<size_t>(spec.win_len)) {
    throw InputError("input too short: " + std::to_string(n_samples) +
                     " samples < window of " + std::to_string(spec.win_len));
  }
  return 1 + static_cast<int>((n_samples - spec.win_len) / spec.hop);
}

LogMel LogMelForward(const Waveform& w, const FrameSpec& spec,
                     const MelBank& bank, const Fft& fft, LogMelCache* cache) {
  const int n_frames = FrameCount(w.samples.size(), spec);
  const int bins = spec.bins();
  const int n_mels = bank.n_mels;
  const auto& window = spec.window_d();
  const auto& weights = bank.weights_d();

  LogMel out;
  out.n_mels = n_mels;
  out.n_frames = n_frames;
  out.values.resize(static_cast<size_t>(n_mels) * n_frames);

  if (cache) {
    cache->n_samples = w.samples.size();
    cache->n_frames = n_frames;
    cache->spectra.resize(static_cast<size_t>(n_frames) * bins);
    cache->mel_pre_log.resize(static_cast<size_t>(n_frames) * n_mels);
  }

  std::vector<std::complex<double>> buf(spec.nfft);
  std::vector<double> power(bins);
  for (int t = 0; t < n_frames; ++t) {
    const double* x = w.samples.data() + static_cast<size_t>(t) * spec.hop;
    for (int n = 0; n < spec.win_len; ++n) buf[n] = window[n] * x[n];
    for (int n = spec.win_len; n < spec.nfft; ++n) buf[n] = 0.0;
    fft.Forward(buf.data());

    for (int k = 0; k < bins; ++k) {
      power[k] = buf[k].real() * buf[k].real() + buf[k].imag() * buf[k].imag();
    }
    if (cache) {
      std::copy(buf.begin(), buf.begin() + bins,
                cache->spectra.begin() + static_cast<size_t>(t) * bins);
    }
    for (int m = 0; m < n_mels; ++m) {
      double mel = kernels::Dot(weights.data() + static_cast<size_t>(m) * bins,
                                power.data(), bins);
      if (cache) cache->mel_pre_log[static_cast<size_t>(t) * n_mels + m] = mel;
      out.values[static_cast<size_t>(m) * n_frames + t] =
          std::log(std::max(mel, kLogMelFloor));
    }
  }
  return out;
}

std::vector<double> LogMelBackward(const std::vector<double>& grad_out,
                                   const FrameSpec& spec, const MelBank& bank,
                                   const Fft& fft, const LogMelCache& cache) {
  const int n_frames = cache.n_frames;
  const int bins = spec.bins();
  const int n_mels = bank.n_mels;
  if (grad_out.size() != static_cast<size_t>(n_mels) * n_frames) {
    throw InputError("grad_out shape does not match the forward cache");
  }
  const auto& window = spec.window_d();
  const auto& weights = bank.weights_d();

  std::vector<double> grad(cache.n_samples, 0.0);
  std::vector<double> g_power(bins);
  std::vector<std::complex<double>> buf(spec.nfft);

  for (int t = 0; t < n_frames; ++t) {
    // log and mel stages.
    std::fill(g_power.begin(), g_power.end(), 0.0);
    const double* pre = cache.mel_pre_log.data() + static_cast<size_t>(t) * n_mels;
    for (int m = 0; m < n_mels; ++m) {
      double mel = pre[m];
      if (mel <= kLogMelFloor) continue;  // floored: zero gradient
      double gm = grad_out[static_cast<size_t>(m) * n_frames + t] / mel;
      if (gm == 0.0) continue;
      kernels::Axpy(gm, weights.data() + static_cast<size_t>(m) * bins,
                    g_power.data(), bins);
    }

    // Power-spectrum stage: d|X_k|^2 pulled back through the DFT. The
    // Hermitian spectrum g_k * X_k (doubled at DC and Nyquist) inverted
    // without normalization gives the gradient on the windowed frame.
    const std::complex<double>* X =
        cache.spectra.data() + static_cast<size_t>(t) * bins;
    buf[0] = 2.0 * g_power[0] * X[0];
    buf[bins - 1] = 2.0 * g_power[bins - 1] * X[bins - 1];
    for (int k = 1; k < bins - 1; ++k) {
      buf[k] = g_power[k] * X[k];
      buf[spec.nfft - k] = std::conj(buf[k]);
    }
    fft.InverseUnnormalized(buf.data());

    // Window stage, accumulated across overlapping frames.
    double* g = grad.data() + static_cast<size_t>(t) * spec.hop;
    for (int n = 0; n < spec.win_len; ++n) {
      g[n] += window[n] * buf[n].real();
    }
  }
  return grad;
}

}  // namespace codecshield
