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

#include "codecshield/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "codecshield/fft.hpp"
#include "codecshield/parallel.hpp"
#include "codecshield/rng.hpp"
#include "codecshield/wav.hpp"

namespace codecshield {

namespace {

constexpr double kNoiseDb = -30.0;   // noise level relative to signal RMS
constexpr double kPeak = 0.9;        // normalization target
constexpr double kMaxHarmonicHz = 7600.0;

// Lorentzian resonance gains, one peak per formant, plus a floor so
// inter-formant harmonics are not silent.
double FormantGain(const SpeakerProfile& p, double freq_hz) {
  static constexpr double kPeakWeight[3] = {1.0, 0.63, 0.40};
  double g = 0.08;
  for (int j = 0; j < 3; ++j) {
    double d = freq_hz - p.formant_hz[j];
    double b = p.formant_bw_hz[j];
    g += kPeakWeight[j] * b * b / (d * d + b * b);
  }
  return g;
}

}  // namespace

SpeakerProfile SynthSpeaker(uint64_t seed) {
  Rng rng(seed);
  SpeakerProfile p;
  p.seed = seed;
  char id[32];
  std::snprintf(id, sizeof(id), "spk%016llx",
                static_cast<unsigned long long>(seed));
  p.speaker_id = id;

  // Ranges are deliberately narrow: speakers must be close enough that the
  // classifier has to learn fine spectral detail (a trivially separable
  // corpus leaves the embedding map flat), yet far enough apart for a
  // single-digit EER. Tight pitch ranges also keep the frame manifold
  // small enough for the codec codebooks to cover it.
  p.f0_base_hz = std::exp(rng.Uniform(std::log(150.0), std::log(230.0)));
  p.formant_hz[0] = rng.Uniform(430.0, 700.0);
  p.formant_hz[1] = rng.Uniform(std::max(p.formant_hz[0] + 320.0, 1050.0), 1900.0);
  p.formant_hz[2] = rng.Uniform(std::max(p.formant_hz[1] + 420.0, 2250.0), 3050.0);
  p.formant_bw_hz[0] = rng.Uniform(70.0, 110.0);
  p.formant_bw_hz[1] = rng.Uniform(90.0, 150.0);
  p.formant_bw_hz[2] = rng.Uniform(120.0, 210.0);
  p.harmonic_tilt_db_oct = rng.Uniform(-11.0, -7.0);
  p.vibrato_rate_hz = rng.Uniform(4.5, 6.5);
  p.vibrato_depth_cents = rng.Uniform(6.0, 14.0);
  return p;
}

Waveform SynthUtterance(const SpeakerProfile& profile, uint64_t utt_seed,
                        double duration_s) {
  if (duration_s < 0.5 || duration_s > 4.0) {
    throw InputError("utterance duration out of [0.5, 4.0] s: " +
                     std::to_string(duration_s));
  }
  Rng rng(DeriveSeed(profile.seed, "utterance", utt_seed));
  const size_t n = static_cast<size_t>(std::lround(duration_s * kSampleRate));

  // Slow random pitch contour: three low-frequency cosines, in cents.
  struct Drift {
    double amp_cents, freq_hz, phase;
  };
  std::array<Drift, 3> drift;
  double total_excursion_cents = profile.vibrato_depth_cents;
  for (auto& d : drift) {
    d.amp_cents = rng.Uniform(3.0, 10.0);
    d.freq_hz = rng.Uniform(0.2, 0.7);
    d.phase = rng.Uniform(0.0, 2.0 * M_PI);
    total_excursion_cents += d.amp_cents;
  }
  const double vib_phase = rng.Uniform(0.0, 2.0 * M_PI);

  // Harmonics stay below kMaxHarmonicHz at the highest pitch excursion.
  const double max_f0 =
      profile.f0_base_hz * std::exp2(total_excursion_cents / 1200.0);
  int n_harm = static_cast<int>(kMaxHarmonicHz / max_f0);
  if (n_harm < 1) n_harm = 1;
  if (n_harm > 96) n_harm = 96;

  std::vector<double> amp(n_harm), phase(n_harm);
  for (int h = 0; h < n_harm; ++h) {
    double f = (h + 1) * profile.f0_base_hz;
    double tilt =
        std::pow(10.0, profile.harmonic_tilt_db_oct * std::log2(h + 1.0) / 20.0);
    amp[h] = tilt * FormantGain(profile, f);
    phase[h] = rng.Uniform(0.0, 2.0 * M_PI);
  }

  Waveform w;
  w.samples.resize(n);
  const double dt = 1.0 / kSampleRate;
  for (size_t i = 0; i < n; ++i) {
    double t = i * dt;
    double cents = profile.vibrato_depth_cents *
                   std::sin(2.0 * M_PI * profile.vibrato_rate_hz * t + vib_phase);
    for (const auto& d : drift) {
      cents += d.amp_cents * std::cos(2.0 * M_PI * d.freq_hz * t + d.phase);
    }
    double f0 = profile.f0_base_hz * std::exp2(cents / 1200.0);
    double dphi = 2.0 * M_PI * f0 * dt;
    double acc = 0.0;
    for (int h = 0; h < n_harm; ++h) {
      phase[h] += (h + 1) * dphi;
      acc += amp[h] * std::sin(phase[h]);
    }
    w.samples[i] = acc;
  }

  double rms = std::sqrt(
      std::max(1e-30, std::inner_product(w.samples.begin(), w.samples.end(),
                                         w.samples.begin(), 0.0) /
                          static_cast<double>(n)));

  // Aspiration-like noise: white noise shaped by the same formant and tilt
  // envelope as the harmonics, 30 dB below the signal RMS. Shaping keeps
  // the noise on the spectral manifold the rest of the corpus occupies.
  size_t nfft = 1;
  while (nfft < n) nfft <<= 1;
  std::vector<std::complex<double>> noise(nfft);
  for (size_t i = 0; i < nfft; ++i) noise[i] = {rng.Normal(), 0.0};
  Fft fft(nfft);
  fft.Forward(noise.data());
  const double bin_hz = static_cast<double>(kSampleRate) / nfft;
  for (size_t k = 0; k <= nfft / 2; ++k) {
    double f = std::max(k * bin_hz, profile.f0_base_hz);
    double tilt = std::pow(
        10.0, profile.harmonic_tilt_db_oct * std::log2(f / profile.f0_base_hz) / 20.0);
    double env = tilt * FormantGain(profile, f);
    noise[k] *= env;
    if (k > 0 && k < nfft / 2) noise[nfft - k] = std::conj(noise[k]);
  }
  fft.InverseUnnormalized(noise.data());
  double noise_ss = 0.0;
  for (size_t i = 0; i < n; ++i) noise_ss += noise[i].real() * noise[i].real();
  double noise_rms = std::sqrt(std::max(noise_ss / n, 1e-30));
  double noise_gain = rms * std::pow(10.0, kNoiseDb / 20.0) / noise_rms;
  for (size_t i = 0; i < n; ++i) w.samples[i] += noise_gain * noise[i].real();

  double peak = 0.0;
  for (double s : w.samples) peak = std::max(peak, std::fabs(s));
  double gain = kPeak / std::max(peak, 1e-30);
  for (double& s : w.samples) s *= gain;
  return w;
}

std::string UtteranceRelPath(int spk, int utt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "corpus/spk%03d_utt%02d.wav", spk, utt);
  return buf;
}

TrialList GenCorpus(int n_speakers, int utts_per_speaker, double duration_s,
                    uint64_t seed, const std::filesystem::path& out_dir,
                    int jobs) {
  if (n_speakers < 2) throw InputError("need at least 2 speakers");
  if (utts_per_speaker < 2) throw InputError("need at least 2 utterances per speaker");

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "corpus", ec);
  if (ec) throw IoError("cannot create " + (out_dir / "corpus").string() + ": " + ec.message());

  std::vector<SpeakerProfile> profiles(n_speakers);
  for (int s = 0; s < n_speakers; ++s) {
    profiles[s] = SynthSpeaker(DeriveSeed(seed, "speaker", s));
  }

  const size_t total = static_cast<size_t>(n_speakers) * utts_per_speaker;
  ParallelFor(total, jobs, [&](size_t idx) {
    int s = static_cast<int>(idx) / utts_per_speaker;
    int u = static_cast<int>(idx) % utts_per_speaker;
    Waveform w = SynthUtterance(profiles[s], DeriveSeed(seed, "utt", s, u),
                                duration_s);
    WriteWav(w, out_dir / UtteranceRelPath(s, u));
  });

  // Every utterance is the test of one target and one non-target trial.
  // Target enrollments rotate within the speaker; non-target enrollments
  // rotate across the other speakers, at the same utterance index.
  TrialList list;
  list.trials.reserve(2 * total);
  for (int s = 0; s < n_speakers; ++s) {
    for (int u = 0; u < utts_per_speaker; ++u) {
      Trial target;
      target.enroll_path = UtteranceRelPath(s, (u + 1) % utts_per_speaker);
      target.test_path = UtteranceRelPath(s, u);
      target.is_target = true;
      list.trials.push_back(target);

      int other = (s + 1 + (u % (n_speakers - 1))) % n_speakers;
      Trial nontarget;
      nontarget.enroll_path = UtteranceRelPath(other, u);
      nontarget.test_path = UtteranceRelPath(s, u);
      nontarget.is_target = false;
      list.trials.push_back(nontarget);
    }
  }
  WriteTrialList(list, out_dir / "trials.txt");
  return list;
}

}  // namespace codecshield
