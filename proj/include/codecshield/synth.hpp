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

#ifndef CODECSHIELD_SYNTH_HPP_
#define CODECSHIELD_SYNTH_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "codecshield/common.hpp"
#include "codecshield/trials.hpp"

namespace codecshield {

// A synthetic speaker: a harmonic voice source with fixed formant
// resonances, spectral tilt and vibrato. Deterministic in `seed`.
struct SpeakerProfile {
  std::string speaker_id;
  double f0_base_hz = 0.0;                 // 80..300
  std::array<double, 3> formant_hz{};      // strictly increasing, < 7600
  std::array<double, 3> formant_bw_hz{};
  double harmonic_tilt_db_oct = 0.0;       // spectral slope, negative
  double vibrato_rate_hz = 0.0;
  double vibrato_depth_cents = 0.0;
  uint64_t seed = 0;
};

SpeakerProfile SynthSpeaker(uint64_t seed);

// Harmonic source with a per-utterance pitch contour, shaped by the
// speaker's formants and tilt, plus noise 30 dB below signal RMS;
// peak-normalized to 0.9. duration_s must be in [0.5, 4.0].
Waveform SynthUtterance(const SpeakerProfile& profile, uint64_t utt_seed,
                        double duration_s);

// Relative WAV path of utterance `utt` of speaker `spk` under the corpus dir.
std::string UtteranceRelPath(int spk, int utt);

// Writes n_speakers x utts_per_speaker WAVs into out_dir and returns a
// balanced trial list: every utterance is the test of exactly one target
// and one non-target trial. Paths in the list are relative to out_dir's
// parent (i.e. prefixed with out_dir's filename component).
TrialList GenCorpus(int n_speakers, int utts_per_speaker, double duration_s,
                    uint64_t seed, const std::filesystem::path& out_dir,
                    int jobs = 1);

}  // namespace codecshield

#endif  // CODECSHIELD_SYNTH_HPP_
