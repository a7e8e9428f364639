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

#ifndef CODECSHIELD_TESTS_FIXTURES_HPP_
#define CODECSHIELD_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "codecshield/codec.hpp"
#include "codecshield/rng.hpp"
#include "codecshield/synth.hpp"
#include "codecshield/trials.hpp"

namespace testutil {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("codecshield_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

struct SharedCorpus {
  TempDir dir{"shared_corpus"};
  codecshield::TrialList trials;
};

// One small corpus per test process, big enough to train the RVQ codec
// (needs >= 10000 analysis frames).
inline const SharedCorpus& GetSharedCorpus() {
  static SharedCorpus corpus = [] {
    SharedCorpus c;
    c.trials = codecshield::GenCorpus(8, 7, 2.0, 777, c.dir.path(), 2);
    return c;
  }();
  return corpus;
}

inline const codecshield::RvqCodec& GetSharedRvq() {
  static codecshield::RvqCodec codec = codecshield::RvqCodec::Train(
      GetSharedCorpus().dir.path() / "corpus", 778);
  return codec;
}

// A short deterministic voiced waveform with a trace of noise, handy for
// gradient checks (no exactly-zero mel energies). Durations below the
// synthesizer's 0.5 s floor are cut from a longer render.
inline codecshield::Waveform TestWave(uint64_t seed, double duration_s) {
  codecshield::SpeakerProfile p = codecshield::SynthSpeaker(seed);
  codecshield::Waveform w = codecshield::SynthUtterance(
      p, seed ^ 0x5eedULL, std::max(duration_s, 0.5));
  w.samples.resize(static_cast<size_t>(duration_s * codecshield::kSampleRate));
  return w;
}

}  // namespace testutil

#endif  // CODECSHIELD_TESTS_FIXTURES_HPP_
