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

#include <fstream>
#include <map>
#include <set>

#include "codecshield/synth.hpp"
#include "codecshield/wav.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace codecshield;

namespace {

std::string FileBytes(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f);
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("speaker profiles are deterministic and in range") {
  SpeakerProfile a = SynthSpeaker(7);
  SpeakerProfile b = SynthSpeaker(7);
  CHECK(a.f0_base_hz == b.f0_base_hz);
  CHECK(a.formant_hz == b.formant_hz);
  CHECK(a.harmonic_tilt_db_oct == b.harmonic_tilt_db_oct);

  SpeakerProfile c = SynthSpeaker(1);
  SpeakerProfile d = SynthSpeaker(2);
  CHECK((c.f0_base_hz != d.f0_base_hz || c.formant_hz != d.formant_hz));

  for (uint64_t seed = 0; seed < 50; ++seed) {
    SpeakerProfile p = SynthSpeaker(seed);
    CHECK(p.f0_base_hz >= 80.0);
    CHECK(p.f0_base_hz <= 300.0);
    CHECK(p.formant_hz[0] < p.formant_hz[1]);
    CHECK(p.formant_hz[1] < p.formant_hz[2]);
    CHECK(p.formant_hz[2] < 7600.0);
  }
}

TEST_CASE("utterances are deterministic, sized and normalized") {
  SpeakerProfile p = SynthSpeaker(21);
  Waveform a = SynthUtterance(p, 3, 1.0);
  Waveform b = SynthUtterance(p, 3, 1.0);
  CHECK(a.samples == b.samples);
  CHECK(a.samples.size() == 16000);

  Waveform c = SynthUtterance(p, 4, 1.0);
  CHECK(a.samples != c.samples);

  double peak = 0.0;
  for (double s : a.samples) peak = std::max(peak, std::fabs(s));
  CHECK(peak == doctest::Approx(0.9).epsilon(1e-9));

  CHECK_THROWS_AS(SynthUtterance(p, 0, 0.4), InputError);
  CHECK_THROWS_AS(SynthUtterance(p, 0, 4.5), InputError);
}

TEST_CASE("corpus generation: counts, balance, pairing, determinism") {
  testutil::TempDir dir_a("corpus_a");
  testutil::TempDir dir_b("corpus_b");
  TrialList ta = GenCorpus(4, 3, 0.6, 99, dir_a.path(), 2);
  TrialList tb = GenCorpus(4, 3, 0.6, 99, dir_b.path(), 1);

  // 4 x 3 wavs on disk.
  size_t wavs = 0;
  for (const auto& e :
       std::filesystem::directory_iterator(dir_a.path() / "corpus")) {
    if (e.path().extension() == ".wav") ++wavs;
  }
  CHECK(wavs == 12);

  size_t targets = 0, nontargets = 0;
  std::map<std::string, int> target_tests, nontarget_tests;
  for (const Trial& t : ta.trials) {
    CHECK(t.enroll_path != t.test_path);
    if (t.is_target) {
      ++targets;
      target_tests[t.test_path]++;
    } else {
      ++nontargets;
      nontarget_tests[t.test_path]++;
    }
  }
  CHECK(targets == nontargets);
  CHECK(targets == 12);
  for (const auto& [path, count] : target_tests) CHECK(count == 1);
  for (const auto& [path, count] : nontarget_tests) CHECK(count == 1);
  CHECK(target_tests.size() == 12);

  // Same seed, different directory: identical bytes everywhere.
  CHECK(FileBytes(dir_a.path() / "trials.txt") ==
        FileBytes(dir_b.path() / "trials.txt"));
  CHECK(FileBytes(dir_a.path() / "corpus/spk000_utt00.wav") ==
        FileBytes(dir_b.path() / "corpus/spk000_utt00.wav"));
  CHECK(FileBytes(dir_a.path() / "corpus/spk003_utt02.wav") ==
        FileBytes(dir_b.path() / "corpus/spk003_utt02.wav"));

  // Round trip of the trial file.
  TrialList reread = ReadTrialList(dir_a.path() / "trials.txt");
  REQUIRE(reread.trials.size() == ta.trials.size());
  for (size_t i = 0; i < reread.trials.size(); ++i) {
    CHECK(reread.trials[i].enroll_path == ta.trials[i].enroll_path);
    CHECK(reread.trials[i].test_path == ta.trials[i].test_path);
    CHECK(reread.trials[i].is_target == ta.trials[i].is_target);
  }

  CHECK(tb.trials.size() == ta.trials.size());
  CHECK_THROWS_AS(GenCorpus(1, 3, 0.6, 1, dir_a.path(), 1), InputError);
  CHECK_THROWS_AS(GenCorpus(4, 1, 0.6, 1, dir_a.path(), 1), InputError);
}

TEST_CASE("corpus audio is clean 16-bit pcm at 16 kHz") {
  const auto& corpus = testutil::GetSharedCorpus();
  Waveform w = ReadWav(corpus.dir.path() / "corpus/spk000_utt00.wav");
  CHECK(w.sample_rate == 16000);
  CHECK(w.samples.size() == 32000);
  for (double s : w.samples) {
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }
}
