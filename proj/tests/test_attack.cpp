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

#include "codecshield/attack.hpp"
#include "codecshield/wav.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace codecshield;

namespace {

const EmbeddingModel& AttackModel() {
  static EmbeddingModel m = EmbeddingModel::RandomInit(8, 4321);
  return m;
}

}  // namespace

TEST_CASE("iteration count is ceil(epsilon / alpha)") {
  auto iters = [](int eps, int alpha) {
    AttackConfig cfg;
    cfg.epsilon_lsb = eps;
    cfg.alpha_lsb = alpha;
    return cfg.Iterations();
  };
  CHECK(iters(0, 1) == 0);
  CHECK(iters(1, 1) == 1);
  CHECK(iters(10, 1) == 10);
  CHECK(iters(5, 2) == 3);
  CHECK(iters(10, 3) == 4);
  CHECK(iters(2, 5) == 1);
}

TEST_CASE("zero budget returns the input unchanged") {
  const EmbeddingModel& m = AttackModel();
  Waveform x0 = testutil::TestWave(71, 0.3);
  Embedding enroll = m.Embed(testutil::TestWave(72, 0.3));
  AttackConfig cfg;
  cfg.epsilon_lsb = 0;
  Waveform adv = Bim(m, enroll, x0, cfg);
  CHECK(adv.samples == x0.samples);
}

TEST_CASE("bim honors the iteration count and the L-infinity ball") {
  const EmbeddingModel& m = AttackModel();
  Waveform x0 = testutil::TestWave(73, 0.3);
  Embedding enroll = m.Embed(testutil::TestWave(74, 0.3));

  AttackConfig cfg;
  cfg.epsilon_lsb = 10;
  cfg.alpha_lsb = 1;
  cfg.polarity_i = 0;
  int iterations_seen = 0;
  Waveform adv = Bim(m, enroll, x0, cfg,
                     [&](int) { ++iterations_seen; });
  CHECK(iterations_seen == 10);

  double max_delta = 0.0;
  for (size_t i = 0; i < x0.samples.size(); ++i) {
    max_delta = std::max(max_delta, std::fabs(adv.samples[i] - x0.samples[i]));
    CHECK(adv.samples[i] >= -1.0);
    CHECK(adv.samples[i] <= 1.0);
  }
  CHECK(max_delta <= 10.0 / 32768.0 + 1e-12);

  // Pure function of its inputs.
  Waveform again = Bim(m, enroll, x0, cfg);
  CHECK(again.samples == adv.samples);
}

TEST_CASE("polarity selects ascent or descent") {
  const EmbeddingModel& m = AttackModel();
  Waveform x0 = testutil::TestWave(75, 0.4);
  Embedding enroll = m.Embed(testutil::TestWave(76, 0.4));
  double before = m.Score(enroll, x0);

  AttackConfig up;
  up.epsilon_lsb = 20;
  up.polarity_i = 0;
  CHECK(m.Score(enroll, Bim(m, enroll, x0, up)) > before);

  AttackConfig down;
  down.epsilon_lsb = 20;
  down.polarity_i = 1;
  CHECK(m.Score(enroll, Bim(m, enroll, x0, down)) < before);
}

TEST_CASE("quantized adversarial audio stays within the integer budget") {
  testutil::TempDir tmp("bim_quant");
  const EmbeddingModel& m = AttackModel();

  // Start from an on-grid waveform, as the trial attack does.
  auto orig_path = tmp.path() / "orig.wav";
  WriteWav(testutil::TestWave(77, 0.3), orig_path);
  Waveform x0 = ReadWav(orig_path);
  Embedding enroll = m.Embed(testutil::TestWave(78, 0.3));

  AttackConfig cfg;
  cfg.epsilon_lsb = 10;
  Waveform adv = Bim(m, enroll, x0, cfg);
  auto adv_path = tmp.path() / "adv.wav";
  WriteWav(adv, adv_path);
  Waveform delivered = ReadWav(adv_path);

  for (size_t i = 0; i < x0.samples.size(); ++i) {
    int q_orig = static_cast<int>(std::lround(x0.samples[i] * 32768.0));
    int q_adv = static_cast<int>(std::lround(delivered.samples[i] * 32768.0));
    CHECK(std::abs(q_adv - q_orig) <= cfg.epsilon_lsb + 1);
  }
}

TEST_CASE("attack_trial_set writes one manifest row per trial") {
  testutil::TempDir tmp("attack_set");
  const auto& corpus = testutil::GetSharedCorpus();
  const EmbeddingModel& m = AttackModel();

  // A small slice of the shared trials keeps this quick.
  TrialList subset;
  subset.trials.assign(corpus.trials.trials.begin(),
                       corpus.trials.trials.begin() + 6);

  auto rows = AttackTrialSet(m, subset, 2, 1, corpus.dir.path(),
                             tmp.path() / "eps2", 2);
  REQUIRE(rows.size() == subset.trials.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].trial_idx == static_cast<int>(i));
    CHECK(rows[i].is_target == subset.trials[i].is_target);
    CHECK(rows[i].epsilon_lsb == 2);
    CHECK(std::filesystem::exists(tmp.path() / "eps2" /
                                  std::filesystem::path(rows[i].adv_path)
                                      .filename()));

    Waveform orig = ReadWav(corpus.dir.path() / rows[i].orig_path);
    Waveform adv = ReadWav(tmp.path() / "eps2" /
                           std::filesystem::path(rows[i].adv_path).filename());
    REQUIRE(adv.samples.size() == orig.samples.size());
    for (size_t k = 0; k < orig.samples.size(); ++k) {
      int dq = static_cast<int>(std::lround(adv.samples[k] * 32768.0)) -
               static_cast<int>(std::lround(orig.samples[k] * 32768.0));
      CHECK(std::abs(dq) <= 3);
    }
  }

  // Manifest round trip.
  auto manifest = tmp.path() / "manifest.csv";
  WriteAttackManifest(rows, manifest);
  auto back = ReadAttackManifest(manifest);
  REQUIRE(back.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].trial_idx == rows[i].trial_idx);
    CHECK(back[i].is_target == rows[i].is_target);
    CHECK(back[i].orig_path == rows[i].orig_path);
    CHECK(back[i].score_before == doctest::Approx(rows[i].score_before));
    CHECK(back[i].score_after == doctest::Approx(rows[i].score_after));
  }
}

TEST_CASE("bim validates its configuration") {
  const EmbeddingModel& m = AttackModel();
  Waveform x0 = testutil::TestWave(79, 0.3);
  Embedding enroll = m.Embed(x0);
  AttackConfig bad;
  bad.alpha_lsb = 0;
  CHECK_THROWS_AS(Bim(m, enroll, x0, bad), InputError);
  bad = AttackConfig{};
  bad.epsilon_lsb = -1;
  CHECK_THROWS_AS(Bim(m, enroll, x0, bad), InputError);
  bad = AttackConfig{};
  bad.polarity_i = 2;
  CHECK_THROWS_AS(Bim(m, enroll, x0, bad), InputError);
}
