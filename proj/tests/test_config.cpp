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

#include <string>

#include "codecshield/config.hpp"
#include "doctest.h"

using namespace codecshield;

namespace {

const char* kValid = R"(# reference-style config
seed = 42

[corpus]
n_speakers = 4
utts_per_speaker = 3
duration_s = 1.0

[asv]
epochs = 2
batch = 4
lr = 0.001
momentum = 0.9
crop_s = 0.8

[codec]
codecs = identity, bitcrush, rvq

[attack]
epsilon_lsb = 2, 5, 10
alpha_lsb = 1

[detector]
fpr_given = 0.05, 0.01
hist_bins = 20
hist_lo = 0.0
hist_hi = 1.0

[paths]
work_dir = /tmp/somewhere
)";

}  // namespace

TEST_CASE("a full config parses into the expected fields") {
  ExperimentConfig cfg = ExperimentConfig::ParseString(kValid);
  CHECK(cfg.seed == 42);
  CHECK(cfg.n_speakers == 4);
  CHECK(cfg.utts_per_speaker == 3);
  CHECK(cfg.duration_s == doctest::Approx(1.0));
  CHECK(cfg.asv.epochs == 2);
  CHECK(cfg.asv.batch == 4);
  CHECK(cfg.codecs == std::vector<std::string>{"identity", "bitcrush", "rvq"});
  CHECK(cfg.epsilon_lsb == std::vector<int>{2, 5, 10});
  CHECK(cfg.alpha_lsb == 1);
  CHECK(cfg.fpr_given == std::vector<double>{0.05, 0.01});
  CHECK(cfg.hist_bins == 20);
  CHECK(cfg.work_dir == std::filesystem::path("/tmp/somewhere"));
}

TEST_CASE("typos and omissions are hard errors") {
  CHECK_THROWS_AS(ExperimentConfig::ParseString("seed = 1\n[paths]\nwork_dir = x\n[corpus]\nn_speakerz = 3\n"),
                  FormatError);
  CHECK_THROWS_AS(ExperimentConfig::ParseString("seed = 1\n[paths]\nwork_dir = x\n[corpsu]\n"),
                  FormatError);
  CHECK_THROWS_AS(ExperimentConfig::ParseString("[paths]\nwork_dir = x\n"),
                  FormatError);  // no seed
  CHECK_THROWS_AS(ExperimentConfig::ParseString("seed = 1\n"), FormatError);  // no work_dir
  CHECK_THROWS_AS(ExperimentConfig::ParseString("seed = abc\n[paths]\nwork_dir = x\n"),
                  FormatError);
  CHECK_THROWS_AS(ExperimentConfig::ParseString("seed = 1\nnot a kv line\n"),
                  FormatError);
}

TEST_CASE("semantic validation catches bad sweeps") {
  auto with = [](const std::string& extra) {
    return "seed = 1\n[paths]\nwork_dir = x\n" + extra;
  };
  CHECK_THROWS_AS(ExperimentConfig::ParseString(with("[corpus]\nn_speakers = 1\n")),
                  FormatError);
  CHECK_THROWS_AS(ExperimentConfig::ParseString(with("[codec]\ncodecs = mp3\n")),
                  FormatError);
  CHECK_THROWS_AS(ExperimentConfig::ParseString(with("[attack]\nalpha_lsb = 0\n")),
                  FormatError);
  CHECK_THROWS_AS(ExperimentConfig::ParseString(with("[detector]\nfpr_given = 1.5\n")),
                  FormatError);
  CHECK_THROWS_AS(ExperimentConfig::ParseString(with("[corpus]\nduration_s = 9\n")),
                  FormatError);
}

TEST_CASE("section fingerprints react to their own settings only") {
  ExperimentConfig a = ExperimentConfig::ParseString(kValid);
  ExperimentConfig b = a;
  b.hist_bins = 21;
  CHECK(a.SectionFingerprintText("detector") != b.SectionFingerprintText("detector"));
  CHECK(a.SectionFingerprintText("corpus") == b.SectionFingerprintText("corpus"));
  CHECK(a.SectionFingerprintText("attack") == b.SectionFingerprintText("attack"));

  ExperimentConfig c = a;
  c.seed = 43;
  CHECK(a.SectionFingerprintText("corpus") != c.SectionFingerprintText("corpus"));
}
