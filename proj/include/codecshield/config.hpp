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

#ifndef CODECSHIELD_CONFIG_HPP_
#define CODECSHIELD_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "codecshield/model.hpp"

namespace codecshield {

// Flat INI-style experiment config ('#' comments, [section] headers,
// key = value lines). Unknown sections or keys are errors so a typo in a
// sweep definition cannot pass silently.
//
//   seed = 42
//   [corpus]    n_speakers, utts_per_speaker, duration_s
//   [asv]       epochs, batch, lr, momentum, crop_s
//   [codec]     codecs = identity,bitcrush,rvq
//   [attack]    epsilon_lsb = 2,5,10   alpha_lsb = 1
//   [detector]  fpr_given = 0.05,0.01,0.001   hist_bins, hist_lo, hist_hi
//   [paths]     work_dir
struct ExperimentConfig {
  uint64_t seed = 0;

  int n_speakers = 20;
  int utts_per_speaker = 10;
  double duration_s = 2.0;

  Hyperparams asv;

  std::vector<std::string> codecs{"identity", "bitcrush", "rvq"};

  std::vector<int> epsilon_lsb{2, 5, 10};
  int alpha_lsb = 1;

  std::vector<double> fpr_given{0.05, 0.01, 0.001};
  int hist_bins = 40;
  double hist_lo = 0.0;
  double hist_hi = 1.0;

  std::filesystem::path work_dir;

  // The parsed text of each section, used for stage fingerprints.
  std::string SectionFingerprintText(const std::string& section) const;

  static ExperimentConfig Parse(const std::filesystem::path& path);
  static ExperimentConfig ParseString(const std::string& text);

  void Validate() const;
};

}  // namespace codecshield

#endif  // CODECSHIELD_CONFIG_HPP_
