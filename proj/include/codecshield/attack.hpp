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

#ifndef CODECSHIELD_ATTACK_HPP_
#define CODECSHIELD_ATTACK_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "codecshield/common.hpp"
#include "codecshield/model.hpp"
#include "codecshield/trials.hpp"

namespace codecshield {

// Basic Iterative Method against the cosine score. Budgets are in 16-bit
// LSB units (1 LSB = 1/32768 in the float amplitude domain); each of the
// ceil(epsilon/alpha) iterations moves every sample by alpha in the
// direction that raises (non-target) or lowers (target) the score, then
// projects back onto the epsilon-ball around the original input
// intersected with [-1, 1].
struct AttackConfig {
  int epsilon_lsb = 10;
  int alpha_lsb = 1;
  int polarity_i = 0;  // 0: non-target trial (ascend), 1: target (descend)

  int Iterations() const {
    return epsilon_lsb == 0 ? 0 : (epsilon_lsb + alpha_lsb - 1) / alpha_lsb;
  }
  double EpsilonFloat() const { return epsilon_lsb / 32768.0; }
  double AlphaFloat() const { return alpha_lsb / 32768.0; }
};

// Returns the adversarial waveform; on_iter (when set) observes each
// completed iteration index. Pure in all of its inputs.
Waveform Bim(const EmbeddingModel& model, const Embedding& enroll,
             const Waveform& x0, const AttackConfig& cfg,
             const std::function<void(int)>& on_iter = {});

struct AttackManifestRow {
  int trial_idx = 0;
  bool is_target = false;
  std::string orig_path;
  std::string adv_path;
  double score_before = 0.0;
  double score_after = 0.0;  // scored on the quantized, delivered audio
  int epsilon_lsb = 0;
};

// Attacks every trial's test utterance (polarity from the trial label),
// writes quantized adversarial WAVs under out_dir and returns manifest
// rows in trial order. Paths in rows are relative to work_dir.
std::vector<AttackManifestRow> AttackTrialSet(
    const EmbeddingModel& model, const TrialList& trials, int epsilon_lsb,
    int alpha_lsb, const std::filesystem::path& work_dir,
    const std::filesystem::path& out_dir, int jobs);

void WriteAttackManifest(const std::vector<AttackManifestRow>& rows,
                         const std::filesystem::path& path);
std::vector<AttackManifestRow> ReadAttackManifest(
    const std::filesystem::path& path);

}  // namespace codecshield

#endif  // CODECSHIELD_ATTACK_HPP_
