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

#ifndef CODECSHIELD_PIPELINE_HPP_
#define CODECSHIELD_PIPELINE_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "codecshield/config.hpp"

namespace codecshield {

// The end-to-end experiment, stage by stage:
//
//   gen-data     corpus/*.wav, trials.txt
//   train-asv    asv.model, logs/train_asv.log
//   train-codec  rvq.codec
//   attack       adv/eps<k>/*.wav + manifest.csv per budget
//   calibrate    reports/calibration.csv + genuine variations (genuine
//                inputs only; the stage manifest proves it)
//   evaluate     detection/EER/histogram/trade-off CSVs
//
// Each stage writes <stage>.done carrying a fingerprint of its config
// slice and the content hashes of its inputs; a stage whose fingerprint
// and outputs are intact is skipped. Downstream stages refuse to run on
// stale upstream artifacts unless forced.

struct PipelineOptions {
  bool force = false;
  int jobs = 0;  // 0: hardware concurrency
  std::ostream* progress = nullptr;
};

struct StageResult {
  std::string name;
  bool skipped = false;
  double seconds = 0.0;
};

class Pipeline {
 public:
  static const std::vector<std::string>& StageNames();

  Pipeline(ExperimentConfig cfg, PipelineOptions opt);

  StageResult RunStage(const std::string& name);
  std::vector<StageResult> RunAll();

  const ExperimentConfig& config() const { return cfg_; }

 private:
  struct StageIo {
    std::string config_text;
    std::vector<std::filesystem::path> inputs;   // relative to work_dir
    std::vector<std::filesystem::path> outputs;  // relative to work_dir
  };

  StageIo DescribeStage(const std::string& name) const;
  uint64_t StageFingerprint(const std::string& name, const StageIo& io) const;
  void WriteDoneFile(const std::string& name, const StageIo& io,
                     uint64_t fingerprint) const;
  bool DoneMatches(const std::string& name, uint64_t fingerprint) const;
  bool OutputsExist(const StageIo& io) const;
  void CheckUpstream(const std::string& name) const;

  void RunGenData();
  void RunTrainAsv();
  void RunTrainCodec();
  void RunAttack();
  void RunCalibrate();
  void RunEvaluate();

  ExperimentConfig cfg_;
  PipelineOptions opt_;
};

}  // namespace codecshield

#endif  // CODECSHIELD_PIPELINE_HPP_
