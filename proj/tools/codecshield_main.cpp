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

#include <iostream>

#include "CLI11.hpp"
#include "codecshield/kernels.hpp"
#include "codecshield/pipeline.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string work_dir_override;
  bool force = false;
  int jobs = 0;
};

void AddCommon(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path, "experiment config file")
      ->required();
  cmd->add_option("--work-dir", args->work_dir_override,
                  "override paths.work_dir from the config");
  cmd->add_flag("--force", args->force, "recompute even if artifacts are fresh");
  cmd->add_option("--jobs", args->jobs, "worker threads (default: all cores)");
}

int RunStages(const CommonArgs& args, const std::vector<std::string>& stages) {
  codecshield::ExperimentConfig cfg =
      codecshield::ExperimentConfig::Parse(args.config_path);
  if (!args.work_dir_override.empty()) cfg.work_dir = args.work_dir_override;

  codecshield::PipelineOptions opt;
  opt.force = args.force;
  opt.jobs = args.jobs;
  opt.progress = &std::cout;
  codecshield::Pipeline pipeline(std::move(cfg), opt);

  double total = 0.0;
  for (const auto& stage : stages) {
    codecshield::StageResult r = pipeline.RunStage(stage);
    total += r.seconds;
  }
  if (stages.size() > 1) {
    std::cout << "pipeline finished in " << total << " s (simd "
              << codecshield::kernels::IsaName(codecshield::kernels::ActiveIsa())
              << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "codecshield: codec-resynthesis detection of adversarial audio "
      "against a speaker-verification model"};
  app.require_subcommand(1);

  std::map<std::string, CommonArgs> args;
  std::vector<std::pair<std::string, std::string>> commands = {
      {"gen-data", "synthesize the speaker corpus and trial list"},
      {"train-asv", "train the speaker embedding model"},
      {"train-codec", "fit the RVQ codec on the corpus"},
      {"attack", "generate BIM adversarial audio for every trial"},
      {"calibrate", "calibrate detection thresholds on genuine data only"},
      {"evaluate", "emit detection, EER, histogram and trade-off reports"},
      {"run-all", "run every stage in order, skipping fresh artifacts"},
  };
  for (const auto& [name, help] : commands) {
    AddCommon(app.add_subcommand(name, help), &args[name]);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (const auto& [name, help] : commands) {
      (void)help;
      if (app.got_subcommand(name)) {
        if (name == "run-all") {
          return RunStages(args[name], codecshield::Pipeline::StageNames());
        }
        return RunStages(args[name], {name});
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
