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

#ifndef CODECSHIELD_TRIALS_HPP_
#define CODECSHIELD_TRIALS_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace codecshield {

// One verification trial: does test_path come from the speaker enrolled
// via enroll_path? Paths are relative to the experiment work dir.
struct Trial {
  std::string enroll_path;
  std::string test_path;
  bool is_target = false;
};

struct TrialList {
  std::vector<Trial> trials;
};

// Plain-text trial file, one per line: "<label> <enroll> <test>" with
// label 1 = target, 0 = non-target.
void WriteTrialList(const TrialList& list, const std::filesystem::path& path);
TrialList ReadTrialList(const std::filesystem::path& path);

}  // namespace codecshield

#endif  // CODECSHIELD_TRIALS_HPP_
