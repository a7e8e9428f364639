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

#include "codecshield/trials.hpp"

#include <fstream>
#include <sstream>

#include "codecshield/common.hpp"

namespace codecshield {

void WriteTrialList(const TrialList& list, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  for (const Trial& t : list.trials) {
    f << (t.is_target ? 1 : 0) << ' ' << t.enroll_path << ' ' << t.test_path
      << '\n';
  }
  if (!f) throw IoError("short write: " + path.string());
}

TrialList ReadTrialList(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path.string());
  TrialList list;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    int label = -1;
    Trial t;
    if (!(ss >> label >> t.enroll_path >> t.test_path) ||
        (label != 0 && label != 1)) {
      throw FormatError("bad trial line " + std::to_string(lineno) + " in " +
                        path.string() + ": " + line);
    }
    t.is_target = (label == 1);
    if (t.enroll_path == t.test_path) {
      throw FormatError("enroll and test coincide on line " +
                        std::to_string(lineno) + " in " + path.string());
    }
    list.trials.push_back(std::move(t));
  }
  return list;
}

}  // namespace codecshield
