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

#ifndef CODECSHIELD_COMMON_HPP_
#define CODECSHIELD_COMMON_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace codecshield {

// Malformed or unexpected file contents (WAV headers, model containers,
// trial lists, configs).
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller violated a precondition (out-of-range argument, too-short input).
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Filesystem-level failure (unreadable/unwritable path).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

constexpr int kSampleRate = 16000;

// Mono audio, amplitudes in [-1, 1]. The currency between all modules.
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kSampleRate;

  size_t size() const { return samples.size(); }
};

}  // namespace codecshield

#endif  // CODECSHIELD_COMMON_HPP_
