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

#ifndef CODECSHIELD_WAV_HPP_
#define CODECSHIELD_WAV_HPP_

#include <cstdint>
#include <filesystem>

#include "codecshield/common.hpp"

namespace codecshield {

// 16-bit little-endian PCM, mono, 16 kHz. Write quantizes with
// QuantizeSample; read maps integer k to k / 32768, so write(read(file))
// reproduces the file byte for byte.

int16_t QuantizeSample(double s);

void WriteWav(const Waveform& w, const std::filesystem::path& path);
Waveform ReadWav(const std::filesystem::path& path);

}  // namespace codecshield

#endif  // CODECSHIELD_WAV_HPP_
