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

#ifndef CODECSHIELD_FINGERPRINT_HPP_
#define CODECSHIELD_FINGERPRINT_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string_view>

#include "codecshield/common.hpp"

namespace codecshield {

// FNV-1a content fingerprints for stage staleness checks. Not a
// cryptographic hash; it only has to notice edited inputs or configs.
class Fnv1a {
 public:
  void Update(const void* data, size_t n) {
    const uint8_t* p = static_cast<const uint8_t*>(data);
    for (size_t i = 0; i < n; ++i) {
      hash_ ^= p[i];
      hash_ *= 0x100000001b3ULL;
    }
  }

  void Update(std::string_view s) { Update(s.data(), s.size()); }

  void UpdateFile(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for hashing: " + path.string());
    char buf[1 << 16];
    while (f) {
      f.read(buf, sizeof(buf));
      Update(buf, static_cast<size_t>(f.gcount()));
    }
  }

  uint64_t value() const { return hash_; }

 private:
  uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace codecshield

#endif  // CODECSHIELD_FINGERPRINT_HPP_
