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

#include "codecshield/tensor_io.hpp"

#include <cstring>
#include <fstream>

#include "codecshield/common.hpp"

namespace codecshield {

namespace {

void PutU32(std::ofstream& f, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  f.write(b, 4);
}

class Reader {
 public:
  Reader(const std::filesystem::path& path) : path_(path), f_(path, std::ios::binary) {
    if (!f_) throw IoError("cannot open for reading: " + path.string());
  }

  void Bytes(void* out, size_t n) {
    f_.read(static_cast<char*>(out), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(f_.gcount()) != n) {
      throw FormatError("truncated container file: " + path_.string());
    }
  }

  uint32_t U32() {
    uint8_t b[4];
    Bytes(b, 4);
    return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
           (static_cast<uint32_t>(b[2]) << 16) |
           (static_cast<uint32_t>(b[3]) << 24);
  }

 private:
  std::filesystem::path path_;
  std::ifstream f_;
};

}  // namespace

void WriteTensorFile(const char magic[4], const std::vector<Tensor>& tensors,
                     const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f.write(magic, 4);
  PutU32(f, kContainerVersion);
  PutU32(f, static_cast<uint32_t>(tensors.size()));
  for (const Tensor& t : tensors) {
    PutU32(f, static_cast<uint32_t>(t.name.size()));
    f.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    PutU32(f, static_cast<uint32_t>(t.dims.size()));
    for (uint32_t d : t.dims) PutU32(f, d);
    // Host floats are IEEE-754 little-endian on all supported targets.
    f.write(reinterpret_cast<const char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(float)));
  }
  if (!f) throw IoError("short write: " + path.string());
}

std::vector<Tensor> ReadTensorFile(const char magic[4],
                                   const std::filesystem::path& path) {
  Reader r(path);
  char got[4];
  r.Bytes(got, 4);
  if (std::memcmp(got, magic, 4) != 0) {
    throw FormatError("bad magic in " + path.string() + ": expected '" +
                      std::string(magic, 4) + "', got '" + std::string(got, 4) +
                      "'");
  }
  uint32_t version = r.U32();
  if (version != kContainerVersion) {
    throw FormatError("unsupported container version " +
                      std::to_string(version) + " in " + path.string());
  }
  uint32_t count = r.U32();
  std::vector<Tensor> tensors;
  tensors.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    Tensor t;
    uint32_t name_len = r.U32();
    if (name_len > 4096) {
      throw FormatError("implausible tensor name length in " + path.string());
    }
    t.name.resize(name_len);
    r.Bytes(t.name.data(), name_len);
    uint32_t rank = r.U32();
    if (rank > 8) throw FormatError("implausible tensor rank in " + path.string());
    t.dims.resize(rank);
    size_t n = 1;
    for (uint32_t d = 0; d < rank; ++d) {
      t.dims[d] = r.U32();
      n *= t.dims[d];
    }
    if (n > (1u << 28)) {
      throw FormatError("implausible tensor size in " + path.string());
    }
    t.data.resize(n);
    r.Bytes(t.data.data(), n * sizeof(float));
    tensors.push_back(std::move(t));
  }
  return tensors;
}

const Tensor& FindTensor(const std::vector<Tensor>& tensors,
                         const std::string& name,
                         const std::vector<uint32_t>& want_dims) {
  for (const Tensor& t : tensors) {
    if (t.name != name) continue;
    if (t.dims.size() != want_dims.size()) {
      throw FormatError("tensor '" + name + "': rank mismatch");
    }
    for (size_t i = 0; i < want_dims.size(); ++i) {
      if (want_dims[i] != 0 && t.dims[i] != want_dims[i]) {
        throw FormatError("tensor '" + name + "': dim " + std::to_string(i) +
                          " is " + std::to_string(t.dims[i]) + ", expected " +
                          std::to_string(want_dims[i]));
      }
    }
    return t;
  }
  throw FormatError("tensor '" + name + "' missing from container");
}

}  // namespace codecshield
