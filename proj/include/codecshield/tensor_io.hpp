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

#ifndef CODECSHIELD_TENSOR_IO_HPP_
#define CODECSHIELD_TENSOR_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace codecshield {

// Binary tensor container shared by the model (`ASVM`) and codec (`RVQC`)
// files: 4-byte magic, u32 format version, u32 tensor count, then per
// tensor a length-prefixed name, u32 rank, u32 dims and a row-major
// little-endian float32 payload.

struct Tensor {
  std::string name;
  std::vector<uint32_t> dims;
  std::vector<float> data;

  size_t NumElements() const {
    size_t n = 1;
    for (uint32_t d : dims) n *= d;
    return n;
  }
};

constexpr uint32_t kContainerVersion = 1;

void WriteTensorFile(const char magic[4], const std::vector<Tensor>& tensors,
                     const std::filesystem::path& path);

std::vector<Tensor> ReadTensorFile(const char magic[4],
                                   const std::filesystem::path& path);

// Lookup with shape validation; dims entries of 0 match any size.
const Tensor& FindTensor(const std::vector<Tensor>& tensors,
                         const std::string& name,
                         const std::vector<uint32_t>& want_dims);

}  // namespace codecshield

#endif  // CODECSHIELD_TENSOR_IO_HPP_
