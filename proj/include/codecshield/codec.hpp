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

#ifndef CODECSHIELD_CODEC_HPP_
#define CODECSHIELD_CODEC_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "codecshield/common.hpp"

namespace codecshield {

// Resynthesis defenses. Every codec preserves length and keeps samples in
// [-1, 1]; what survives the encode/decode round trip is codec-specific.
class Codec {
 public:
  virtual ~Codec() = default;
  virtual std::string name() const = 0;
  virtual Waveform Resynth(const Waveform& w) const = 0;
};

class IdentityCodec final : public Codec {
 public:
  std::string name() const override { return "identity"; }
  Waveform Resynth(const Waveform& w) const override { return w; }
};

// mu-law companding (mu = 255) quantized to 6 bits and expanded.
class BitcrushCodec final : public Codec {
 public:
  std::string name() const override { return "bitcrush"; }
  Waveform Resynth(const Waveform& w) const override;
};

// Per-frame code: 6-bit gain level plus four 8-bit residual-stage indices.
struct CodeSequence {
  uint32_t n_frames = 0;
  uint32_t original_length = 0;
  std::vector<uint8_t> gain_idx;   // n_frames
  std::vector<uint8_t> stage_idx;  // n_frames * kStages, frame-major

  // u32 frame count, u32 original length, then per frame one gain byte
  // and four stage bytes.
  std::vector<uint8_t> Serialize() const;
  static CodeSequence Deserialize(const std::vector<uint8_t>& bytes);

  // 6 gain bits + 4 x 8 index bits per frame (the payload information
  // content; the byte serialization above is the padded transport form).
  uint64_t NominalBits() const { return static_cast<uint64_t>(n_frames) * 38; }
};

// Residual vector quantizer over windowed DCT frames. Analysis splits each
// frame into a log-RMS gain (64-level uniform grid learned from data) and a
// unit-norm shape quantized by four successive codebooks of 256 centroids
// (entry 0 of every codebook is the zero vector, so residual energy never
// increases with stage). Windows are square-root Hann at 50% overlap, which
// reconstructs interior samples exactly before quantization.
class RvqCodec final : public Codec {
 public:
  static constexpr int kFrameLen = 320;
  static constexpr int kHop = 160;
  static constexpr int kStages = 4;
  static constexpr int kCodebookSize = 256;
  static constexpr int kGainLevels = 64;

  struct FrameCodes {
    uint8_t gain_idx = 0;
    std::array<uint8_t, kStages> stage_idx{};
  };

  // Fits gain grid and codebooks on every WAV under corpus_dir (k-means
  // with zero-reserved codebooks; deterministic in seed). Needs at least
  // 10000 analysis frames.
  static RvqCodec Train(const std::filesystem::path& corpus_dir, uint64_t seed);

  static RvqCodec Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path) const;

  std::string name() const override { return "rvq"; }
  Waveform Resynth(const Waveform& w) const override;

  CodeSequence Encode(const Waveform& w) const;
  Waveform Decode(const CodeSequence& codes) const;

  // Quantizes one DCT-domain frame; exposed so the nearest-neighbour and
  // exact-match semantics are testable without audio plumbing.
  FrameCodes QuantizeTransformed(const std::vector<double>& coeffs) const;

  uint64_t trained_on_fingerprint() const { return trained_on_; }
  const std::vector<double>& gain_levels() const { return gain_levels_d_; }
  // Centroid `j` of stage `s`, as a pointer to kFrameLen doubles.
  const double* centroid(int stage, int j) const {
    return codebooks_d_.data() +
           (static_cast<size_t>(stage) * kCodebookSize + j) * kFrameLen;
  }
  const std::vector<double>& window_d() const { return window_d_; }

  // Orthonormal DCT-II pair used by the analysis/synthesis transforms.
  void DctForward(const double* frame, double* coeffs) const;
  void DctInverse(const double* coeffs, double* frame) const;

 private:
  RvqCodec();
  void FinalizeTables();

  // float32 masters (the serialized truth) with double compute mirrors.
  std::vector<float> window_;       // kFrameLen
  std::vector<float> gain_levels_;  // kGainLevels, ascending log-RMS
  std::vector<float> codebooks_;    // kStages x kCodebookSize x kFrameLen
  uint64_t trained_on_ = 0;

  std::vector<double> window_d_, gain_levels_d_, codebooks_d_;
  std::vector<double> dct_;  // kFrameLen x kFrameLen, row-major
};

// The codec sweep used by the pipeline; throws on unknown names.
std::unique_ptr<Codec> MakeBaselineCodec(const std::string& name);

}  // namespace codecshield

#endif  // CODECSHIELD_CODEC_HPP_
