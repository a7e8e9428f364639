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

#ifndef CODECSHIELD_MODEL_HPP_
#define CODECSHIELD_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "codecshield/common.hpp"
#include "codecshield/features.hpp"
#include "codecshield/fft.hpp"

namespace codecshield {

// Speaker embedding network in the x-vector mold, sized for CPU training:
//
//   log-mel (64) -> conv1d 64->48 k5 same, ReLU
//                -> conv1d 48->48 k3 same, ReLU
//                -> statistics pooling (mean || std, eps 1e-5)  [96]
//                -> affine 96->32 -> L2 normalize               [32]
//
// A classifier head (affine 32 -> n_train_speakers) exists for training
// only. Scoring is the cosine between unit embeddings, i.e. a dot product.
// The whole map from raw samples to score is differentiated in closed form
// (ScoreGrad), front-end included, which is what the sample-domain attack
// consumes.
//
// Parameters are canonically float32 (the on-disk payload type); all
// arithmetic runs on double mirrors, so save/load round-trips bit-exactly.

struct Embedding {
  std::vector<double> v;  // unit L2 norm
};

struct Hyperparams {
  int epochs = 30;
  int batch = 16;
  double lr = 1e-3;  // cosine-decayed per epoch
  double momentum = 0.9;
  double crop_s = 0.8;
};

class EmbeddingModel {
 public:
  static constexpr int kMels = 64;
  static constexpr int kConv1Out = 48;
  static constexpr int kConv1Kernel = 5;
  static constexpr int kConv2Out = 48;
  static constexpr int kConv2Kernel = 3;
  static constexpr int kPooledDim = 2 * kConv2Out;
  static constexpr int kEmbedDim = 32;
  static constexpr double kStdEps = 1e-5;
  // Softmax temperature on the unit-embedding classifier; without it the
  // cross-entropy saturates long before the speakers separate.
  static constexpr double kClsScale = 16.0;

  // Randomly initialized (He-uniform weights, zero biases).
  static EmbeddingModel RandomInit(int n_train_speakers, uint64_t seed);

  EmbeddingModel();

  int n_train_speakers() const { return n_train_speakers_; }
  const FrameSpec& frame_spec() const { return frame_spec_; }
  const MelBank& mel_bank() const { return mel_bank_; }
  const Fft& fft() const { return fft_; }

  Embedding Embed(const Waveform& w) const;
  double Score(const Embedding& enroll, const Waveform& test) const;

  // Score plus its gradient with respect to every input sample, by exact
  // reverse-mode differentiation through the full stack.
  std::pair<double, std::vector<double>> ScoreGrad(const Embedding& enroll,
                                                   const Waveform& test) const;

  void Save(const std::filesystem::path& path) const;
  static EmbeddingModel Load(const std::filesystem::path& path);

  // --- training-facing surface (used by train.cpp and tests) ---

  struct Params {
    std::vector<double> conv1_w;  // [48][64][5]
    std::vector<double> conv1_b;  // [48]
    std::vector<double> conv2_w;  // [48][48][3]
    std::vector<double> conv2_b;  // [48]
    std::vector<double> proj_w;   // [32][96]
    std::vector<double> proj_b;   // [32]
    std::vector<double> cls_w;    // [n_spk][32]
    std::vector<double> cls_b;    // [n_spk]

    void Resize(int n_speakers);
    void Zero();
    void Accumulate(const Params& other, double scale);
  };

  struct Activations {
    LogMelCache logmel_cache;
    LogMel feat;                       // 64 x T
    int n_frames = 0;
    std::vector<double> conv1_pre, conv1_post;  // 48 x T
    std::vector<double> conv2_pre, conv2_post;  // 48 x T
    std::vector<double> mean_vec, std_vec;      // 48 each
    std::vector<double> pooled;                 // 96
    std::vector<double> proj_out;               // 32, pre-normalization
    double norm = 0.0;
    std::vector<double> embedding;              // 32, unit
  };

  // Forward pass from precomputed features (frame-major 64 x T block).
  void ForwardFromFeatures(const double* feat, int n_frames,
                           Activations* acts) const;
  // Forward pass from audio; fills feature and logmel cache too.
  void ForwardFromWave(const Waveform& w, Activations* acts) const;

  // Propagates d(scalar)/d(embedding) back through the network. Writes
  // parameter gradients into `param_grads` when non-null (accumulating),
  // and returns the gradient on the input samples when `want_sample_grad`
  // (requires acts from ForwardFromWave).
  std::vector<double> BackwardFromEmbeddingGrad(const Activations& acts,
                                                const std::vector<double>& g_embed,
                                                Params* param_grads,
                                                bool want_sample_grad) const;

  // Gradient of d(scalar)/d(feature block); same contract as above but
  // stops at features. Training passes want_feature_grad = false since
  // features do not depend on parameters.
  std::vector<double> BackwardToFeatures(const Activations& acts,
                                         const std::vector<double>& g_embed,
                                         Params* param_grads,
                                         bool want_feature_grad = true) const;

  // Classifier forward + softmax cross-entropy on a unit embedding.
  // Returns the loss; optionally fills d(loss)/d(embedding) and
  // accumulates classifier parameter gradients.
  double ClassifyLoss(const std::vector<double>& embedding, int label,
                      std::vector<double>* g_embed,
                      Params* param_grads = nullptr) const;

  // Double working parameters; call CommitParams() after mutating so the
  // float32 masters and mirrors agree again.
  Params* MutableParams() { return &params_d_; }
  const Params& params() const { return params_d_; }
  void CommitParams();

 private:
  void SyncMirrorsFromMasters();

  FrameSpec frame_spec_;
  MelBank mel_bank_;
  Fft fft_;
  int n_train_speakers_ = 0;

  // float32 masters, the serialized truth.
  std::vector<float> conv1_w_, conv1_b_, conv2_w_, conv2_b_;
  std::vector<float> proj_w_, proj_b_, cls_w_, cls_b_;

  Params params_d_;  // double mirrors used by all arithmetic
};

}  // namespace codecshield

#endif  // CODECSHIELD_MODEL_HPP_
