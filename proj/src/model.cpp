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

#include "codecshield/model.hpp"

#include <algorithm>
#include <cmath>

#include "codecshield/kernels.hpp"
#include "codecshield/rng.hpp"
#include "codecshield/tensor_io.hpp"

namespace codecshield {

namespace {

// Time-axis "same" convolution expressed as shifted axpy/dot slices.
// Weight layout: w[co][ci][k], activations are row-major [channel][time].
struct ConvShape {
  int in_ch, out_ch, kernel, pad;
};

void ConvForward(const ConvShape& c, const double* w, const double* b,
                 const double* x, double* y, int T) {
  for (int co = 0; co < c.out_ch; ++co) {
    std::fill(y + static_cast<size_t>(co) * T, y + static_cast<size_t>(co + 1) * T,
              b[co]);
  }
  for (int co = 0; co < c.out_ch; ++co) {
    double* yrow = y + static_cast<size_t>(co) * T;
    for (int ci = 0; ci < c.in_ch; ++ci) {
      const double* xrow = x + static_cast<size_t>(ci) * T;
      const double* wk = w + (static_cast<size_t>(co) * c.in_ch + ci) * c.kernel;
      for (int k = 0; k < c.kernel; ++k) {
        int s = k - c.pad;
        int t0 = std::max(0, -s);
        int t1 = T - 1 - std::max(0, s);
        if (t1 < t0) continue;
        kernels::Axpy(wk[k], xrow + t0 + s, yrow + t0, static_cast<size_t>(t1 - t0 + 1));
      }
    }
  }
}

// dL/dx given dL/dy; same slice geometry with source and destination swapped.
void ConvBackwardInput(const ConvShape& c, const double* w, const double* gy,
                       double* gx, int T) {
  for (int co = 0; co < c.out_ch; ++co) {
    const double* gyrow = gy + static_cast<size_t>(co) * T;
    for (int ci = 0; ci < c.in_ch; ++ci) {
      double* gxrow = gx + static_cast<size_t>(ci) * T;
      const double* wk = w + (static_cast<size_t>(co) * c.in_ch + ci) * c.kernel;
      for (int k = 0; k < c.kernel; ++k) {
        int s = k - c.pad;
        int t0 = std::max(0, -s);
        int t1 = T - 1 - std::max(0, s);
        if (t1 < t0) continue;
        kernels::Axpy(wk[k], gyrow + t0, gxrow + t0 + s,
                      static_cast<size_t>(t1 - t0 + 1));
      }
    }
  }
}

void ConvBackwardParams(const ConvShape& c, const double* x, const double* gy,
                        double* gw, double* gb, int T) {
  for (int co = 0; co < c.out_ch; ++co) {
    const double* gyrow = gy + static_cast<size_t>(co) * T;
    double acc = 0.0;
    for (int t = 0; t < T; ++t) acc += gyrow[t];
    gb[co] += acc;
    for (int ci = 0; ci < c.in_ch; ++ci) {
      const double* xrow = x + static_cast<size_t>(ci) * T;
      double* gwk = gw + (static_cast<size_t>(co) * c.in_ch + ci) * c.kernel;
      for (int k = 0; k < c.kernel; ++k) {
        int s = k - c.pad;
        int t0 = std::max(0, -s);
        int t1 = T - 1 - std::max(0, s);
        if (t1 < t0) continue;
        gwk[k] += kernels::Dot(gyrow + t0, xrow + t0 + s,
                               static_cast<size_t>(t1 - t0 + 1));
      }
    }
  }
}

void ReluInPlace(double* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] = x[i] > 0.0 ? x[i] : 0.0;
}

}  // namespace

void EmbeddingModel::Params::Resize(int n_speakers) {
  conv1_w.assign(static_cast<size_t>(kConv1Out) * kMels * kConv1Kernel, 0.0);
  conv1_b.assign(kConv1Out, 0.0);
  conv2_w.assign(static_cast<size_t>(kConv2Out) * kConv1Out * kConv2Kernel, 0.0);
  conv2_b.assign(kConv2Out, 0.0);
  proj_w.assign(static_cast<size_t>(kEmbedDim) * kPooledDim, 0.0);
  proj_b.assign(kEmbedDim, 0.0);
  cls_w.assign(static_cast<size_t>(n_speakers) * kEmbedDim, 0.0);
  cls_b.assign(n_speakers, 0.0);
}

void EmbeddingModel::Params::Zero() {
  auto zero = [](std::vector<double>& v) { std::fill(v.begin(), v.end(), 0.0); };
  zero(conv1_w); zero(conv1_b); zero(conv2_w); zero(conv2_b);
  zero(proj_w); zero(proj_b); zero(cls_w); zero(cls_b);
}

void EmbeddingModel::Params::Accumulate(const Params& other, double scale) {
  auto acc = [scale](std::vector<double>& dst, const std::vector<double>& src) {
    kernels::Axpy(scale, src.data(), dst.data(), dst.size());
  };
  acc(conv1_w, other.conv1_w); acc(conv1_b, other.conv1_b);
  acc(conv2_w, other.conv2_w); acc(conv2_b, other.conv2_b);
  acc(proj_w, other.proj_w); acc(proj_b, other.proj_b);
  acc(cls_w, other.cls_w); acc(cls_b, other.cls_b);
}

EmbeddingModel::EmbeddingModel()
    : frame_spec_(FrameSpec::MakeDefault()),
      mel_bank_(MelBank::MakeDefault(frame_spec_)),
      fft_(static_cast<size_t>(frame_spec_.nfft)) {}

EmbeddingModel EmbeddingModel::RandomInit(int n_train_speakers, uint64_t seed) {
  if (n_train_speakers < 2) throw InputError("need at least 2 training speakers");
  EmbeddingModel m;
  m.n_train_speakers_ = n_train_speakers;

  Rng rng(DeriveSeed(seed, "model-init"));
  auto he_uniform = [&rng](std::vector<float>* w, size_t n, int fan_in) {
    double bound = std::sqrt(6.0 / fan_in);
    w->resize(n);
    for (size_t i = 0; i < n; ++i) {
      (*w)[i] = static_cast<float>(rng.Uniform(-bound, bound));
    }
  };
  he_uniform(&m.conv1_w_, static_cast<size_t>(kConv1Out) * kMels * kConv1Kernel,
             kMels * kConv1Kernel);
  m.conv1_b_.assign(kConv1Out, 0.0f);
  he_uniform(&m.conv2_w_, static_cast<size_t>(kConv2Out) * kConv1Out * kConv2Kernel,
             kConv1Out * kConv2Kernel);
  m.conv2_b_.assign(kConv2Out, 0.0f);
  he_uniform(&m.proj_w_, static_cast<size_t>(kEmbedDim) * kPooledDim, kPooledDim);
  m.proj_b_.assign(kEmbedDim, 0.0f);
  he_uniform(&m.cls_w_, static_cast<size_t>(n_train_speakers) * kEmbedDim,
             kEmbedDim);
  m.cls_b_.assign(n_train_speakers, 0.0f);
  m.SyncMirrorsFromMasters();
  return m;
}

void EmbeddingModel::SyncMirrorsFromMasters() {
  auto copy = [](std::vector<double>& d, const std::vector<float>& f) {
    d.assign(f.begin(), f.end());
  };
  copy(params_d_.conv1_w, conv1_w_); copy(params_d_.conv1_b, conv1_b_);
  copy(params_d_.conv2_w, conv2_w_); copy(params_d_.conv2_b, conv2_b_);
  copy(params_d_.proj_w, proj_w_); copy(params_d_.proj_b, proj_b_);
  copy(params_d_.cls_w, cls_w_); copy(params_d_.cls_b, cls_b_);
}

void EmbeddingModel::CommitParams() {
  auto round = [](std::vector<float>& f, const std::vector<double>& d) {
    f.assign(d.begin(), d.end());
  };
  round(conv1_w_, params_d_.conv1_w); round(conv1_b_, params_d_.conv1_b);
  round(conv2_w_, params_d_.conv2_w); round(conv2_b_, params_d_.conv2_b);
  round(proj_w_, params_d_.proj_w); round(proj_b_, params_d_.proj_b);
  round(cls_w_, params_d_.cls_w); round(cls_b_, params_d_.cls_b);
  SyncMirrorsFromMasters();
}

void EmbeddingModel::ForwardFromFeatures(const double* feat, int n_frames,
                                         Activations* acts) const {
  const int T = n_frames;
  acts->n_frames = T;
  if (acts->feat.values.data() != feat) {
    acts->feat.n_mels = kMels;
    acts->feat.n_frames = T;
    acts->feat.values.assign(feat, feat + static_cast<size_t>(kMels) * T);
    feat = acts->feat.values.data();
  }
  const Params& p = params_d_;

  const ConvShape c1{kMels, kConv1Out, kConv1Kernel, kConv1Kernel / 2};
  const ConvShape c2{kConv1Out, kConv2Out, kConv2Kernel, kConv2Kernel / 2};

  acts->conv1_pre.resize(static_cast<size_t>(kConv1Out) * T);
  ConvForward(c1, p.conv1_w.data(), p.conv1_b.data(), feat,
              acts->conv1_pre.data(), T);
  acts->conv1_post = acts->conv1_pre;
  ReluInPlace(acts->conv1_post.data(), acts->conv1_post.size());

  acts->conv2_pre.resize(static_cast<size_t>(kConv2Out) * T);
  ConvForward(c2, p.conv2_w.data(), p.conv2_b.data(), acts->conv1_post.data(),
              acts->conv2_pre.data(), T);
  acts->conv2_post = acts->conv2_pre;
  ReluInPlace(acts->conv2_post.data(), acts->conv2_post.size());

  // Statistics pooling: temporal mean and std per channel.
  acts->mean_vec.resize(kConv2Out);
  acts->std_vec.resize(kConv2Out);
  acts->pooled.resize(kPooledDim);
  const double invT = 1.0 / T;
  for (int c = 0; c < kConv2Out; ++c) {
    const double* row = acts->conv2_post.data() + static_cast<size_t>(c) * T;
    double mean = 0.0;
    for (int t = 0; t < T; ++t) mean += row[t];
    mean *= invT;
    double var = 0.0;
    for (int t = 0; t < T; ++t) {
      double d = row[t] - mean;
      var += d * d;
    }
    var *= invT;
    acts->mean_vec[c] = mean;
    acts->std_vec[c] = std::sqrt(var + kStdEps);
    acts->pooled[c] = mean;
    acts->pooled[kConv2Out + c] = acts->std_vec[c];
  }

  acts->proj_out.resize(kEmbedDim);
  for (int i = 0; i < kEmbedDim; ++i) {
    acts->proj_out[i] =
        p.proj_b[i] + kernels::Dot(p.proj_w.data() + static_cast<size_t>(i) * kPooledDim,
                                   acts->pooled.data(), kPooledDim);
  }

  double norm = std::sqrt(kernels::SumSq(acts->proj_out.data(), kEmbedDim));
  acts->norm = std::max(norm, 1e-12);
  acts->embedding.resize(kEmbedDim);
  for (int i = 0; i < kEmbedDim; ++i) {
    acts->embedding[i] = acts->proj_out[i] / acts->norm;
  }
}

void EmbeddingModel::ForwardFromWave(const Waveform& w, Activations* acts) const {
  acts->feat = LogMelForward(w, frame_spec_, mel_bank_, fft_, &acts->logmel_cache);
  ForwardFromFeatures(acts->feat.values.data(), acts->feat.n_frames, acts);
}

std::vector<double> EmbeddingModel::BackwardToFeatures(
    const Activations& acts, const std::vector<double>& g_embed,
    Params* param_grads, bool want_feature_grad) const {
  const int T = acts.n_frames;
  const Params& p = params_d_;

  // Normalization: g_raw = (g - e (g.e)) / norm.
  std::vector<double> g_raw(kEmbedDim);
  double ge = kernels::Dot(g_embed.data(), acts.embedding.data(), kEmbedDim);
  for (int i = 0; i < kEmbedDim; ++i) {
    g_raw[i] = (g_embed[i] - acts.embedding[i] * ge) / acts.norm;
  }

  // Projection.
  std::vector<double> g_pooled(kPooledDim, 0.0);
  for (int i = 0; i < kEmbedDim; ++i) {
    kernels::Axpy(g_raw[i], p.proj_w.data() + static_cast<size_t>(i) * kPooledDim,
                  g_pooled.data(), kPooledDim);
    if (param_grads) {
      kernels::Axpy(g_raw[i], acts.pooled.data(),
                    param_grads->proj_w.data() + static_cast<size_t>(i) * kPooledDim,
                    kPooledDim);
      param_grads->proj_b[i] += g_raw[i];
    }
  }

  // Statistics pooling.
  std::vector<double> g_h2(static_cast<size_t>(kConv2Out) * T);
  const double invT = 1.0 / T;
  for (int c = 0; c < kConv2Out; ++c) {
    const double* row = acts.conv2_post.data() + static_cast<size_t>(c) * T;
    double* grow = g_h2.data() + static_cast<size_t>(c) * T;
    const double g_mean = g_pooled[c];
    const double g_std = g_pooled[kConv2Out + c];
    const double mean = acts.mean_vec[c];
    const double k = g_std * invT / acts.std_vec[c];
    for (int t = 0; t < T; ++t) {
      grow[t] = g_mean * invT + k * (row[t] - mean);
    }
  }

  // ReLU after conv2.
  for (size_t i = 0; i < g_h2.size(); ++i) {
    if (acts.conv2_pre[i] <= 0.0) g_h2[i] = 0.0;
  }

  const ConvShape c1{kMels, kConv1Out, kConv1Kernel, kConv1Kernel / 2};
  const ConvShape c2{kConv1Out, kConv2Out, kConv2Kernel, kConv2Kernel / 2};

  std::vector<double> g_h1(static_cast<size_t>(kConv1Out) * T, 0.0);
  ConvBackwardInput(c2, p.conv2_w.data(), g_h2.data(), g_h1.data(), T);
  if (param_grads) {
    ConvBackwardParams(c2, acts.conv1_post.data(), g_h2.data(),
                       param_grads->conv2_w.data(), param_grads->conv2_b.data(), T);
  }

  // ReLU after conv1.
  for (size_t i = 0; i < g_h1.size(); ++i) {
    if (acts.conv1_pre[i] <= 0.0) g_h1[i] = 0.0;
  }

  if (param_grads) {
    ConvBackwardParams(c1, acts.feat.values.data(), g_h1.data(),
                       param_grads->conv1_w.data(), param_grads->conv1_b.data(), T);
  }
  if (!want_feature_grad) return {};
  std::vector<double> g_feat(static_cast<size_t>(kMels) * T, 0.0);
  ConvBackwardInput(c1, p.conv1_w.data(), g_h1.data(), g_feat.data(), T);
  return g_feat;
}

std::vector<double> EmbeddingModel::BackwardFromEmbeddingGrad(
    const Activations& acts, const std::vector<double>& g_embed,
    Params* param_grads, bool want_sample_grad) const {
  std::vector<double> g_feat = BackwardToFeatures(acts, g_embed, param_grads);
  if (!want_sample_grad) return {};
  return LogMelBackward(g_feat, frame_spec_, mel_bank_, fft_, acts.logmel_cache);
}

Embedding EmbeddingModel::Embed(const Waveform& w) const {
  Activations acts;
  acts.feat = LogMelForward(w, frame_spec_, mel_bank_, fft_, nullptr);
  ForwardFromFeatures(acts.feat.values.data(), acts.feat.n_frames, &acts);
  Embedding e;
  e.v = std::move(acts.embedding);
  return e;
}

double EmbeddingModel::Score(const Embedding& enroll, const Waveform& test) const {
  Embedding e = Embed(test);
  return kernels::Dot(enroll.v.data(), e.v.data(), kEmbedDim);
}

std::pair<double, std::vector<double>> EmbeddingModel::ScoreGrad(
    const Embedding& enroll, const Waveform& test) const {
  Activations acts;
  ForwardFromWave(test, &acts);
  double s = kernels::Dot(enroll.v.data(), acts.embedding.data(), kEmbedDim);
  std::vector<double> grad =
      BackwardFromEmbeddingGrad(acts, enroll.v, nullptr, true);
  return {s, std::move(grad)};
}

double EmbeddingModel::ClassifyLoss(const std::vector<double>& embedding,
                                    int label, std::vector<double>* g_embed,
                                    Params* param_grads) const {
  const Params& p = params_d_;
  const int n = n_train_speakers_;
  std::vector<double> logits(n);
  for (int i = 0; i < n; ++i) {
    logits[i] =
        kClsScale *
        (p.cls_b[i] +
         kernels::Dot(p.cls_w.data() + static_cast<size_t>(i) * kEmbedDim,
                      embedding.data(), kEmbedDim));
  }
  double max_logit = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += std::exp(logits[i] - max_logit);
  double log_z = max_logit + std::log(sum);
  double loss = log_z - logits[label];

  if (g_embed) g_embed->assign(kEmbedDim, 0.0);
  if (g_embed || param_grads) {
    for (int i = 0; i < n; ++i) {
      double d =
          kClsScale * (std::exp(logits[i] - log_z) - (i == label ? 1.0 : 0.0));
      if (g_embed) {
        kernels::Axpy(d, p.cls_w.data() + static_cast<size_t>(i) * kEmbedDim,
                      g_embed->data(), kEmbedDim);
      }
      if (param_grads) {
        kernels::Axpy(d, embedding.data(),
                      param_grads->cls_w.data() + static_cast<size_t>(i) * kEmbedDim,
                      kEmbedDim);
        param_grads->cls_b[i] += d;
      }
    }
  }
  return loss;
}

void EmbeddingModel::Save(const std::filesystem::path& path) const {
  std::vector<Tensor> tensors;
  auto add = [&tensors](const std::string& name, std::vector<uint32_t> dims,
                        const std::vector<float>& data) {
    tensors.push_back(Tensor{name, std::move(dims), data});
  };
  const uint32_t bins = static_cast<uint32_t>(frame_spec_.bins());
  add("meta",
      {7},
      {static_cast<float>(frame_spec_.win_len), static_cast<float>(frame_spec_.hop),
       static_cast<float>(frame_spec_.nfft), static_cast<float>(kSampleRate),
       static_cast<float>(mel_bank_.n_mels), static_cast<float>(mel_bank_.fmin_hz),
       static_cast<float>(mel_bank_.fmax_hz)});
  add("window", {static_cast<uint32_t>(frame_spec_.win_len)}, frame_spec_.window);
  add("mel_weights", {static_cast<uint32_t>(mel_bank_.n_mels), bins},
      mel_bank_.weights);
  add("conv1.weight", {kConv1Out, kMels, kConv1Kernel}, conv1_w_);
  add("conv1.bias", {kConv1Out}, conv1_b_);
  add("conv2.weight", {kConv2Out, kConv1Out, kConv2Kernel}, conv2_w_);
  add("conv2.bias", {kConv2Out}, conv2_b_);
  add("proj.weight", {kEmbedDim, kPooledDim}, proj_w_);
  add("proj.bias", {kEmbedDim}, proj_b_);
  add("classifier.weight",
      {static_cast<uint32_t>(n_train_speakers_), kEmbedDim}, cls_w_);
  add("classifier.bias", {static_cast<uint32_t>(n_train_speakers_)}, cls_b_);
  WriteTensorFile("ASVM", tensors, path);
}

EmbeddingModel EmbeddingModel::Load(const std::filesystem::path& path) {
  std::vector<Tensor> tensors = ReadTensorFile("ASVM", path);

  const Tensor& meta = FindTensor(tensors, "meta", {7});
  EmbeddingModel m;
  FrameSpec spec;
  spec.win_len = static_cast<int>(meta.data[0]);
  spec.hop = static_cast<int>(meta.data[1]);
  spec.nfft = static_cast<int>(meta.data[2]);
  if (static_cast<int>(meta.data[3]) != kSampleRate) {
    throw FormatError("model sample rate mismatch in " + path.string());
  }
  int n_mels = static_cast<int>(meta.data[4]);
  if (n_mels != kMels) {
    throw FormatError("model has " + std::to_string(n_mels) +
                      " mel filters, architecture expects " +
                      std::to_string(kMels));
  }
  if (spec.win_len <= 0 || spec.hop <= 0 || spec.nfft < spec.win_len) {
    throw FormatError("inconsistent frame spec in " + path.string());
  }

  spec.window = FindTensor(tensors, "window",
                           {static_cast<uint32_t>(spec.win_len)}).data;
  spec.Finalize();
  m.frame_spec_ = spec;
  m.fft_ = Fft(static_cast<size_t>(spec.nfft));

  MelBank bank;
  bank.n_mels = n_mels;
  bank.fmin_hz = meta.data[5];
  bank.fmax_hz = meta.data[6];
  bank.weights = FindTensor(tensors, "mel_weights",
                            {static_cast<uint32_t>(n_mels),
                             static_cast<uint32_t>(spec.bins())}).data;
  bank.Finalize();
  m.mel_bank_ = bank;

  m.conv1_w_ = FindTensor(tensors, "conv1.weight",
                          {kConv1Out, kMels, kConv1Kernel}).data;
  m.conv1_b_ = FindTensor(tensors, "conv1.bias", {kConv1Out}).data;
  m.conv2_w_ = FindTensor(tensors, "conv2.weight",
                          {kConv2Out, kConv1Out, kConv2Kernel}).data;
  m.conv2_b_ = FindTensor(tensors, "conv2.bias", {kConv2Out}).data;
  m.proj_w_ = FindTensor(tensors, "proj.weight", {kEmbedDim, kPooledDim}).data;
  m.proj_b_ = FindTensor(tensors, "proj.bias", {kEmbedDim}).data;
  const Tensor& cw = FindTensor(tensors, "classifier.weight", {0, kEmbedDim});
  m.n_train_speakers_ = static_cast<int>(cw.dims[0]);
  m.cls_w_ = cw.data;
  m.cls_b_ = FindTensor(tensors, "classifier.bias",
                        {static_cast<uint32_t>(m.n_train_speakers_)}).data;
  m.SyncMirrorsFromMasters();
  return m;
}

}  // namespace codecshield
