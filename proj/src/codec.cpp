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

#include "codecshield/codec.hpp"

#include <algorithm>
#include <cmath>

#include "codecshield/fingerprint.hpp"
#include "codecshield/kernels.hpp"
#include "codecshield/parallel.hpp"
#include "codecshield/rng.hpp"
#include "codecshield/tensor_io.hpp"
#include "codecshield/wav.hpp"

namespace codecshield {

namespace {

constexpr double kMu = 255.0;
constexpr int kBitcrushLevels = 64;  // 6 bits
constexpr double kLogRmsFloor = 1e-10;
constexpr size_t kKmeansSampleCap = 12000;
constexpr int kKmeansIters = 20;

double Sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace

Waveform BitcrushCodec::Resynth(const Waveform& w) const {
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(w.samples.size());
  const double log1p_mu = std::log1p(kMu);
  for (size_t i = 0; i < w.samples.size(); ++i) {
    double x = std::clamp(w.samples[i], -1.0, 1.0);
    double y = Sgn(x) * std::log1p(kMu * std::fabs(x)) / log1p_mu;
    double q = std::round((y + 1.0) * 0.5 * (kBitcrushLevels - 1)) /
                   (kBitcrushLevels - 1) * 2.0 -
               1.0;
    out.samples[i] = Sgn(q) * (std::pow(1.0 + kMu, std::fabs(q)) - 1.0) / kMu;
  }
  return out;
}

std::vector<uint8_t> CodeSequence::Serialize() const {
  std::vector<uint8_t> out;
  out.reserve(8 + static_cast<size_t>(n_frames) * 5);
  auto put_u32 = [&out](uint32_t v) {
    out.push_back(static_cast<uint8_t>(v & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<uint8_t>((v >> 24) & 0xff));
  };
  put_u32(n_frames);
  put_u32(original_length);
  for (uint32_t t = 0; t < n_frames; ++t) {
    out.push_back(gain_idx[t]);
    for (int s = 0; s < RvqCodec::kStages; ++s) {
      out.push_back(stage_idx[static_cast<size_t>(t) * RvqCodec::kStages + s]);
    }
  }
  return out;
}

CodeSequence CodeSequence::Deserialize(const std::vector<uint8_t>& bytes) {
  auto get_u32 = [&bytes](size_t off) {
    return static_cast<uint32_t>(bytes[off]) |
           (static_cast<uint32_t>(bytes[off + 1]) << 8) |
           (static_cast<uint32_t>(bytes[off + 2]) << 16) |
           (static_cast<uint32_t>(bytes[off + 3]) << 24);
  };
  if (bytes.size() < 8) throw FormatError("code sequence shorter than header");
  CodeSequence c;
  c.n_frames = get_u32(0);
  c.original_length = get_u32(4);
  if (bytes.size() != 8 + static_cast<size_t>(c.n_frames) * 5) {
    throw FormatError("code sequence payload size mismatch");
  }
  c.gain_idx.resize(c.n_frames);
  c.stage_idx.resize(static_cast<size_t>(c.n_frames) * RvqCodec::kStages);
  for (uint32_t t = 0; t < c.n_frames; ++t) {
    size_t off = 8 + static_cast<size_t>(t) * 5;
    c.gain_idx[t] = bytes[off];
    if (c.gain_idx[t] >= RvqCodec::kGainLevels) {
      throw FormatError("gain index out of range at frame " + std::to_string(t));
    }
    for (int s = 0; s < RvqCodec::kStages; ++s) {
      c.stage_idx[static_cast<size_t>(t) * RvqCodec::kStages + s] =
          bytes[off + 1 + s];
    }
  }
  return c;
}

RvqCodec::RvqCodec() {
  window_.resize(kFrameLen);
  for (int n = 0; n < kFrameLen; ++n) {
    double hann = 0.5 * (1.0 - std::cos(2.0 * M_PI * n / kFrameLen));
    window_[n] = static_cast<float>(std::sqrt(hann));
  }
}

void RvqCodec::FinalizeTables() {
  window_d_.assign(window_.begin(), window_.end());
  gain_levels_d_.assign(gain_levels_.begin(), gain_levels_.end());
  codebooks_d_.assign(codebooks_.begin(), codebooks_.end());

  dct_.resize(static_cast<size_t>(kFrameLen) * kFrameLen);
  const double scale = std::sqrt(2.0 / kFrameLen);
  for (int k = 0; k < kFrameLen; ++k) {
    double ck = (k == 0) ? scale / std::sqrt(2.0) : scale;
    for (int n = 0; n < kFrameLen; ++n) {
      dct_[static_cast<size_t>(k) * kFrameLen + n] =
          ck * std::cos(M_PI * (2 * n + 1) * k / (2.0 * kFrameLen));
    }
  }
}

void RvqCodec::DctForward(const double* frame, double* coeffs) const {
  for (int k = 0; k < kFrameLen; ++k) {
    coeffs[k] = kernels::Dot(dct_.data() + static_cast<size_t>(k) * kFrameLen,
                             frame, kFrameLen);
  }
}

void RvqCodec::DctInverse(const double* coeffs, double* frame) const {
  std::fill(frame, frame + kFrameLen, 0.0);
  for (int k = 0; k < kFrameLen; ++k) {
    if (coeffs[k] == 0.0) continue;
    kernels::Axpy(coeffs[k], dct_.data() + static_cast<size_t>(k) * kFrameLen,
                  frame, kFrameLen);
  }
}

RvqCodec::FrameCodes RvqCodec::QuantizeTransformed(
    const std::vector<double>& coeffs) const {
  if (coeffs.size() != kFrameLen) {
    throw InputError("frame must have " + std::to_string(kFrameLen) +
                     " coefficients");
  }
  FrameCodes out;

  double energy = kernels::SumSq(coeffs.data(), kFrameLen);
  double log_rms = std::log(std::max(std::sqrt(energy / kFrameLen), kLogRmsFloor));
  // Nearest grid level, lowest index on ties.
  int best_g = 0;
  double best_dist = std::fabs(log_rms - gain_levels_d_[0]);
  for (int i = 1; i < kGainLevels; ++i) {
    double d = std::fabs(log_rms - gain_levels_d_[i]);
    if (d < best_dist) {
      best_dist = d;
      best_g = i;
    }
  }
  out.gain_idx = static_cast<uint8_t>(best_g);

  std::vector<double> residual(kFrameLen, 0.0);
  double norm = std::sqrt(energy);
  if (norm > 0.0) {
    for (int i = 0; i < kFrameLen; ++i) residual[i] = coeffs[i] / norm;
  }
  // Exhaustive scan, lowest index on ties. Distances accumulate in fixed
  // 64-dim blocks; a candidate is abandoned once its partial sum already
  // exceeds the best, which cannot change the argmin since block sums of
  // squares never decrease.
  constexpr int kBlock = 64;
  for (int s = 0; s < kStages; ++s) {
    int best = 0;
    double best_d2 = 0.0;
    for (int off = 0; off < kFrameLen; off += kBlock) {
      best_d2 += kernels::SumSqDiff(residual.data() + off,
                                    centroid(s, 0) + off, kBlock);
    }
    for (int j = 1; j < kCodebookSize; ++j) {
      const double* c = centroid(s, j);
      double d2 = 0.0;
      for (int off = 0; off < kFrameLen; off += kBlock) {
        d2 += kernels::SumSqDiff(residual.data() + off, c + off, kBlock);
        if (d2 > best_d2) break;
      }
      if (d2 < best_d2) {
        best_d2 = d2;
        best = j;
      }
    }
    out.stage_idx[s] = static_cast<uint8_t>(best);
    const double* c = centroid(s, best);
    for (int i = 0; i < kFrameLen; ++i) residual[i] -= c[i];
  }
  return out;
}

CodeSequence RvqCodec::Encode(const Waveform& w) const {
  if (w.samples.size() < kFrameLen) {
    throw InputError("input shorter than one codec frame");
  }
  CodeSequence codes;
  codes.original_length = static_cast<uint32_t>(w.samples.size());
  codes.n_frames =
      1 + static_cast<uint32_t>((w.samples.size() - kFrameLen) / kHop);
  codes.gain_idx.resize(codes.n_frames);
  codes.stage_idx.resize(static_cast<size_t>(codes.n_frames) * kStages);

  std::vector<double> frame(kFrameLen), coeffs(kFrameLen);
  for (uint32_t t = 0; t < codes.n_frames; ++t) {
    const double* x = w.samples.data() + static_cast<size_t>(t) * kHop;
    for (int n = 0; n < kFrameLen; ++n) frame[n] = window_d_[n] * x[n];
    DctForward(frame.data(), coeffs.data());
    FrameCodes fc = QuantizeTransformed(coeffs);
    codes.gain_idx[t] = fc.gain_idx;
    for (int s = 0; s < kStages; ++s) {
      codes.stage_idx[static_cast<size_t>(t) * kStages + s] = fc.stage_idx[s];
    }
  }
  return codes;
}

Waveform RvqCodec::Decode(const CodeSequence& codes) const {
  Waveform out;
  out.samples.assign(codes.original_length, 0.0);
  if (codes.n_frames == 0) return out;

  std::vector<double> coeffs(kFrameLen), frame(kFrameLen);
  const size_t span = static_cast<size_t>(codes.n_frames - 1) * kHop + kFrameLen;
  std::vector<double> ola(span, 0.0);
  for (uint32_t t = 0; t < codes.n_frames; ++t) {
    if (codes.gain_idx[t] >= kGainLevels) {
      throw FormatError("gain index out of range at frame " + std::to_string(t));
    }
    std::fill(coeffs.begin(), coeffs.end(), 0.0);
    for (int s = 0; s < kStages; ++s) {
      uint8_t j = codes.stage_idx[static_cast<size_t>(t) * kStages + s];
      kernels::Axpy(1.0, centroid(s, j), coeffs.data(), kFrameLen);
    }
    const double gain = std::exp(gain_levels_d_[codes.gain_idx[t]]) *
                        std::sqrt(static_cast<double>(kFrameLen));
    for (int i = 0; i < kFrameLen; ++i) coeffs[i] *= gain;
    DctInverse(coeffs.data(), frame.data());
    double* dst = ola.data() + static_cast<size_t>(t) * kHop;
    for (int n = 0; n < kFrameLen; ++n) dst[n] += window_d_[n] * frame[n];
  }
  const size_t copy = std::min<size_t>(span, codes.original_length);
  for (size_t i = 0; i < copy; ++i) {
    out.samples[i] = std::clamp(ola[i], -1.0, 1.0);
  }
  return out;
}

Waveform RvqCodec::Resynth(const Waveform& w) const { return Decode(Encode(w)); }

namespace {

// Lloyd iterations with k-means++ seeding over `points` (rows of `dim`).
// Returns k centroids; empty clusters are reseeded to the point currently
// farthest from its centroid. With unit_norm the update renormalizes each
// centroid to the unit sphere (spherical k-means), which the first stage
// needs so that a codebook entry reproduces itself exactly through the
// shape normalization of the encoder.
std::vector<double> KMeans(const std::vector<double>& points, size_t n,
                           size_t dim, int k, int iters, bool unit_norm,
                           Rng* rng) {
  auto row = [&points, dim](size_t i) { return points.data() + i * dim; };
  std::vector<double> centroids(static_cast<size_t>(k) * dim, 0.0);

  // k-means++ seeding: first uniform, then proportional to squared
  // distance from the chosen set.
  std::vector<double> min_d2(n);
  size_t first = static_cast<size_t>(rng->UniformInt(0, static_cast<int64_t>(n) - 1));
  std::copy(row(first), row(first) + dim, centroids.begin());
  for (size_t i = 0; i < n; ++i) {
    min_d2[i] = kernels::SumSqDiff(row(i), centroids.data(), dim);
  }
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) total += min_d2[i];
    size_t pick = 0;
    if (total > 0.0) {
      double u = rng->Uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (size_t i = 0; i < n; ++i) {
        acc += min_d2[i];
        if (acc >= u) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<size_t>(rng->UniformInt(0, static_cast<int64_t>(n) - 1));
    }
    double* dst = centroids.data() + static_cast<size_t>(c) * dim;
    std::copy(row(pick), row(pick) + dim, dst);
    for (size_t i = 0; i < n; ++i) {
      double d2 = kernels::SumSqDiff(row(i), dst, dim);
      if (d2 < min_d2[i]) min_d2[i] = d2;
    }
  }

  std::vector<int> assign(n, 0);
  std::vector<double> dist(n, 0.0);
  std::vector<double> cnorm(k);
  for (int iter = 0; iter < iters; ++iter) {
    // Assignment via |r|^2 - 2 r.c + |c|^2; |r|^2 is constant per point.
    for (int c = 0; c < k; ++c) {
      cnorm[c] = kernels::SumSq(centroids.data() + static_cast<size_t>(c) * dim, dim);
    }
    ParallelFor(n, DefaultJobs(), [&](size_t i) {
      const double* p = row(i);
      int best = 0;
      double best_obj = cnorm[0] - 2.0 * kernels::Dot(p, centroids.data(), dim);
      for (int c = 1; c < k; ++c) {
        double obj = cnorm[c] -
                     2.0 * kernels::Dot(p, centroids.data() + static_cast<size_t>(c) * dim, dim);
        if (obj < best_obj) {
          best_obj = obj;
          best = c;
        }
      }
      assign[i] = best;
      dist[i] = best_obj + kernels::SumSq(p, dim);
    });

    std::vector<double> sums(static_cast<size_t>(k) * dim, 0.0);
    std::vector<size_t> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      kernels::Axpy(1.0, row(i), sums.data() + static_cast<size_t>(assign[i]) * dim, dim);
      ++counts[assign[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      double inv = 1.0 / static_cast<double>(counts[c]);
      double* dst = centroids.data() + static_cast<size_t>(c) * dim;
      const double* src = sums.data() + static_cast<size_t>(c) * dim;
      for (size_t d = 0; d < dim; ++d) dst[d] = src[d] * inv;
      if (unit_norm) {
        double norm = std::sqrt(kernels::SumSq(dst, dim));
        if (norm > 1e-12) {
          for (size_t d = 0; d < dim; ++d) dst[d] /= norm;
        }
      }
    }
    // Reseed empties to the farthest points, one at a time.
    for (int c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      size_t far = 0;
      double far_d = -1.0;
      for (size_t i = 0; i < n; ++i) {
        if (dist[i] > far_d) {
          far_d = dist[i];
          far = i;
        }
      }
      std::copy(row(far), row(far) + dim,
                centroids.begin() + static_cast<size_t>(c) * dim);
      dist[far] = -1.0;
    }
  }
  return centroids;
}

}  // namespace

RvqCodec RvqCodec::Train(const std::filesystem::path& corpus_dir, uint64_t seed) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(corpus_dir)) {
    for (const auto& e : std::filesystem::directory_iterator(corpus_dir)) {
      if (e.path().extension() == ".wav") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw IoError("no WAV files under " + corpus_dir.string());
  }

  RvqCodec codec;
  codec.FinalizeTables();  // window + DCT; codebooks come below

  // Collect windowed DCT frames from the whole corpus.
  std::vector<double> shapes;   // unit-norm rows
  std::vector<double> log_rms;
  std::vector<double> frame(kFrameLen), coeffs(kFrameLen);
  Fnv1a corpus_fp;
  for (const auto& f : files) {
    corpus_fp.Update(f.filename().string());
    Waveform w = ReadWav(f);
    if (w.samples.size() < kFrameLen) continue;
    corpus_fp.Update(w.samples.data(), w.samples.size() * sizeof(double));
    uint32_t n_frames = 1 + static_cast<uint32_t>((w.samples.size() - kFrameLen) / kHop);
    for (uint32_t t = 0; t < n_frames; ++t) {
      const double* x = w.samples.data() + static_cast<size_t>(t) * kHop;
      for (int n = 0; n < kFrameLen; ++n) frame[n] = codec.window_d_[n] * x[n];
      codec.DctForward(frame.data(), coeffs.data());
      double energy = kernels::SumSq(coeffs.data(), kFrameLen);
      double norm = std::sqrt(energy);
      log_rms.push_back(
          std::log(std::max(norm / std::sqrt(static_cast<double>(kFrameLen)),
                            kLogRmsFloor)));
      size_t base = shapes.size();
      shapes.resize(base + kFrameLen, 0.0);
      if (norm > 0.0) {
        for (int i = 0; i < kFrameLen; ++i) shapes[base + i] = coeffs[i] / norm;
      }
    }
  }
  const size_t total_frames = log_rms.size();
  if (total_frames < 10000) {
    throw InputError("codec training needs at least 10000 frames, got " +
                     std::to_string(total_frames));
  }

  // Gain grid: uniform in log-RMS between the 1st and 99th percentiles.
  {
    std::vector<double> sorted = log_rms;
    std::sort(sorted.begin(), sorted.end());
    auto pct = [&sorted](double q) {
      size_t i = static_cast<size_t>(
          std::lround(q * static_cast<double>(sorted.size() - 1)));
      return sorted[i];
    };
    double lo = pct(0.01), hi = pct(0.99);
    if (!(hi > lo)) hi = lo + 1.0;
    codec.gain_levels_.resize(kGainLevels);
    for (int i = 0; i < kGainLevels; ++i) {
      codec.gain_levels_[i] =
          static_cast<float>(lo + (hi - lo) * i / (kGainLevels - 1));
    }
  }

  // Subsample the fit set; residuals are propagated on the same rows.
  size_t stride = (total_frames + kKmeansSampleCap - 1) / kKmeansSampleCap;
  size_t n_fit = (total_frames + stride - 1) / stride;
  std::vector<double> fit(n_fit * kFrameLen);
  for (size_t i = 0; i < n_fit; ++i) {
    std::copy(shapes.data() + i * stride * kFrameLen,
              shapes.data() + (i * stride + 1) * kFrameLen,
              fit.data() + i * kFrameLen);
  }

  Rng rng(DeriveSeed(seed, "rvq-train"));
  codec.codebooks_.assign(
      static_cast<size_t>(kStages) * kCodebookSize * kFrameLen, 0.0f);
  for (int s = 0; s < kStages; ++s) {
    std::vector<double> learned = KMeans(fit, n_fit, kFrameLen,
                                         kCodebookSize - 1, kKmeansIters,
                                         /*unit_norm=*/s == 0, &rng);
    // Entry 0 stays the zero vector; learned centroids fill 1..255,
    // rounded to float32 before residuals are formed so that encoding
    // after save/load sees exactly the training-time codebook.
    float* book = codec.codebooks_.data() +
                  static_cast<size_t>(s) * kCodebookSize * kFrameLen;
    for (int j = 0; j < kCodebookSize - 1; ++j) {
      for (int d = 0; d < kFrameLen; ++d) {
        book[static_cast<size_t>(j + 1) * kFrameLen + d] =
            static_cast<float>(learned[static_cast<size_t>(j) * kFrameLen + d]);
      }
    }
    std::vector<double> book_d(book, book + static_cast<size_t>(kCodebookSize) * kFrameLen);
    ParallelFor(n_fit, DefaultJobs(), [&](size_t i) {
      double* r = fit.data() + i * kFrameLen;
      int best = 0;
      double best_d2 = kernels::SumSqDiff(r, book_d.data(), kFrameLen);
      for (int j = 1; j < kCodebookSize; ++j) {
        double d2 = kernels::SumSqDiff(
            r, book_d.data() + static_cast<size_t>(j) * kFrameLen, kFrameLen);
        if (d2 < best_d2) {
          best_d2 = d2;
          best = j;
        }
      }
      const double* c = book_d.data() + static_cast<size_t>(best) * kFrameLen;
      for (int d = 0; d < kFrameLen; ++d) r[d] -= c[d];
    });
  }

  codec.trained_on_ = corpus_fp.value();
  codec.FinalizeTables();
  return codec;
}

void RvqCodec::Save(const std::filesystem::path& path) const {
  std::vector<Tensor> tensors;
  tensors.push_back(Tensor{"meta",
                           {5},
                           {static_cast<float>(kFrameLen), static_cast<float>(kHop),
                            static_cast<float>(kStages),
                            static_cast<float>(kCodebookSize),
                            static_cast<float>(kGainLevels)}});
  // 64-bit fingerprint split into four exact 16-bit floats.
  tensors.push_back(Tensor{"trained_on",
                           {4},
                           {static_cast<float>(trained_on_ & 0xffff),
                            static_cast<float>((trained_on_ >> 16) & 0xffff),
                            static_cast<float>((trained_on_ >> 32) & 0xffff),
                            static_cast<float>((trained_on_ >> 48) & 0xffff)}});
  tensors.push_back(Tensor{"window", {kFrameLen}, window_});
  tensors.push_back(Tensor{"gain_levels", {kGainLevels}, gain_levels_});
  tensors.push_back(
      Tensor{"codebooks", {kStages, kCodebookSize, kFrameLen}, codebooks_});
  WriteTensorFile("RVQC", tensors, path);
}

RvqCodec RvqCodec::Load(const std::filesystem::path& path) {
  std::vector<Tensor> tensors = ReadTensorFile("RVQC", path);
  const Tensor& meta = FindTensor(tensors, "meta", {5});
  if (static_cast<int>(meta.data[0]) != kFrameLen ||
      static_cast<int>(meta.data[1]) != kHop ||
      static_cast<int>(meta.data[2]) != kStages ||
      static_cast<int>(meta.data[3]) != kCodebookSize ||
      static_cast<int>(meta.data[4]) != kGainLevels) {
    throw FormatError("codec configuration mismatch in " + path.string());
  }
  RvqCodec codec;
  codec.window_ = FindTensor(tensors, "window", {kFrameLen}).data;
  codec.gain_levels_ = FindTensor(tensors, "gain_levels", {kGainLevels}).data;
  codec.codebooks_ =
      FindTensor(tensors, "codebooks", {kStages, kCodebookSize, kFrameLen}).data;
  const Tensor& fp = FindTensor(tensors, "trained_on", {4});
  codec.trained_on_ = static_cast<uint64_t>(fp.data[0]) |
                      (static_cast<uint64_t>(fp.data[1]) << 16) |
                      (static_cast<uint64_t>(fp.data[2]) << 32) |
                      (static_cast<uint64_t>(fp.data[3]) << 48);
  codec.FinalizeTables();
  return codec;
}

std::unique_ptr<Codec> MakeBaselineCodec(const std::string& name) {
  if (name == "identity") return std::make_unique<IdentityCodec>();
  if (name == "bitcrush") return std::make_unique<BitcrushCodec>();
  throw InputError("unknown baseline codec '" + name + "'");
}

}  // namespace codecshield
