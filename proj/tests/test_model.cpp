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

#include <cmath>
#include <fstream>

#include "codecshield/kernels.hpp"
#include "codecshield/model.hpp"
#include "codecshield/rng.hpp"
#include "codecshield/tensor_io.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace codecshield;

namespace {

const EmbeddingModel& RandomModel() {
  static EmbeddingModel m = EmbeddingModel::RandomInit(8, 2024);
  return m;
}

}  // namespace

TEST_CASE("embeddings are unit norm and deterministic") {
  const EmbeddingModel& m = RandomModel();
  Waveform w = testutil::TestWave(51, 0.6);
  Embedding e1 = m.Embed(w);
  Embedding e2 = m.Embed(w);
  CHECK(e1.v == e2.v);
  double norm = std::sqrt(kernels::SumSq(e1.v.data(), e1.v.size()));
  CHECK(std::fabs(norm - 1.0) < 1e-6);

  Waveform short_wave;
  short_wave.samples.assign(100, 0.1);
  CHECK_THROWS_AS(m.Embed(short_wave), InputError);
}

TEST_CASE("cosine scoring: self, antipodal, symmetry") {
  const EmbeddingModel& m = RandomModel();
  Waveform w = testutil::TestWave(52, 0.6);
  Embedding e = m.Embed(w);
  CHECK(m.Score(e, w) == doctest::Approx(1.0).epsilon(1e-6));

  Embedding neg = e;
  for (double& v : neg.v) v = -v;
  CHECK(m.Score(neg, w) == doctest::Approx(-1.0).epsilon(1e-6));

  // Cosine is symmetric in the two embeddings.
  Waveform w2 = testutil::TestWave(53, 0.6);
  Embedding e2 = m.Embed(w2);
  double s12 = kernels::Dot(e.v.data(), e2.v.data(), e.v.size());
  double s21 = kernels::Dot(e2.v.data(), e.v.data(), e.v.size());
  CHECK(s12 == doctest::Approx(s21).epsilon(1e-9));
}

TEST_CASE("model is not scale invariant") {
  const EmbeddingModel& m = RandomModel();
  Waveform w = testutil::TestWave(54, 0.6);
  Waveform half = w;
  for (double& s : half.samples) s *= 0.5;
  Embedding a = m.Embed(w);
  Embedding b = m.Embed(half);
  double max_diff = 0.0;
  for (size_t i = 0; i < a.v.size(); ++i) {
    max_diff = std::max(max_diff, std::fabs(a.v[i] - b.v[i]));
  }
  CHECK(max_diff > 1e-6);
}

TEST_CASE("score gradient matches finite differences") {
  const EmbeddingModel& m = RandomModel();
  Rng rng(55);
  for (int trial = 0; trial < 6; ++trial) {
    Waveform w = testutil::TestWave(500 + trial, 0.3);
    for (double& s : w.samples) s += 1e-3 * rng.Normal();
    Embedding enroll = m.Embed(testutil::TestWave(600 + trial, 0.3));

    auto [score, grad] = m.ScoreGrad(enroll, w);
    REQUIRE(grad.size() == w.samples.size());
    CHECK(score >= -1.0 - 1e-9);
    CHECK(score <= 1.0 + 1e-9);

    std::vector<double> dir(w.samples.size());
    double norm = 0.0;
    for (auto& d : dir) {
      d = rng.Normal();
      norm += d * d;
    }
    norm = std::sqrt(norm);
    for (auto& d : dir) d /= norm;

    const double h = 1e-4;
    Waveform wp = w, wm = w;
    for (size_t i = 0; i < w.samples.size(); ++i) {
      wp.samples[i] += h * dir[i];
      wm.samples[i] -= h * dir[i];
    }
    double fd = (m.Score(enroll, wp) - m.Score(enroll, wm)) / (2.0 * h);
    double analytic = kernels::Dot(grad.data(), dir.data(), dir.size());
    CHECK(std::fabs(fd - analytic) <=
          1e-3 * std::max({std::fabs(fd), std::fabs(analytic), 1e-9}));
  }
}

TEST_CASE("negating the enrollment negates the gradient exactly") {
  const EmbeddingModel& m = RandomModel();
  Waveform w = testutil::TestWave(56, 0.4);
  Embedding enroll = m.Embed(testutil::TestWave(57, 0.4));
  Embedding neg = enroll;
  for (double& v : neg.v) v = -v;

  auto [s1, g1] = m.ScoreGrad(enroll, w);
  auto [s2, g2] = m.ScoreGrad(neg, w);
  CHECK(s2 == doctest::Approx(-s1).epsilon(1e-12));
  REQUIRE(g1.size() == g2.size());
  for (size_t i = 0; i < g1.size(); ++i) CHECK(g2[i] == -g1[i]);
}

TEST_CASE("save/load round trip is bit exact") {
  testutil::TempDir tmp("model_io");
  const EmbeddingModel& m = RandomModel();
  auto path = tmp.path() / "m.model";
  m.Save(path);
  EmbeddingModel loaded = EmbeddingModel::Load(path);

  CHECK(loaded.n_train_speakers() == m.n_train_speakers());
  for (int i = 0; i < 10; ++i) {
    Waveform w = testutil::TestWave(700 + i, 0.4);
    Embedding enroll = m.Embed(testutil::TestWave(800 + i, 0.4));
    double s1 = m.Score(enroll, w);
    double s2 = loaded.Score(enroll, w);
    CHECK(s1 == s2);  // bit exact
  }
}

TEST_CASE("model loading rejects corrupt containers") {
  testutil::TempDir tmp("model_bad");
  const EmbeddingModel& m = RandomModel();
  auto good = tmp.path() / "good.model";
  m.Save(good);

  // Corrupt magic.
  {
    std::ifstream in(good, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    bytes[0] = 'X';
    auto bad = tmp.path() / "magic.model";
    std::ofstream out(bad, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    CHECK_THROWS_AS(EmbeddingModel::Load(bad), FormatError);
  }

  // Truncated payload.
  {
    std::ifstream in(good, std::ios::binary);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    bytes.resize(bytes.size() / 2);
    auto bad = tmp.path() / "trunc.model";
    std::ofstream out(bad, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    CHECK_THROWS_AS(EmbeddingModel::Load(bad), FormatError);
  }

  // A container claiming a different mel count.
  {
    std::vector<Tensor> tensors = ReadTensorFile("ASVM", good);
    for (Tensor& t : tensors) {
      if (t.name == "meta") t.data[4] = 32.0f;
    }
    auto bad = tmp.path() / "mels.model";
    WriteTensorFile("ASVM", tensors, bad);
    CHECK_THROWS_AS(EmbeddingModel::Load(bad), FormatError);
    try {
      EmbeddingModel::Load(bad);
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("mel") != std::string::npos);
    }
  }
}

TEST_CASE("classifier loss decreases toward the labeled speaker") {
  EmbeddingModel m = EmbeddingModel::RandomInit(4, 99);
  std::vector<double> e(EmbeddingModel::kEmbedDim, 0.0);
  e[0] = 1.0;
  std::vector<double> g;
  double loss = m.ClassifyLoss(e, 1, &g);
  CHECK(loss > 0.0);
  REQUIRE(g.size() == e.size());
  // Moving against the gradient must reduce the loss.
  std::vector<double> e2 = e;
  for (size_t i = 0; i < e.size(); ++i) e2[i] -= 0.01 * g[i];
  CHECK(m.ClassifyLoss(e2, 1, nullptr) < loss);
}
