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

#include "codecshield/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#include "codecshield/detector.hpp"
#include "codecshield/kernels.hpp"
#include "codecshield/parallel.hpp"
#include "codecshield/rng.hpp"
#include "codecshield/wav.hpp"

namespace codecshield {

namespace {

struct CorpusUtt {
  int speaker = 0;
  int utt = 0;
  std::string rel_path;  // relative to work_dir
};

// Corpus files follow spkNNN_uttMM.wav; anything else is rejected so a
// stray file cannot silently shift labels.
std::vector<CorpusUtt> ScanCorpus(const std::filesystem::path& work_dir) {
  std::filesystem::path corpus = work_dir / "corpus";
  if (!std::filesystem::is_directory(corpus)) {
    throw IoError("corpus directory missing: " + corpus.string());
  }
  std::vector<CorpusUtt> utts;
  for (const auto& e : std::filesystem::directory_iterator(corpus)) {
    if (e.path().extension() != ".wav") continue;
    std::string name = e.path().filename().string();
    int spk = -1, utt = -1;
    if (std::sscanf(name.c_str(), "spk%d_utt%d.wav", &spk, &utt) != 2) {
      throw FormatError("unexpected corpus file name: " + name);
    }
    utts.push_back({spk, utt, "corpus/" + name});
  }
  std::sort(utts.begin(), utts.end(), [](const CorpusUtt& a, const CorpusUtt& b) {
    return a.speaker != b.speaker ? a.speaker < b.speaker : a.utt < b.utt;
  });
  if (utts.empty()) throw IoError("no corpus WAVs under " + corpus.string());
  return utts;
}

void ApplyMomentumUpdate(std::vector<double>* p, std::vector<double>* v,
                         const std::vector<double>& g, double lr,
                         double momentum) {
  for (size_t i = 0; i < p->size(); ++i) {
    (*v)[i] = momentum * (*v)[i] - lr * g[i];
    (*p)[i] += (*v)[i];
  }
}

}  // namespace

EmbeddingModel TrainModel(const std::filesystem::path& work_dir,
                          const TrialList& trial_list, const Hyperparams& hp,
                          uint64_t seed, std::ostream* log) {
  std::vector<CorpusUtt> utts = ScanCorpus(work_dir);
  int n_speakers = 0, utts_per_speaker = 0;
  for (const auto& u : utts) {
    n_speakers = std::max(n_speakers, u.speaker + 1);
    utts_per_speaker = std::max(utts_per_speaker, u.utt + 1);
  }

  // Holdout: the last two utterance indices per speaker stay out of the
  // classifier data when the corpus is big enough to afford it.
  const int holdout_from =
      utts_per_speaker >= 4 ? utts_per_speaker - 2 : utts_per_speaker;
  std::vector<const CorpusUtt*> train_set;
  for (const auto& u : utts) {
    if (u.utt < holdout_from) train_set.push_back(&u);
  }

  EmbeddingModel model = EmbeddingModel::RandomInit(n_speakers, seed);

  // Features are attack-independent, so compute them once per utterance;
  // crops then select frame windows (hop-aligned sample crops).
  std::vector<LogMel> feats(train_set.size());
  ParallelFor(train_set.size(), DefaultJobs(), [&](size_t i) {
    Waveform w = ReadWav(work_dir / train_set[i]->rel_path);
    feats[i] = LogMelForward(w, model.frame_spec(), model.mel_bank(),
                             model.fft(), nullptr);
  });

  const int crop_samples =
      static_cast<int>(std::lround(hp.crop_s * kSampleRate));
  const int crop_frames = FrameCount(static_cast<size_t>(crop_samples),
                                     model.frame_spec());

  EmbeddingModel::Params* params = model.MutableParams();
  EmbeddingModel::Params velocity, grads;
  velocity.Resize(n_speakers);
  grads.Resize(n_speakers);

  std::vector<size_t> order(train_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<double> crop_buf(static_cast<size_t>(EmbeddingModel::kMels) *
                               crop_frames);
  EmbeddingModel::Activations acts;
  std::vector<double> g_embed;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    const double lr =
        hp.lr * 0.5 * (1.0 + std::cos(M_PI * epoch / std::max(1, hp.epochs)));
    Rng epoch_rng(DeriveSeed(seed, "epoch", static_cast<uint64_t>(epoch)));
    epoch_rng.Shuffle(&order);

    double epoch_loss = 0.0;
    size_t seen = 0;
    for (size_t start = 0; start < order.size(); start += hp.batch) {
      size_t end = std::min(order.size(), start + hp.batch);
      grads.Zero();
      for (size_t b = start; b < end; ++b) {
        const LogMel& feat = feats[order[b]];
        int label = train_set[order[b]]->speaker;
        int T = feat.n_frames;
        int use_frames = std::min(T, crop_frames);
        int off = (T > use_frames)
                      ? static_cast<int>(epoch_rng.UniformInt(0, T - use_frames))
                      : 0;
        for (int m = 0; m < EmbeddingModel::kMels; ++m) {
          const double* src = feat.values.data() + static_cast<size_t>(m) * T + off;
          std::copy(src, src + use_frames,
                    crop_buf.data() + static_cast<size_t>(m) * use_frames);
        }
        model.ForwardFromFeatures(crop_buf.data(), use_frames, &acts);
        double loss = model.ClassifyLoss(acts.embedding, label, &g_embed, &grads);
        model.BackwardToFeatures(acts, g_embed, &grads, false);
        epoch_loss += loss;
        ++seen;
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      auto upd = [&](std::vector<double>& p, std::vector<double>& v,
                     std::vector<double>& g) {
        for (double& gi : g) gi *= scale;
        ApplyMomentumUpdate(&p, &v, g, lr, hp.momentum);
      };
      upd(params->conv1_w, velocity.conv1_w, grads.conv1_w);
      upd(params->conv1_b, velocity.conv1_b, grads.conv1_b);
      upd(params->conv2_w, velocity.conv2_w, grads.conv2_w);
      upd(params->conv2_b, velocity.conv2_b, grads.conv2_b);
      upd(params->proj_w, velocity.proj_w, grads.proj_w);
      upd(params->proj_b, velocity.proj_b, grads.proj_b);
      upd(params->cls_w, velocity.cls_w, grads.cls_w);
      upd(params->cls_b, velocity.cls_b, grads.cls_b);
    }
    if (log) {
      *log << "epoch " << epoch << " lr " << lr << " loss "
           << (epoch_loss / std::max<size_t>(1, seen)) << "\n";
    }
  }

  model.CommitParams();

  if (log) {
    // EER over trials whose test utterance the classifier never saw.
    std::map<std::string, Embedding> cache;
    auto embed_of = [&](const std::string& rel) -> const Embedding& {
      auto it = cache.find(rel);
      if (it == cache.end()) {
        it = cache.emplace(rel, model.Embed(ReadWav(work_dir / rel))).first;
      }
      return it->second;
    };
    std::vector<double> target_scores, nontarget_scores;
    for (const Trial& t : trial_list.trials) {
      int spk = -1, utt = -1;
      std::sscanf(t.test_path.c_str(), "corpus/spk%d_utt%d.wav", &spk, &utt);
      if (utt < holdout_from) continue;
      double s = kernels::Dot(embed_of(t.enroll_path).v.data(),
                              embed_of(t.test_path).v.data(),
                              EmbeddingModel::kEmbedDim);
      (t.is_target ? target_scores : nontarget_scores).push_back(s);
    }
    if (!target_scores.empty() && !nontarget_scores.empty()) {
      EerResult eer = ComputeEer(target_scores, nontarget_scores);
      *log << "holdout trials " << (target_scores.size() + nontarget_scores.size())
           << " eer " << eer.eer << " threshold " << eer.threshold << "\n";
    } else {
      *log << "holdout trials 0 (corpus too small for a holdout split)\n";
    }
  }
  return model;
}

}  // namespace codecshield
