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

#include "codecshield/attack.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "codecshield/kernels.hpp"
#include "codecshield/parallel.hpp"
#include "codecshield/wav.hpp"

namespace codecshield {

Waveform Bim(const EmbeddingModel& model, const Embedding& enroll,
             const Waveform& x0, const AttackConfig& cfg,
             const std::function<void(int)>& on_iter) {
  if (cfg.alpha_lsb < 1) throw InputError("alpha_lsb must be >= 1");
  if (cfg.epsilon_lsb < 0) throw InputError("epsilon_lsb must be >= 0");
  if (cfg.polarity_i != 0 && cfg.polarity_i != 1) {
    throw InputError("polarity_i must be 0 or 1");
  }

  const size_t n = x0.samples.size();
  const double eps = cfg.EpsilonFloat();
  // Ball around the original input, intersected with valid amplitudes.
  std::vector<double> lo(n), hi(n);
  for (size_t i = 0; i < n; ++i) {
    lo[i] = std::max(x0.samples[i] - eps, -1.0);
    hi[i] = std::min(x0.samples[i] + eps, 1.0);
  }

  const double step = (cfg.polarity_i == 0 ? 1.0 : -1.0) * cfg.AlphaFloat();
  Waveform x = x0;
  const int iters = cfg.Iterations();
  for (int k = 0; k < iters; ++k) {
    auto [score, grad] = model.ScoreGrad(enroll, x);
    (void)score;
    kernels::ClippedSignStep(x.samples.data(), grad.data(), lo.data(),
                             hi.data(), step, x.samples.data(), n);
    if (on_iter) on_iter(k);
  }
  return x;
}

std::vector<AttackManifestRow> AttackTrialSet(
    const EmbeddingModel& model, const TrialList& trials, int epsilon_lsb,
    int alpha_lsb, const std::filesystem::path& work_dir,
    const std::filesystem::path& out_dir, int jobs) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  // Enrollment embeddings are reused across trials sharing a speaker model.
  // Compute them serially first so the parallel phase is read-only.
  std::vector<Embedding> enroll_embs(trials.trials.size());
  {
    std::vector<std::string> paths;
    for (const Trial& t : trials.trials) paths.push_back(t.enroll_path);
    std::sort(paths.begin(), paths.end());
    paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
    std::vector<Embedding> cache(paths.size());
    ParallelFor(paths.size(), jobs, [&](size_t i) {
      cache[i] = model.Embed(ReadWav(work_dir / paths[i]));
    });
    for (size_t i = 0; i < trials.trials.size(); ++i) {
      size_t at = std::lower_bound(paths.begin(), paths.end(),
                                   trials.trials[i].enroll_path) -
                  paths.begin();
      enroll_embs[i] = cache[at];
    }
  }

  std::vector<AttackManifestRow> rows(trials.trials.size());
  ParallelFor(trials.trials.size(), jobs, [&](size_t i) {
    const Trial& t = trials.trials[i];
    AttackConfig cfg;
    cfg.epsilon_lsb = epsilon_lsb;
    cfg.alpha_lsb = alpha_lsb;
    cfg.polarity_i = t.is_target ? 1 : 0;

    Waveform orig = ReadWav(work_dir / t.test_path);
    double before = model.Score(enroll_embs[i], orig);
    Waveform adv = Bim(model, enroll_embs[i], orig, cfg);

    char name[64];
    std::snprintf(name, sizeof(name), "trial%04d.wav", static_cast<int>(i));
    std::filesystem::path adv_abs = out_dir / name;
    WriteWav(adv, adv_abs);
    // Score what was actually delivered: the 16-bit quantized file.
    Waveform delivered = ReadWav(adv_abs);
    double after = model.Score(enroll_embs[i], delivered);

    AttackManifestRow& row = rows[i];
    row.trial_idx = static_cast<int>(i);
    row.is_target = t.is_target;
    row.orig_path = t.test_path;
    row.adv_path = std::filesystem::relative(adv_abs, work_dir).string();
    row.score_before = before;
    row.score_after = after;
    row.epsilon_lsb = epsilon_lsb;
  });
  return rows;
}

void WriteAttackManifest(const std::vector<AttackManifestRow>& rows,
                         const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << "trial_idx,is_target,orig_path,adv_path,score_before,score_after,epsilon_lsb\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%s,%s,%.9g,%.9g,%d\n", r.trial_idx,
                  r.is_target ? 1 : 0, r.orig_path.c_str(), r.adv_path.c_str(),
                  r.score_before, r.score_after, r.epsilon_lsb);
    f << buf;
  }
  if (!f) throw IoError("short write: " + path.string());
}

std::vector<AttackManifestRow> ReadAttackManifest(
    const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path.string());
  std::vector<AttackManifestRow> rows;
  std::string line;
  if (!std::getline(f, line)) throw FormatError("empty manifest: " + path.string());
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    AttackManifestRow r;
    std::string field;
    auto next = [&]() {
      if (!std::getline(ss, field, ',')) {
        throw FormatError("short manifest row in " + path.string() + ": " + line);
      }
      return field;
    };
    r.trial_idx = std::stoi(next());
    r.is_target = std::stoi(next()) != 0;
    r.orig_path = next();
    r.adv_path = next();
    r.score_before = std::stod(next());
    r.score_after = std::stod(next());
    r.epsilon_lsb = std::stoi(next());
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace codecshield
