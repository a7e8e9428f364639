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

#include "codecshield/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "codecshield/attack.hpp"
#include "codecshield/codec.hpp"
#include "codecshield/detector.hpp"
#include "codecshield/fingerprint.hpp"
#include "codecshield/kernels.hpp"
#include "codecshield/parallel.hpp"
#include "codecshield/rng.hpp"
#include "codecshield/synth.hpp"
#include "codecshield/train.hpp"
#include "codecshield/wav.hpp"

namespace codecshield {

namespace {

std::string EpsDir(int eps) { return "adv/eps" + std::to_string(eps); }

std::string HexU64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<std::filesystem::path> ListFiles(const std::filesystem::path& dir,
                                             const std::string& ext) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && (ext.empty() || e.path().extension() == ext)) {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  return fields;
}

struct EmbedMap {
  std::vector<std::string> keys;  // sorted unique, relative to work_dir
  std::vector<Embedding> embs;

  const Embedding& at(const std::string& k) const {
    auto it = std::lower_bound(keys.begin(), keys.end(), k);
    if (it == keys.end() || *it != k) {
      throw InputError("no embedding cached for " + k);
    }
    return embs[static_cast<size_t>(it - keys.begin())];
  }
};

// Embeds every listed utterance, optionally after codec resynthesis.
EmbedMap EmbedPaths(const EmbeddingModel& model,
                    const std::filesystem::path& work_dir,
                    std::vector<std::string> paths, const Codec* codec,
                    int jobs) {
  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  EmbedMap map;
  map.keys = std::move(paths);
  map.embs.resize(map.keys.size());
  ParallelFor(map.keys.size(), jobs, [&](size_t i) {
    Waveform w = ReadWav(work_dir / map.keys[i]);
    map.embs[i] = model.Embed(codec ? codec->Resynth(w) : w);
  });
  return map;
}

void WriteVariationsCsv(const std::filesystem::path& path,
                        const std::vector<double>& d) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << "trial_idx,d\n";
  for (size_t i = 0; i < d.size(); ++i) {
    f << i << ',' << Fmt(d[i]) << '\n';
  }
  if (!f) throw IoError("short write: " + path.string());
}

std::vector<double> ReadVariationsCsv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path.string());
  std::string line;
  std::getline(f, line);  // header
  std::vector<double> d;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto fields = SplitCsvLine(line);
    if (fields.size() != 2) throw FormatError("bad variations row: " + line);
    d.push_back(std::stod(fields[1]));
  }
  return d;
}

}  // namespace

const std::vector<std::string>& Pipeline::StageNames() {
  static const std::vector<std::string> kNames = {
      "gen-data", "train-asv", "train-codec", "attack", "calibrate", "evaluate"};
  return kNames;
}

static std::vector<std::string> UpstreamOf(const std::string& name) {
  if (name == "gen-data") return {};
  if (name == "train-asv") return {"gen-data"};
  if (name == "train-codec") return {"gen-data"};
  if (name == "attack") return {"gen-data", "train-asv"};
  if (name == "calibrate") return {"gen-data", "train-asv", "train-codec"};
  if (name == "evaluate") {
    return {"gen-data", "train-asv", "train-codec", "attack", "calibrate"};
  }
  throw InputError("unknown stage '" + name + "'");
}

Pipeline::Pipeline(ExperimentConfig cfg, PipelineOptions opt)
    : cfg_(std::move(cfg)), opt_(opt) {
  if (opt_.jobs <= 0) opt_.jobs = DefaultJobs();
  std::filesystem::create_directories(cfg_.work_dir / "logs");
  std::filesystem::create_directories(cfg_.work_dir / "reports");
}

Pipeline::StageIo Pipeline::DescribeStage(const std::string& name) const {
  const auto& w = cfg_.work_dir;
  StageIo io;
  auto corpus_files = [&]() {
    std::vector<std::filesystem::path> rel;
    for (const auto& p : ListFiles(w / "corpus", ".wav")) {
      rel.push_back(std::filesystem::path("corpus") / p.filename());
    }
    return rel;
  };
  auto add_corpus_inputs = [&]() {
    io.inputs.push_back("trials.txt");
    for (auto& p : corpus_files()) io.inputs.push_back(p);
  };
  const bool has_rvq =
      std::find(cfg_.codecs.begin(), cfg_.codecs.end(), "rvq") != cfg_.codecs.end();

  if (name == "gen-data") {
    io.config_text = cfg_.SectionFingerprintText("corpus");
    io.outputs.push_back("trials.txt");
    // The corpus directory itself; individual files are deterministic in
    // the config so the fingerprint does not need them.
    io.outputs.push_back("corpus");
  } else if (name == "train-asv") {
    io.config_text = cfg_.SectionFingerprintText("asv");
    add_corpus_inputs();
    io.outputs.push_back("asv.model");
    io.outputs.push_back("logs/train_asv.log");
  } else if (name == "train-codec") {
    io.config_text = cfg_.SectionFingerprintText("codec");
    if (has_rvq) {
      for (auto& p : corpus_files()) io.inputs.push_back(p);
      io.outputs.push_back("rvq.codec");
    }
  } else if (name == "attack") {
    io.config_text = cfg_.SectionFingerprintText("attack");
    add_corpus_inputs();
    io.inputs.push_back("asv.model");
    for (int eps : cfg_.epsilon_lsb) {
      io.outputs.push_back(EpsDir(eps) + "/manifest.csv");
    }
  } else if (name == "calibrate") {
    // Genuine artifacts only: corpus, trials, model, codec tables. The
    // written manifest is the proof that no attack output is consumed.
    io.config_text = cfg_.SectionFingerprintText("detector") + "|" +
                     cfg_.SectionFingerprintText("codec");
    add_corpus_inputs();
    io.inputs.push_back("asv.model");
    if (has_rvq) io.inputs.push_back("rvq.codec");
    io.outputs.push_back("reports/calibration.csv");
    for (const auto& c : cfg_.codecs) {
      io.outputs.push_back("reports/genuine_variations_" + c + ".csv");
    }
  } else if (name == "evaluate") {
    io.config_text = cfg_.SectionFingerprintText("detector") + "|" +
                     cfg_.SectionFingerprintText("codec") + "|" +
                     cfg_.SectionFingerprintText("attack");
    add_corpus_inputs();
    io.inputs.push_back("asv.model");
    if (has_rvq) io.inputs.push_back("rvq.codec");
    io.inputs.push_back("reports/calibration.csv");
    for (const auto& c : cfg_.codecs) {
      io.inputs.push_back("reports/genuine_variations_" + c + ".csv");
    }
    for (int eps : cfg_.epsilon_lsb) {
      io.inputs.push_back(EpsDir(eps) + "/manifest.csv");
      for (const auto& p : ListFiles(w / EpsDir(eps), ".wav")) {
        io.inputs.push_back(std::filesystem::path(EpsDir(eps)) / p.filename());
      }
    }
    io.outputs.push_back("reports/detection_report.csv");
    io.outputs.push_back("reports/eer.csv");
    io.outputs.push_back("reports/tradeoff.csv");
    io.outputs.push_back("reports/attack_summary.csv");
    for (const auto& c : cfg_.codecs) {
      io.outputs.push_back("reports/histogram_" + c + ".csv");
      for (int eps : cfg_.epsilon_lsb) {
        io.outputs.push_back("reports/adv_variations_" + c + "_eps" +
                             std::to_string(eps) + ".csv");
      }
    }
  } else {
    throw InputError("unknown stage '" + name + "'");
  }
  return io;
}

uint64_t Pipeline::StageFingerprint(const std::string& name,
                                    const StageIo& io) const {
  Fnv1a h;
  h.Update("stage:");
  h.Update(name);
  h.Update("|config:");
  h.Update(io.config_text);
  for (const auto& rel : io.inputs) {
    h.Update("|input:");
    h.Update(rel.generic_string());
    h.UpdateFile(cfg_.work_dir / rel);
  }
  return h.value();
}

void Pipeline::WriteDoneFile(const std::string& name, const StageIo& io,
                             uint64_t fingerprint) const {
  std::filesystem::path path = cfg_.work_dir / (name + ".done");
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f << "stage " << name << '\n';
  f << "fingerprint " << HexU64(fingerprint) << '\n';
  for (const auto& rel : io.inputs) {
    f << "input " << rel.generic_string() << '\n';
  }
  if (!f) throw IoError("short write: " + path.string());
}

bool Pipeline::DoneMatches(const std::string& name, uint64_t fingerprint) const {
  std::filesystem::path path = cfg_.work_dir / (name + ".done");
  std::ifstream f(path);
  if (!f) return false;
  std::string line;
  while (std::getline(f, line)) {
    if (line.rfind("fingerprint ", 0) == 0) {
      return line.substr(12) == HexU64(fingerprint);
    }
  }
  return false;
}

bool Pipeline::OutputsExist(const StageIo& io) const {
  for (const auto& rel : io.outputs) {
    if (!std::filesystem::exists(cfg_.work_dir / rel)) return false;
  }
  return true;
}

void Pipeline::CheckUpstream(const std::string& name) const {
  for (const auto& up : UpstreamOf(name)) {
    std::filesystem::path done = cfg_.work_dir / (up + ".done");
    if (!std::filesystem::exists(done)) {
      throw InputError("stage '" + name + "' needs '" + up +
                       "' first; run `codecshield " + up + " --config <path>`");
    }
    if (opt_.force) continue;
    StageIo io = DescribeStage(up);
    if (!DoneMatches(up, StageFingerprint(up, io))) {
      throw InputError("artifacts of stage '" + up +
                       "' are stale for this config; re-run `codecshield " + up +
                       "` or pass --force");
    }
  }
}

StageResult Pipeline::RunStage(const std::string& name) {
  CheckUpstream(name);
  StageIo io = DescribeStage(name);
  uint64_t fp = StageFingerprint(name, io);
  StageResult result{name, false, 0.0};
  if (!opt_.force && DoneMatches(name, fp) && OutputsExist(io)) {
    result.skipped = true;
    if (opt_.progress) *opt_.progress << name << ": up to date, skipped\n";
    return result;
  }

  auto t0 = std::chrono::steady_clock::now();
  if (name == "gen-data") RunGenData();
  else if (name == "train-asv") RunTrainAsv();
  else if (name == "train-codec") RunTrainCodec();
  else if (name == "attack") RunAttack();
  else if (name == "calibrate") RunCalibrate();
  else if (name == "evaluate") RunEvaluate();
  else throw InputError("unknown stage '" + name + "'");
  auto t1 = std::chrono::steady_clock::now();
  result.seconds = std::chrono::duration<double>(t1 - t0).count();

  // Inputs may have appeared during the run (gen-data writes the corpus
  // its own fingerprint covers via config only), so refresh before saving.
  io = DescribeStage(name);
  WriteDoneFile(name, io, StageFingerprint(name, io));
  if (opt_.progress) {
    *opt_.progress << name << ": done in " << Fmt(result.seconds) << " s\n";
  }
  return result;
}

std::vector<StageResult> Pipeline::RunAll() {
  std::vector<StageResult> results;
  for (const auto& name : StageNames()) {
    results.push_back(RunStage(name));
  }
  return results;
}

void Pipeline::RunGenData() {
  GenCorpus(cfg_.n_speakers, cfg_.utts_per_speaker, cfg_.duration_s,
            DeriveSeed(cfg_.seed, "gen-data"), cfg_.work_dir, opt_.jobs);
}

void Pipeline::RunTrainAsv() {
  TrialList trials = ReadTrialList(cfg_.work_dir / "trials.txt");
  std::ofstream log(cfg_.work_dir / "logs/train_asv.log", std::ios::trunc);
  if (!log) throw IoError("cannot open training log");
  EmbeddingModel model = TrainModel(cfg_.work_dir, trials, cfg_.asv,
                                    DeriveSeed(cfg_.seed, "train-asv"), &log);
  model.Save(cfg_.work_dir / "asv.model");
}

void Pipeline::RunTrainCodec() {
  if (std::find(cfg_.codecs.begin(), cfg_.codecs.end(), "rvq") ==
      cfg_.codecs.end()) {
    return;  // nothing to train for the baseline codecs
  }
  RvqCodec codec = RvqCodec::Train(cfg_.work_dir / "corpus",
                                   DeriveSeed(cfg_.seed, "train-codec"));
  codec.Save(cfg_.work_dir / "rvq.codec");
}

void Pipeline::RunAttack() {
  EmbeddingModel model = EmbeddingModel::Load(cfg_.work_dir / "asv.model");
  TrialList trials = ReadTrialList(cfg_.work_dir / "trials.txt");
  for (int eps : cfg_.epsilon_lsb) {
    auto rows = AttackTrialSet(model, trials, eps, cfg_.alpha_lsb,
                               cfg_.work_dir, cfg_.work_dir / EpsDir(eps),
                               opt_.jobs);
    WriteAttackManifest(rows, cfg_.work_dir / EpsDir(eps) / "manifest.csv");
    if (opt_.progress) {
      *opt_.progress << "  attack eps=" << eps << ": " << rows.size()
                     << " trials\n";
    }
  }
}

namespace {

std::vector<std::unique_ptr<Codec>> BuildCodecs(
    const ExperimentConfig& cfg, const std::filesystem::path& work_dir) {
  std::vector<std::unique_ptr<Codec>> codecs;
  for (const auto& name : cfg.codecs) {
    if (name == "rvq") {
      codecs.push_back(std::make_unique<RvqCodec>(
          RvqCodec::Load(work_dir / "rvq.codec")));
    } else {
      codecs.push_back(MakeBaselineCodec(name));
    }
  }
  return codecs;
}

}  // namespace

void Pipeline::RunCalibrate() {
  EmbeddingModel model = EmbeddingModel::Load(cfg_.work_dir / "asv.model");
  TrialList trials = ReadTrialList(cfg_.work_dir / "trials.txt");
  auto codecs = BuildCodecs(cfg_, cfg_.work_dir);

  std::vector<std::string> enroll_paths, test_paths;
  for (const Trial& t : trials.trials) {
    enroll_paths.push_back(t.enroll_path);
    test_paths.push_back(t.test_path);
  }
  std::vector<std::string> all_paths = enroll_paths;
  all_paths.insert(all_paths.end(), test_paths.begin(), test_paths.end());
  EmbedMap raw = EmbedPaths(model, cfg_.work_dir, all_paths, nullptr, opt_.jobs);

  std::ofstream cal(cfg_.work_dir / "reports/calibration.csv", std::ios::trunc);
  if (!cal) throw IoError("cannot open calibration.csv");
  cal << "codec,fpr_given,tau,achieved_fpr\n";

  for (const auto& codec : codecs) {
    EmbedMap resynth =
        EmbedPaths(model, cfg_.work_dir, test_paths, codec.get(), opt_.jobs);
    std::vector<double> d(trials.trials.size());
    for (size_t i = 0; i < trials.trials.size(); ++i) {
      const Trial& t = trials.trials[i];
      const Embedding& e = raw.at(t.enroll_path);
      double s = kernels::Dot(e.v.data(), raw.at(t.test_path).v.data(),
                              EmbeddingModel::kEmbedDim);
      double s2 = kernels::Dot(e.v.data(), resynth.at(t.test_path).v.data(),
                               EmbeddingModel::kEmbedDim);
      d[i] = std::fabs(s - s2);
    }
    WriteVariationsCsv(
        cfg_.work_dir / ("reports/genuine_variations_" + codec->name() + ".csv"),
        d);
    for (double fpr : cfg_.fpr_given) {
      DetectionThreshold thr = Calibrate(d, fpr);
      cal << codec->name() << ',' << Fmt(fpr) << ',' << Fmt(thr.tau) << ','
          << Fmt(thr.achieved_fpr) << '\n';
    }
    if (opt_.progress) {
      *opt_.progress << "  calibrate " << codec->name() << ": "
                     << trials.trials.size() << " genuine variations\n";
    }
  }
  if (!cal) throw IoError("short write: calibration.csv");
}

void Pipeline::RunEvaluate() {
  EmbeddingModel model = EmbeddingModel::Load(cfg_.work_dir / "asv.model");
  TrialList trials = ReadTrialList(cfg_.work_dir / "trials.txt");
  auto codecs = BuildCodecs(cfg_, cfg_.work_dir);
  const size_t n_trials = trials.trials.size();

  // Calibrated thresholds, keyed (codec, fpr index by config order).
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> taus;
  {
    std::ifstream f(cfg_.work_dir / "reports/calibration.csv");
    if (!f) throw IoError("calibration.csv missing; run calibrate first");
    std::string line;
    std::getline(f, line);
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      auto fields = SplitCsvLine(line);
      if (fields.size() != 4) throw FormatError("bad calibration row: " + line);
      taus[{fields[0], fields[1]}] = {std::stod(fields[2]), std::stod(fields[3])};
    }
  }

  std::vector<std::string> enroll_paths, test_paths;
  for (const Trial& t : trials.trials) {
    enroll_paths.push_back(t.enroll_path);
    test_paths.push_back(t.test_path);
  }
  std::vector<std::string> all_paths = enroll_paths;
  all_paths.insert(all_paths.end(), test_paths.begin(), test_paths.end());
  EmbedMap raw = EmbedPaths(model, cfg_.work_dir, all_paths, nullptr, opt_.jobs);

  // Adversarial manifests and per-trial raw adversarial embeddings.
  std::map<int, std::vector<AttackManifestRow>> manifests;
  std::map<int, std::vector<Embedding>> adv_raw;
  for (int eps : cfg_.epsilon_lsb) {
    auto rows = ReadAttackManifest(cfg_.work_dir / EpsDir(eps) / "manifest.csv");
    if (rows.size() != n_trials) {
      throw FormatError("manifest for eps " + std::to_string(eps) +
                        " has " + std::to_string(rows.size()) + " rows, want " +
                        std::to_string(n_trials));
    }
    std::vector<Embedding> embs(n_trials);
    ParallelFor(n_trials, opt_.jobs, [&](size_t i) {
      embs[i] = model.Embed(ReadWav(cfg_.work_dir / rows[i].adv_path));
    });
    adv_raw[eps] = std::move(embs);
    manifests[eps] = std::move(rows);
  }

  std::ofstream det(cfg_.work_dir / "reports/detection_report.csv", std::ios::trunc);
  det << "codec,epsilon_lsb,fpr_given,tau,achieved_fpr,detection_rate\n";
  std::ofstream eer_csv(cfg_.work_dir / "reports/eer.csv", std::ios::trunc);
  eer_csv << "codec,population,eer,eer_threshold\n";
  std::ofstream tradeoff(cfg_.work_dir / "reports/tradeoff.csv", std::ios::trunc);
  tradeoff << "codec,epsilon_lsb,genuine_eer,adversarial_eer\n";

  for (const auto& codec : codecs) {
    const std::string cname = codec->name();
    std::vector<double> genuine_d =
        ReadVariationsCsv(cfg_.work_dir / ("reports/genuine_variations_" + cname + ".csv"));
    if (genuine_d.size() != n_trials) {
      throw FormatError("genuine variations for " + cname + " out of date");
    }

    // Genuine EER after resynthesis.
    EmbedMap resynth = EmbedPaths(model, cfg_.work_dir, test_paths, codec.get(),
                                  opt_.jobs);
    std::vector<double> gen_target, gen_nontarget;
    for (const Trial& t : trials.trials) {
      double s = kernels::Dot(raw.at(t.enroll_path).v.data(),
                              resynth.at(t.test_path).v.data(),
                              EmbeddingModel::kEmbedDim);
      (t.is_target ? gen_target : gen_nontarget).push_back(s);
    }
    EerResult gen_eer = ComputeEer(gen_target, gen_nontarget);
    eer_csv << cname << ",genuine," << Fmt(gen_eer.eer) << ','
            << Fmt(gen_eer.threshold) << '\n';

    std::ofstream hist(cfg_.work_dir / ("reports/histogram_" + cname + ".csv"),
                       std::ios::trunc);
    hist << "population,bin_lo,bin_hi,count\n";
    auto emit_hist = [&](const std::string& pop, const std::vector<double>& d) {
      HistogramResult h = ComputeHistogram(d, cfg_.hist_bins, cfg_.hist_lo,
                                           cfg_.hist_hi);
      const double width = (h.hi - h.lo) / h.n_bins;
      for (int b = 0; b < h.n_bins; ++b) {
        hist << pop << ',' << Fmt(h.lo + b * width) << ','
             << Fmt(h.lo + (b + 1) * width) << ',' << h.counts[b] << '\n';
      }
    };
    emit_hist("genuine", genuine_d);

    for (int eps : cfg_.epsilon_lsb) {
      const auto& rows = manifests[eps];
      // Adversarial variations and post-resynthesis scores.
      std::vector<Embedding> adv_resynth(n_trials);
      ParallelFor(n_trials, opt_.jobs, [&](size_t i) {
        Waveform w = ReadWav(cfg_.work_dir / rows[i].adv_path);
        adv_resynth[i] = model.Embed(codec->Resynth(w));
      });
      std::vector<double> adv_d(n_trials);
      std::vector<double> adv_target, adv_nontarget;
      for (size_t i = 0; i < n_trials; ++i) {
        const Trial& t = trials.trials[i];
        const Embedding& e = raw.at(t.enroll_path);
        double s = kernels::Dot(e.v.data(), adv_raw[eps][i].v.data(),
                                EmbeddingModel::kEmbedDim);
        double s2 = kernels::Dot(e.v.data(), adv_resynth[i].v.data(),
                                 EmbeddingModel::kEmbedDim);
        adv_d[i] = std::fabs(s - s2);
        (t.is_target ? adv_target : adv_nontarget).push_back(s2);
      }
      WriteVariationsCsv(cfg_.work_dir / ("reports/adv_variations_" + cname +
                                          "_eps" + std::to_string(eps) + ".csv"),
                         adv_d);
      emit_hist("adv_eps" + std::to_string(eps), adv_d);

      EerResult adv_eer = ComputeEer(adv_target, adv_nontarget);
      eer_csv << cname << ",adv_eps" << eps << ',' << Fmt(adv_eer.eer) << ','
              << Fmt(adv_eer.threshold) << '\n';
      tradeoff << cname << ',' << eps << ',' << Fmt(gen_eer.eer) << ','
               << Fmt(adv_eer.eer) << '\n';

      for (double fpr : cfg_.fpr_given) {
        auto it = taus.find({cname, Fmt(fpr)});
        if (it == taus.end()) {
          throw FormatError("calibration.csv lacks codec " + cname +
                            " at fpr " + Fmt(fpr) + "; re-run calibrate");
        }
        DetectionThreshold thr;
        thr.fpr_given = fpr;
        thr.tau = it->second.first;
        thr.achieved_fpr = it->second.second;
        double dr = DetectionRate(adv_d, thr);
        det << cname << ',' << eps << ',' << Fmt(fpr) << ',' << Fmt(thr.tau)
            << ',' << Fmt(thr.achieved_fpr) << ',' << Fmt(dr) << '\n';
      }
    }
    if (opt_.progress) *opt_.progress << "  evaluate " << cname << ": done\n";
  }

  // Attack effectiveness summary straight from the manifests.
  std::ofstream summary(cfg_.work_dir / "reports/attack_summary.csv",
                        std::ios::trunc);
  summary << "epsilon_lsb,n_nontarget,ascent_rate_nontarget,"
             "genuine_eer_threshold,false_accept_rate\n";
  for (int eps : cfg_.epsilon_lsb) {
    const auto& rows = manifests[eps];
    std::vector<double> t_before, n_before;
    size_t n_nontarget = 0, ascended = 0;
    for (const auto& r : rows) {
      (r.is_target ? t_before : n_before).push_back(r.score_before);
      if (!r.is_target) {
        ++n_nontarget;
        if (r.score_after > r.score_before) ++ascended;
      }
    }
    EerResult base = ComputeEer(t_before, n_before);
    size_t accepted = 0;
    for (const auto& r : rows) {
      if (!r.is_target && r.score_after > base.threshold) ++accepted;
    }
    summary << eps << ',' << n_nontarget << ','
            << Fmt(static_cast<double>(ascended) / std::max<size_t>(1, n_nontarget))
            << ',' << Fmt(base.threshold) << ','
            << Fmt(static_cast<double>(accepted) / std::max<size_t>(1, n_nontarget))
            << '\n';
  }
}

}  // namespace codecshield
