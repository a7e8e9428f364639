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

#include "codecshield/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace codecshield {

namespace {

std::string Trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int64_t ParseInt(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int64_t r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw FormatError("config key '" + key + "': bad integer '" + v + "'");
  }
}

double ParseReal(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::exception&) {
    throw FormatError("config key '" + key + "': bad number '" + v + "'");
  }
}

}  // namespace

ExperimentConfig ExperimentConfig::ParseString(const std::string& text) {
  ExperimentConfig cfg;
  bool saw_seed = false, saw_work_dir = false;

  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw FormatError("config line " + std::to_string(lineno) +
                          ": unterminated section header");
      }
      section = Trim(t.substr(1, t.size() - 2));
      static const std::set<std::string> kSections = {
          "corpus", "asv", "codec", "attack", "detector", "paths"};
      if (!kSections.count(section)) {
        throw FormatError("config line " + std::to_string(lineno) +
                          ": unknown section [" + section + "]");
      }
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    std::string key = Trim(t.substr(0, eq));
    std::string value = Trim(t.substr(eq + 1));
    std::string qual = section.empty() ? key : section + "." + key;

    if (qual == "seed") {
      cfg.seed = static_cast<uint64_t>(ParseInt(qual, value));
      saw_seed = true;
    } else if (qual == "corpus.n_speakers") {
      cfg.n_speakers = static_cast<int>(ParseInt(qual, value));
    } else if (qual == "corpus.utts_per_speaker") {
      cfg.utts_per_speaker = static_cast<int>(ParseInt(qual, value));
    } else if (qual == "corpus.duration_s") {
      cfg.duration_s = ParseReal(qual, value);
    } else if (qual == "asv.epochs") {
      cfg.asv.epochs = static_cast<int>(ParseInt(qual, value));
    } else if (qual == "asv.batch") {
      cfg.asv.batch = static_cast<int>(ParseInt(qual, value));
    } else if (qual == "asv.lr") {
      cfg.asv.lr = ParseReal(qual, value);
    } else if (qual == "asv.momentum") {
      cfg.asv.momentum = ParseReal(qual, value);
    } else if (qual == "asv.crop_s") {
      cfg.asv.crop_s = ParseReal(qual, value);
    } else if (qual == "codec.codecs") {
      cfg.codecs = SplitList(value);
    } else if (qual == "attack.epsilon_lsb") {
      cfg.epsilon_lsb.clear();
      for (const auto& v : SplitList(value)) {
        cfg.epsilon_lsb.push_back(static_cast<int>(ParseInt(qual, v)));
      }
    } else if (qual == "attack.alpha_lsb") {
      cfg.alpha_lsb = static_cast<int>(ParseInt(qual, value));
    } else if (qual == "detector.fpr_given") {
      cfg.fpr_given.clear();
      for (const auto& v : SplitList(value)) {
        cfg.fpr_given.push_back(ParseReal(qual, v));
      }
    } else if (qual == "detector.hist_bins") {
      cfg.hist_bins = static_cast<int>(ParseInt(qual, value));
    } else if (qual == "detector.hist_lo") {
      cfg.hist_lo = ParseReal(qual, value);
    } else if (qual == "detector.hist_hi") {
      cfg.hist_hi = ParseReal(qual, value);
    } else if (qual == "paths.work_dir") {
      cfg.work_dir = value;
      saw_work_dir = true;
    } else {
      throw FormatError("config line " + std::to_string(lineno) +
                        ": unknown key '" + qual + "'");
    }
  }
  if (!saw_seed) throw FormatError("config is missing the top-level seed");
  if (!saw_work_dir) throw FormatError("config is missing paths.work_dir");
  cfg.Validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::Parse(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config: " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseString(ss.str());
}

void ExperimentConfig::Validate() const {
  if (n_speakers < 2) throw FormatError("corpus.n_speakers must be >= 2");
  if (utts_per_speaker < 2) throw FormatError("corpus.utts_per_speaker must be >= 2");
  if (duration_s < 0.5 || duration_s > 4.0) {
    throw FormatError("corpus.duration_s must be in [0.5, 4.0]");
  }
  if (asv.epochs < 1 || asv.batch < 1) {
    throw FormatError("asv.epochs and asv.batch must be positive");
  }
  if (codecs.empty()) throw FormatError("codec.codecs must be non-empty");
  for (const auto& c : codecs) {
    if (c != "identity" && c != "bitcrush" && c != "rvq") {
      throw FormatError("unknown codec '" + c + "' in codec.codecs");
    }
  }
  if (epsilon_lsb.empty()) throw FormatError("attack.epsilon_lsb must be non-empty");
  for (int e : epsilon_lsb) {
    if (e < 0) throw FormatError("attack.epsilon_lsb entries must be >= 0");
  }
  if (alpha_lsb < 1) throw FormatError("attack.alpha_lsb must be >= 1");
  if (fpr_given.empty()) throw FormatError("detector.fpr_given must be non-empty");
  for (double f : fpr_given) {
    if (f < 0.0 || f > 1.0) throw FormatError("detector.fpr_given entries must be in [0, 1]");
  }
  if (hist_bins < 1) throw FormatError("detector.hist_bins must be >= 1");
  if (!(hist_lo < hist_hi)) throw FormatError("detector histogram range must satisfy lo < hi");
}

std::string ExperimentConfig::SectionFingerprintText(
    const std::string& section) const {
  std::ostringstream ss;
  ss.precision(17);
  if (section == "corpus") {
    ss << "seed=" << seed << ";n_speakers=" << n_speakers
       << ";utts_per_speaker=" << utts_per_speaker << ";duration_s=" << duration_s;
  } else if (section == "asv") {
    ss << "seed=" << seed << ";epochs=" << asv.epochs << ";batch=" << asv.batch
       << ";lr=" << asv.lr << ";momentum=" << asv.momentum
       << ";crop_s=" << asv.crop_s;
  } else if (section == "codec") {
    ss << "seed=" << seed << ";codecs=";
    for (const auto& c : codecs) ss << c << ",";
  } else if (section == "attack") {
    ss << "alpha_lsb=" << alpha_lsb << ";epsilon_lsb=";
    for (int e : epsilon_lsb) ss << e << ",";
  } else if (section == "detector") {
    ss << "fpr_given=";
    for (double f : fpr_given) ss << f << ",";
    ss << ";hist_bins=" << hist_bins << ";hist_lo=" << hist_lo
       << ";hist_hi=" << hist_hi;
  } else {
    throw InputError("no fingerprint text for section '" + section + "'");
  }
  return ss.str();
}

}  // namespace codecshield
