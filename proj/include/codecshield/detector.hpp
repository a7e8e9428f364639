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

#ifndef CODECSHIELD_DETECTOR_HPP_
#define CODECSHIELD_DETECTOR_HPP_

#include <cstdint>
#include <vector>

#include "codecshield/common.hpp"

namespace codecshield {

// Score-variation detection: an utterance whose ASV score moves by more
// than tau under codec resynthesis is flagged adversarial. The threshold
// is calibrated on genuine variations only, so no attack knowledge enters
// the calibration path (enforced by these signatures).

struct DetectionThreshold {
  double tau = 0.0;
  double fpr_given = 0.0;
  double achieved_fpr = 0.0;  // always <= fpr_given
};

// tau is the (m+1)-th largest genuine variation with m = floor(fpr * N),
// the largest observed value whose strict-exceedance fraction stays within
// the budget. Ties lower the achieved FPR, never raise it.
DetectionThreshold Calibrate(const std::vector<double>& genuine_d,
                             double fpr_given);

// Fraction of adversarial variations strictly above tau.
double DetectionRate(const std::vector<double>& adv_d,
                     const DetectionThreshold& thr);

// d > tau: adversarial; the boundary counts as genuine.
inline bool ClassifyAdversarial(double d, const DetectionThreshold& thr) {
  return d > thr.tau;
}

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

// Equal error rate of target vs non-target scores: FAR(t) = frac nontarget
// > t, FRR(t) = frac target <= t, linearly interpolated between the two
// adjacent ROC points where FAR - FRR changes sign. Rank-based, hence
// exactly invariant under increasing affine maps of the scores.
EerResult ComputeEer(std::vector<double> target_scores,
                     std::vector<double> nontarget_scores);

struct HistogramResult {
  int n_bins = 0;
  double lo = 0.0, hi = 0.0;
  std::vector<uint64_t> counts;  // sums to the input size
};

// Uniform bins over [lo, hi]; out-of-range values land in the edge bins.
HistogramResult ComputeHistogram(const std::vector<double>& values, int n_bins,
                                 double lo, double hi);

}  // namespace codecshield

#endif  // CODECSHIELD_DETECTOR_HPP_
