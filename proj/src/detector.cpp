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

#include "codecshield/detector.hpp"

#include <algorithm>
#include <cmath>

namespace codecshield {

DetectionThreshold Calibrate(const std::vector<double>& genuine_d,
                             double fpr_given) {
  if (genuine_d.empty()) throw InputError("cannot calibrate on an empty set");
  if (fpr_given < 0.0 || fpr_given > 1.0) {
    throw InputError("fpr_given must be in [0, 1]");
  }
  const size_t n = genuine_d.size();
  std::vector<double> sorted = genuine_d;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  size_t m = static_cast<size_t>(std::floor(fpr_given * static_cast<double>(n)));
  if (m >= n) m = n - 1;  // fpr_given == 1: the smallest value still bounds it
  DetectionThreshold thr;
  thr.fpr_given = fpr_given;
  thr.tau = sorted[m];
  size_t exceed = 0;
  for (double d : sorted) {
    if (d > thr.tau) ++exceed;
  }
  thr.achieved_fpr = static_cast<double>(exceed) / static_cast<double>(n);
  return thr;
}

double DetectionRate(const std::vector<double>& adv_d,
                     const DetectionThreshold& thr) {
  if (adv_d.empty()) throw InputError("cannot compute detection rate on an empty set");
  size_t exceed = 0;
  for (double d : adv_d) {
    if (d > thr.tau) ++exceed;
  }
  return static_cast<double>(exceed) / static_cast<double>(adv_d.size());
}

EerResult ComputeEer(std::vector<double> target_scores,
                     std::vector<double> nontarget_scores) {
  if (target_scores.empty() || nontarget_scores.empty()) {
    throw InputError("EER needs non-empty target and non-target sets");
  }
  std::sort(target_scores.begin(), target_scores.end());
  std::sort(nontarget_scores.begin(), nontarget_scores.end());
  const double nt = static_cast<double>(target_scores.size());
  const double nn = static_cast<double>(nontarget_scores.size());

  // Candidate thresholds: -inf then every distinct score. FAR decreases
  // from 1 and FRR rises from 0 as the threshold sweeps upward.
  std::vector<double> cand;
  cand.reserve(target_scores.size() + nontarget_scores.size());
  std::merge(target_scores.begin(), target_scores.end(),
             nontarget_scores.begin(), nontarget_scores.end(),
             std::back_inserter(cand));
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  auto far_at = [&](double t) {
    // fraction of non-target scores strictly above t
    size_t above = nontarget_scores.end() -
                   std::upper_bound(nontarget_scores.begin(),
                                    nontarget_scores.end(), t);
    return static_cast<double>(above) / nn;
  };
  auto frr_at = [&](double t) {
    // fraction of target scores at or below t
    size_t below_eq = std::upper_bound(target_scores.begin(),
                                       target_scores.end(), t) -
                      target_scores.begin();
    return static_cast<double>(below_eq) / nt;
  };

  double prev_thr = cand.front() - 1.0;  // below everything
  double prev_far = 1.0, prev_frr = 0.0;
  for (double t : cand) {
    double far = far_at(t);
    double frr = frr_at(t);
    double diff = far - frr;
    if (diff <= 0.0) {
      if (diff == 0.0) return {far, t};
      // Sign change between the previous ROC point and this one.
      double d_prev = prev_far - prev_frr;
      double denom = (far - prev_far) - (frr - prev_frr);
      double alpha = (denom == 0.0) ? 0.0 : d_prev / -denom;
      EerResult r;
      r.eer = prev_far + alpha * (far - prev_far);
      r.threshold = prev_thr + alpha * (t - prev_thr);
      return r;
    }
    prev_thr = t;
    prev_far = far;
    prev_frr = frr;
  }
  // FAR stayed above FRR even at the top threshold (cannot happen: at the
  // maximum score FAR = 0 and FRR >= 1/nt). Kept for safety.
  return {prev_far, prev_thr};
}

HistogramResult ComputeHistogram(const std::vector<double>& values, int n_bins,
                                 double lo, double hi) {
  if (n_bins < 1) throw InputError("histogram needs at least one bin");
  if (!(lo < hi)) throw InputError("histogram range must satisfy lo < hi");
  HistogramResult h;
  h.n_bins = n_bins;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(n_bins, 0);
  const double scale = n_bins / (hi - lo);
  for (double v : values) {
    int idx = static_cast<int>(std::floor((v - lo) * scale));
    if (idx < 0) idx = 0;
    if (idx >= n_bins) idx = n_bins - 1;
    ++h.counts[idx];
  }
  return h;
}

}  // namespace codecshield
