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

#include <algorithm>
#include <cmath>
#include <vector>

#include "codecshield/detector.hpp"
#include "codecshield/rng.hpp"
#include "doctest.h"

using namespace codecshield;

namespace {

// Independent EER oracle: evaluate FAR/FRR at every midpoint between
// consecutive distinct scores (plus sentinels below and above), then
// interpolate linearly between the two ROC points bracketing FAR = FRR.
double OracleEer(const std::vector<double>& target,
                 const std::vector<double>& nontarget) {
  std::vector<double> merged = target;
  merged.insert(merged.end(), nontarget.begin(), nontarget.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

  std::vector<double> thresholds;
  thresholds.push_back(merged.front() - 1.0);
  for (size_t i = 0; i + 1 < merged.size(); ++i) {
    thresholds.push_back(0.5 * (merged[i] + merged[i + 1]));
  }
  thresholds.push_back(merged.back() + 1.0);

  auto rates = [&](double t) {
    size_t fa = 0, fr = 0;
    for (double s : nontarget) {
      if (s > t) ++fa;
    }
    for (double s : target) {
      if (s <= t) ++fr;
    }
    return std::pair<double, double>(
        static_cast<double>(fa) / nontarget.size(),
        static_cast<double>(fr) / target.size());
  };

  auto [pfar, pfrr] = rates(thresholds[0]);
  for (size_t i = 1; i < thresholds.size(); ++i) {
    auto [far, frr] = rates(thresholds[i]);
    if (far - frr <= 0.0) {
      if (far == frr) return far;
      double d_prev = pfar - pfrr;
      double denom = (far - pfar) - (frr - pfrr);
      double alpha = d_prev / -denom;
      return pfar + alpha * (far - pfar);
    }
    pfar = far;
    pfrr = frr;
  }
  return pfar;
}

}  // namespace

TEST_CASE("calibration on the worked decile example") {
  std::vector<double> d;
  for (int i = 1; i <= 10; ++i) d.push_back(i / 10.0);
  DetectionThreshold thr = Calibrate(d, 0.2);
  CHECK(thr.tau == 8.0 / 10.0);
  CHECK(thr.achieved_fpr == doctest::Approx(0.2));
}

TEST_CASE("calibration edge cases") {
  std::vector<double> d = {0.3, 0.1, 0.7, 0.2};

  DetectionThreshold zero = Calibrate(d, 0.0);
  CHECK(zero.tau == 0.7);
  CHECK(zero.achieved_fpr == 0.0);

  std::vector<double> equal(9, 0.42);
  DetectionThreshold ties = Calibrate(equal, 0.5);
  CHECK(ties.tau == 0.42);
  CHECK(ties.achieved_fpr == 0.0);

  DetectionThreshold all = Calibrate(d, 1.0);
  CHECK(all.achieved_fpr <= 1.0);

  CHECK_THROWS_AS(Calibrate({}, 0.1), InputError);
  CHECK_THROWS_AS(Calibrate(d, -0.1), InputError);
  CHECK_THROWS_AS(Calibrate(d, 1.5), InputError);
}

TEST_CASE("calibration soundness and tau minimality (oracle scan)") {
  Rng rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 1 + static_cast<size_t>(rng.UniformInt(0, 200));
    std::vector<double> d(n);
    for (auto& v : d) v = rng.Uniform(0.0, 1.0);
    if (trial % 5 == 0) {
      // Inject ties.
      for (size_t i = 0; i + 1 < n; i += 2) d[i + 1] = d[i];
    }
    double fpr = rng.Uniform(0.0, 1.0);
    DetectionThreshold thr = Calibrate(d, fpr);

    auto fpr_at = [&](double tau) {
      size_t c = 0;
      for (double v : d) {
        if (v > tau) ++c;
      }
      return static_cast<double>(c) / n;
    };
    CHECK(thr.achieved_fpr == doctest::Approx(fpr_at(thr.tau)));
    CHECK(thr.achieved_fpr <= fpr + 1e-12);
    // No smaller observed value keeps the budget.
    for (double v : d) {
      if (v < thr.tau) CHECK(fpr_at(v) > fpr);
    }
  }
}

TEST_CASE("detection rate counts strict exceedances") {
  DetectionThreshold thr;
  thr.tau = 0.7;
  CHECK(DetectionRate({0.5, 0.9}, thr) == doctest::Approx(0.5));

  DetectionThreshold positive;
  positive.tau = 1e-9;
  std::vector<double> zeros(32, 0.0);
  CHECK(DetectionRate(zeros, positive) == 0.0);

  CHECK_THROWS_AS(DetectionRate({}, thr), InputError);
}

TEST_CASE("classification boundary goes to genuine") {
  DetectionThreshold thr;
  thr.tau = 0.25;
  CHECK_FALSE(ClassifyAdversarial(0.25, thr));
  CHECK(ClassifyAdversarial(0.25 + 1e-12, thr));
  DetectionThreshold zero;
  zero.tau = 0.0;
  CHECK_FALSE(ClassifyAdversarial(0.0, zero));
}

TEST_CASE("detection rate is monotone in the false-positive budget") {
  Rng rng(82);
  std::vector<double> genuine(300), adv(300);
  for (auto& v : genuine) v = rng.Uniform(0.0, 0.4);
  for (auto& v : adv) v = rng.Uniform(0.1, 1.0);
  double prev_dr = -1.0;
  double prev_tau = 1e300;
  for (double fpr : {0.001, 0.01, 0.05, 0.2, 0.5}) {
    DetectionThreshold thr = Calibrate(genuine, fpr);
    CHECK(thr.tau <= prev_tau);
    double dr = DetectionRate(adv, thr);
    CHECK(dr >= prev_dr);
    prev_dr = dr;
    prev_tau = thr.tau;
  }
}

TEST_CASE("eer: trivial separations") {
  EerResult perfect = ComputeEer({0.9, 0.8}, {0.1, 0.2});
  CHECK(perfect.eer == doctest::Approx(0.0));

  std::vector<double> same = {0.3, 0.5, 0.7, 0.9};
  EerResult chance = ComputeEer(same, same);
  CHECK(chance.eer == doctest::Approx(0.5));

  CHECK_THROWS_AS(ComputeEer({}, {0.1}), InputError);
  CHECK_THROWS_AS(ComputeEer({0.1}, {}), InputError);
}

TEST_CASE("eer matches the midpoint-sweep oracle on random sets") {
  Rng rng(83);
  for (int trial = 0; trial < 100; ++trial) {
    size_t nt = 2 + static_cast<size_t>(rng.UniformInt(0, 80));
    size_t nn = 2 + static_cast<size_t>(rng.UniformInt(0, 80));
    std::vector<double> target(nt), nontarget(nn);
    double sep = rng.Uniform(-0.2, 0.6);
    for (auto& v : target) v = rng.Normal() + sep;
    for (auto& v : nontarget) v = rng.Normal();
    if (trial % 7 == 0) {
      // Discretize to force ties across the two sets.
      for (auto& v : target) v = std::round(v * 4.0) / 4.0;
      for (auto& v : nontarget) v = std::round(v * 4.0) / 4.0;
    }
    EerResult got = ComputeEer(target, nontarget);
    double want = OracleEer(target, nontarget);
    CHECK(std::fabs(got.eer - want) < 1e-9);
    CHECK(got.eer >= 0.0);
    CHECK(got.eer <= 1.0);
  }
}

TEST_CASE("eer is invariant under increasing affine maps") {
  Rng rng(84);
  std::vector<double> target(60), nontarget(60);
  for (auto& v : target) v = rng.Normal() + 0.8;
  for (auto& v : nontarget) v = rng.Normal();
  EerResult base = ComputeEer(target, nontarget);
  for (double a : {0.5, 2.0, 13.0}) {
    for (double b : {-3.0, 0.0, 11.0}) {
      auto map = [a, b](std::vector<double> v) {
        for (auto& x : v) x = a * x + b;
        return v;
      };
      EerResult mapped = ComputeEer(map(target), map(nontarget));
      CHECK(std::fabs(mapped.eer - base.eer) < 1e-9);
    }
  }
}

TEST_CASE("histogram: clamping and mass conservation") {
  std::vector<double> values = {-5.0, 0.0, 0.1, 0.5, 0.99, 1.0, 7.0};
  HistogramResult h = ComputeHistogram(values, 10, 0.0, 1.0);
  uint64_t total = 0;
  for (uint64_t c : h.counts) total += c;
  CHECK(total == values.size());
  CHECK(h.counts[0] == 2);  // -5.0 clamps down, 0.0 lands here
  CHECK(h.counts[9] == 3);  // 0.99 plus the clamped 1.0 and 7.0

  std::vector<double> at_lo = {0.0, 0.0};
  HistogramResult lo = ComputeHistogram(at_lo, 4, 0.0, 1.0);
  CHECK(lo.counts[0] == 2);

  CHECK_THROWS_AS(ComputeHistogram(values, 0, 0.0, 1.0), InputError);
  CHECK_THROWS_AS(ComputeHistogram(values, 4, 1.0, 1.0), InputError);
}
