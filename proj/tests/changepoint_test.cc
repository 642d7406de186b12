// Copyright 2026 The Chronos Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "chronos/changepoint/bocpd.h"
#include "chronos/changepoint/metrics.h"
#include "chronos/changepoint/page_hinkley.h"
#include "chronos/common/error.h"
#include "gtest/gtest.h"

namespace chronos::changepoint {
namespace {

double Sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(BocpdTest, ConstantStreamKeepsLongestRun) {
  Bocpd b(1);
  for (int t = 0; t < 100; ++t) b.Update(2.5);
  EXPECT_EQ(b.MapRunLength(), 100u);
  EXPECT_EQ(b.events(), 0);
}

TEST(BocpdTest, PosteriorIsADistribution) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0, 1);
  for (auto model : {LikelihoodModel::kIndependent, LikelihoodModel::kJoint}) {
    BocpdConfig c;
    c.model = model;
    Bocpd b(3, c);
    for (int t = 0; t < 400; ++t) {
      const double shift = t > 200 ? 4 : 0;
      const double x[3] = {noise(rng) + shift, noise(rng), 2 * noise(rng)};
      b.Update(x);
      if (!b.warmed_up()) continue;
      const auto p = b.Posterior();
      for (double q : p) EXPECT_GE(q, 0.0);
      EXPECT_NEAR(Sum(p), 1.0, 1e-9);
      EXPECT_TRUE(b.StatsConsistent());
    }
  }
}

TEST(BocpdTest, DetectsFiveSdShift) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0, 1);
  Bocpd b(1);
  long declared = -1;
  for (long t = 1; t <= 100; ++t) {
    const double x = (t >= 50 ? 5 : 0) + noise(rng);
    if (b.Update(x) && declared < 0) declared = t;
  }
  ASSERT_GE(declared, 50);
  EXPECT_LE(declared, 56);
}

TEST(BocpdTest, JointModelDetectsShift) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> noise(0, 1);
  BocpdConfig c;
  c.model = LikelihoodModel::kJoint;
  Bocpd b(2, c);
  std::vector<long> events;
  for (long t = 1; t <= 200; ++t) {
    const double x[2] = {(t >= 120 ? 5 : 0) + noise(rng), noise(rng)};
    if (b.Update(x)) events.push_back(t);
  }
  ASSERT_EQ(events.size(), 1u);
  EXPECT_GE(events[0], 120);
  EXPECT_LE(events[0], 126);
}

TEST(BocpdTest, MedianDelayOverSeededTrials) {
  std::vector<double> delays;
  int missed = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0, 1);
    Bocpd b(1);
    long first = -1;
    for (long t = 1; t <= 120; ++t) {
      if (b.Update((t >= 60 ? 5 : 0) + noise(rng)) && t >= 60 && first < 0) first = t;
    }
    if (first < 0) {
      ++missed;
    } else {
      delays.push_back(static_cast<double>(first - 60));
    }
  }
  std::sort(delays.begin(), delays.end());
  ASSERT_FALSE(delays.empty());
  EXPECT_LE(delays[delays.size() / 2], 4.0);
  EXPECT_LE(missed, 5);
}

TEST(BocpdTest, Deterministic) {
  auto run = [] {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0, 1);
    Bocpd b(1);
    for (int t = 0; t < 300; ++t) b.Update((t > 150 ? 5 : 0) + noise(rng));
    return b.Posterior();
  };
  EXPECT_EQ(run(), run());
}

TEST(BocpdTest, TinyHazardStaysQuietOnStationaryStream) {
  BocpdConfig c;
  c.hazard = 1e-9;
  Bocpd b(1, c);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0, 1);
  for (int t = 0; t < 5000; ++t) b.Update(noise(rng));
  EXPECT_EQ(b.events(), 0);
}

TEST(BocpdTest, RejectsBadInput) {
  Bocpd b(2);
  const double good[2] = {0, 0};
  const double bad[2] = {0, std::nan("")};
  EXPECT_NO_THROW(b.Update(good));
  EXPECT_THROW(b.Update(bad), NumericError);
  EXPECT_THROW(b.Update(1.0), ParameterError);
  BocpdConfig c;
  c.hazard = 0;
  EXPECT_THROW(Bocpd(1, c), ParameterError);
  EXPECT_THROW(Bocpd(0), ParameterError);
}

TEST(BocpdTest, WarmupReplaysObservations) {
  Bocpd b(1);
  for (int t = 0; t < 19; ++t) b.Update(static_cast<double>(t % 3));
  EXPECT_FALSE(b.warmed_up());
  EXPECT_TRUE(b.Posterior().empty());
  b.Update(1.0);
  EXPECT_TRUE(b.warmed_up());
  EXPECT_EQ(b.observations(), 20u);
  EXPECT_NEAR(Sum(b.Posterior()), 1.0, 1e-9);
}

TEST(EventDeclarerTest, ThresholdRule) {
  EventDeclarer d(0.85, 3);
  EXPECT_EQ(d.Offer(1, 0.9), std::optional<int>(0));
  EventDeclarer quiet(0.85, 3);
  EXPECT_FALSE(quiet.Offer(1, 0.5).has_value());
}

TEST(EventDeclarerTest, RefractoryMergesCloseCrossings) {
  EventDeclarer d(0.85, 3);
  EXPECT_TRUE(d.Offer(10, 0.9).has_value());
  EXPECT_FALSE(d.Offer(11, 0.2).has_value());
  EXPECT_FALSE(d.Offer(12, 0.95).has_value());
  EXPECT_FALSE(d.Offer(13, 0.1).has_value());
  EXPECT_EQ(d.Offer(14, 0.9), std::optional<int>(1));
  EXPECT_EQ(d.events(), 2);
}

TEST(EventDeclarerTest, SustainedMassFiresOnce) {
  EventDeclarer d(0.85, 3);
  int fired = 0;
  for (long t = 0; t < 20; ++t) fired += d.Offer(t, 0.99).has_value();
  EXPECT_EQ(fired, 1);
}

TEST(PageHinkleyTest, ConstantStreamIsQuiet) {
  const std::vector<double> s(1000, 3.0);
  EXPECT_TRUE(PageHinkley(s, 0.05, 10).empty());
}

TEST(PageHinkleyTest, SingleStep) {
  std::vector<double> s(400, 0.0);
  for (std::size_t t = 200; t < s.size(); ++t) s[t] = 10;
  const auto ev = PageHinkley(s, 0.1, 20);
  ASSERT_EQ(ev.size(), 1u);
  EXPECT_GE(ev[0], 200u);
  EXPECT_LE(ev[0], 205u);
}

TEST(PageHinkleyTest, WhiteNoiseWithLargeLambda) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0, 1);
  std::vector<double> s(10000);
  for (auto& x : s) x = noise(rng);
  EXPECT_TRUE(PageHinkley(s, 0.5, 50).empty());
  EXPECT_THROW(PageHinkley(s, 0, 50), ParameterError);
}

TEST(DetectorMetricsTest, PerfectDetection) {
  const std::vector<long> truth = {10, 50, 90};
  const auto m = EvaluateDetector(truth, truth, 6, RevaluationRho(50));
  EXPECT_DOUBLE_EQ(m.precision, 1);
  EXPECT_DOUBLE_EQ(m.recall, 1);
  EXPECT_DOUBLE_EQ(m.wasted_rho, 0);
  EXPECT_DOUBLE_EQ(m.median_delay, 0);
}

TEST(DetectorMetricsTest, SevenOfEight) {
  const std::vector<long> truth = {100, 300, 500, 700, 900, 1100, 1300, 1500};
  const std::vector<long> declared = {101, 302, 500, 703, 901, 1100, 1302, 1800};
  const auto m = EvaluateDetector(declared, truth, 6, RevaluationRho(50));
  EXPECT_DOUBLE_EQ(m.precision, 0.875);
  EXPECT_DOUBLE_EQ(m.recall, 0.875);
  EXPECT_EQ(m.false_alarms, 1u);
  EXPECT_DOUBLE_EQ(m.wasted_rho, 1.0 / 5000);
  EXPECT_DOUBLE_EQ(m.median_delay, 1.0);
}

TEST(DetectorMetricsTest, NoDeclarations) {
  const std::vector<long> truth = {10};
  const auto m = EvaluateDetector({}, truth, 6, 0.1);
  EXPECT_DOUBLE_EQ(m.recall, 0);
  EXPECT_DOUBLE_EQ(m.precision, 1);
  EXPECT_TRUE(m.precision_undefined);
  EXPECT_TRUE(std::isnan(m.median_delay));
}

TEST(DetectorMetricsTest, LateOrEarlyDeclarationsDoNotMatch) {
  const std::vector<long> truth = {100};
  const std::vector<long> declared = {99, 107};
  const auto m = EvaluateDetector(declared, truth, 6, 0);
  EXPECT_EQ(m.matched, 0u);
  EXPECT_EQ(m.false_alarms, 2u);
}

TEST(EventLogTest, WritesCsv) {
  const auto path = std::filesystem::temp_directory_path() / "chronos_events.csv";
  const std::vector<EventRecord> ev = {{12, 0, 0.9, "drift"}};
  WriteEventLogCsv(path.string(), ev);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header, "epoch,event_id,posterior_mass,stream");
  EXPECT_EQ(row, "12,0,0.9,drift");
}

}  // namespace
}  // namespace chronos::changepoint
