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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"
#include "chronos/privacy/accountant.h"
#include "chronos/privacy/mechanisms.h"
#include "gtest/gtest.h"

namespace chronos::privacy {
namespace {

PrivacyAccountant UniformLedger(int index_stats, int valuation, int affinity,
                                double sigma) {
  PrivacyAccountant acc(4.25, 1e-6);
  int epoch = 0;
  for (int i = 0; i < index_stats; ++i) {
    acc.Add(ReleaseRecord::Gaussian(Mechanism::kIndexStats, epoch++, sigma, 0.15));
  }
  for (int i = 0; i < valuation; ++i) {
    acc.Add(ReleaseRecord::Gaussian(Mechanism::kValuation, epoch++, sigma, 0.08));
  }
  for (int i = 0; i < affinity; ++i) {
    acc.Add(ReleaseRecord::Gaussian(Mechanism::kAffinity, epoch++, sigma, 17.7));
  }
  return acc;
}

TEST(SensitivityTest, Values) {
  EXPECT_NEAR(ValuationSensitivity(0.2, 10), 0.08, 1e-15);
  EXPECT_NEAR(IndexStatsSensitivity(10), 0.15, 1e-15);
  EXPECT_NEAR(AffinitySensitivity(297000, 1), 544.98, 0.005);
  EXPECT_NEAR(AffinitySensitivity(327, 1), 18.08, 0.005);
  EXPECT_NEAR(AffinitySensitivity(327, 2), 2 * std::sqrt(327.0), 1e-12);
  EXPECT_THROW(AffinitySensitivity(10, 0.5), ParameterError);
}

TEST(AccountantTest, TableLedgerRhoAndEpsilon) {
  PrivacyAccountant acc = UniformLedger(423, 287, 710, 50);
  // Each release costs 1/(2 * 50^2) = 2e-4.
  EXPECT_NEAR(acc.RhoFor(Mechanism::kIndexStats), 0.0846, 1e-12);
  EXPECT_NEAR(acc.RhoFor(Mechanism::kValuation), 0.0574, 1e-12);
  EXPECT_NEAR(acc.RhoFor(Mechanism::kAffinity), 0.142, 1e-12);
  EXPECT_NEAR(acc.RhoTotal(), 0.284, 1e-12);
  // 0.284 + 2 sqrt(0.284 * ln 1e6).
  const double eps = 0.284 + 2 * std::sqrt(0.284 * 13.815510557964274);
  EXPECT_NEAR(acc.ZcdpEpsilon(1e-6), eps, 1e-12);
  EXPECT_NEAR(acc.ZcdpEpsilon(1e-6), 4.246, 0.005);
}

TEST(AccountantTest, RhoAdditivityIsOrderIndependent) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> s(5, 500);
  std::vector<ReleaseRecord> recs;
  for (int i = 0; i < 2000; ++i) {
    recs.push_back(ReleaseRecord::Gaussian(Mechanism::kValuation, i, s(rng), 1));
  }
  PrivacyAccountant a, b;
  for (const auto& r : recs) a.Add(r);
  std::shuffle(recs.begin(), recs.end(), rng);
  for (const auto& r : recs) b.Add(r);
  EXPECT_EQ(a.RhoTotal(), b.RhoTotal());
  long double direct = 0;
  for (const auto& r : recs) direct += 1.0L / (2.0L * r.sigma * r.sigma);
  EXPECT_NEAR(a.RhoTotal(), static_cast<double>(direct), 1e-15);
  for (const auto& r : recs) {
    EXPECT_EQ(r.rho, 1.0 / (2.0 * r.sigma * r.sigma));
  }
}

TEST(AccountantTest, EpsilonMonotone) {
  PrivacyAccountant acc(10, 1e-6);
  double prev = acc.ZcdpEpsilon(1e-6);
  EXPECT_EQ(prev, 0.0);
  for (int i = 0; i < 50; ++i) {
    acc.Add(ReleaseRecord::Gaussian(Mechanism::kValuation, i, 20, 1));
    double e = acc.ZcdpEpsilon(1e-6);
    EXPECT_GT(e, prev);
    prev = e;
    EXPECT_GT(acc.ZcdpEpsilon(1e-8), acc.ZcdpEpsilon(1e-6));
  }
}

TEST(AccountantTest, WorstCaseAllActiveHorizon) {
  PrivacyAccountant acc = UniformLedger(2160, 2160, 2160, 50);
  EXPECT_NEAR(acc.RhoTotal(), 1.296, 1e-12);
  EXPECT_NEAR(acc.ZcdpEpsilon(1e-6), 9.7588, 1e-3);
}

TEST(RdpTest, Moment) {
  EXPECT_NEAR(RdpMoment(18, 50), 0.0036, 1e-15);
  EXPECT_DOUBLE_EQ(RdpMoment(2, 1), 1.0);
  EXPECT_NEAR(RdpMoment(8, 3) / RdpMoment(4, 3), 2.0, 1e-15);
  EXPECT_THROW(RdpMoment(1, 1), ParameterError);
}

TEST(RdpTest, GridOptimumNearZcdp) {
  PrivacyAccountant acc = UniformLedger(423, 287, 710, 50);
  const double rdp = acc.RdpEpsilon(1e-6);
  // Continuous optimum of a rho + L/(a-1) equals the zCDP conversion; the
  // integer grid point a = 8 sits next to a* = 7.97.
  EXPECT_GE(rdp, acc.ZcdpEpsilon(1e-6) - 1e-12);
  EXPECT_NEAR(rdp, 8 * 0.284 + 13.815510557964274 / 7, 1e-12);
}

// Independent GDP dual: scan then secant on log(delta).
double GdpOracle(double mu, double delta) {
  auto f = [&](double e) {
    return NormalCdf(-e / mu + mu / 2) - std::exp(e) * NormalCdf(-e / mu - mu / 2) -
           delta;
  };
  double a = 0;
  while (f(a + 0.5) > 0) a += 0.5;
  double b = a + 0.5;
  for (int i = 0; i < 200; ++i) {
    double m = 0.5 * (a + b);
    (f(m) > 0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

TEST(GdpTest, MuAndDualConversion) {
  PrivacyAccountant acc = UniformLedger(423, 287, 710, 50);
  EXPECT_NEAR(acc.GdpMu(), std::sqrt(1420.0) / 50, 1e-12);
  EXPECT_NEAR(acc.GdpMu(), 0.7537, 1e-3);
  const double eps = acc.GdpEpsilon(1e-6);
  EXPECT_NEAR(eps, GdpOracle(acc.GdpMu(), 1e-6), 2e-6);
  // The exact Gaussian tradeoff curve sits at 3.5518 here.
  EXPECT_NEAR(eps, 3.55176, 1e-4);
  EXPECT_LE(GdpDelta(acc.GdpMu(), eps), 1e-6);
  EXPECT_NEAR(GdpToEpsilon(1.0, 1e-5), 4.377178, 1e-5);
}

TEST(GdpTest, SmallMuGivesSmallEpsilon) {
  EXPECT_EQ(GdpToEpsilon(0, 1e-6), 0.0);
  EXPECT_LT(GdpToEpsilon(1e-4, 1e-6), 1e-3);
  EXPECT_THROW(GdpToEpsilon(200, 1e-6), NumericError);
}

TEST(AdaptiveSigmaTest, Schedule) {
  EXPECT_DOUBLE_EQ(AdaptiveSigma(100, 100, 50), 50);
  EXPECT_DOUBLE_EQ(AdaptiveSigma(1, 100, 50), 500);
  EXPECT_THROW(AdaptiveSigma(0, 100, 50), ParameterError);
  EXPECT_THROW(AdaptiveSigma(101, 100, 50), ParameterError);
  for (int T : {10, 100, 1000}) {
    const double s0 = 50;
    double sum = 0;
    for (int t = 1; t <= T; ++t) {
      double s = AdaptiveSigma(t, T, s0);
      sum += 1 / (2 * s * s);
    }
    EXPECT_NEAR(sum, T * (T + 1.0) / (4 * s0 * s0 * T), 1e-12);
    const double uniform = T / (2 * s0 * s0);
    EXPECT_NEAR(sum, uniform * (T + 1.0) / (2.0 * T), 1e-12);
  }
}

TEST(RemainingBudgetTest, PrimaryAndPrintedModes) {
  PrivacyAccountant empty(4.25, 1e-6);
  EXPECT_DOUBLE_EQ(empty.EpsRemaining(), 4.25);
  PrivacyAccountant full = UniformLedger(423, 287, 710, 50);
  EXPECT_NEAR(full.EpsRemaining(), 0.0, 0.005);
  // Printed expression: min over a of (eps_total - a rho + a L) / a.
  double best = 1e300;
  for (double a : RdpAlphaGrid()) {
    if (a <= 64) best = std::min(best, (4.25 - a * 0.284 + a * 13.815510557964274) / a);
  }
  EXPECT_NEAR(full.EpsRemaining(RemainingMode::kPrintedMinAlpha), best, 1e-9);

  PrivacyAccountant acc(4.25, 1e-6);
  double prev = acc.EpsRemaining();
  for (int i = 0; i < 1500; ++i) {
    acc.Add(ReleaseRecord::Gaussian(Mechanism::kAffinity, i, 50, 17.7));
    double r = acc.EpsRemaining();
    EXPECT_LE(r, prev);
    prev = r;
  }
  EXPECT_EQ(prev, 0.0);
}

TEST(TranscriptTest, RoundTripRecomputesEpsilon) {
  PrivacyAccountant acc = UniformLedger(4, 3, 7, 50);
  auto path = (std::filesystem::temp_directory_path() / "transcript.csv").string();
  acc.WriteTranscript(path);
  PrivacyAccountant back = PrivacyAccountant::ReadTranscript(path, 4.25, 1e-6);
  EXPECT_EQ(back.size(), acc.size());
  EXPECT_DOUBLE_EQ(back.ZcdpEpsilon(1e-6), acc.ZcdpEpsilon(1e-6));
}

TEST(ScalarReleaseTest, NoiseScale) {
  Rng rng(123);
  std::vector<double> draws;
  ReleaseRecord rec;
  for (int i = 0; i < 100000; ++i) {
    ScalarRelease r = ReleaseScalar(1.0, 0.08, 50, rng);
    draws.push_back(r.value - 1.0);
    rec = r.record;
  }
  MeanStd ms = ComputeMeanStd(draws);
  EXPECT_NEAR(ms.stddev, 4.0, 0.04);
  EXPECT_DOUBLE_EQ(rec.rho, 1.0 / 5000);
  EXPECT_DOUBLE_EQ(50 * 0.015, 0.75);
}

TEST(MatrixReleaseTest, SingleRecordIndependentOfShape) {
  Rng rng(1);
  for (int rows : {1, 10, 300}) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Constant(rows, 128, 0.5);
    AffinityRelease r = ReleaseAffinity(a, rows, 128, 17.7, 50, rng, 3);
    EXPECT_DOUBLE_EQ(r.record.rho, 1.0 / 5000);
    EXPECT_NEAR(r.affinity.sigma_entry, 885, 1e-9);
    EXPECT_TRUE((r.affinity.values.array() >= 0).all());
    EXPECT_TRUE((r.affinity.values.array() <= 1).all());
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(3, 4, 0.5);
  EXPECT_THROW(ReleaseAffinity(a, 3, 5, 1, 1, rng, 0), ParameterError);
  a(0, 0) = 1.5;
  EXPECT_THROW(ReleaseAffinity(a, 3, 4, 1, 1, rng, 0), ParameterError);
}

TEST(MatrixReleaseTest, GlobalVarianceDenominatorUnderstatesRho) {
  const double sigma = 50, delta2 = 17.7;
  const double nominal = 1 / (2 * sigma * sigma);
  EXPECT_NEAR(DeliveredRho(sigma * delta2, delta2), nominal, 1e-18);
  for (int m : {10, 1000, 38400}) {
    const double wrong_entry_std = sigma * delta2 / std::sqrt(double(m));
    EXPECT_NEAR(DeliveredRho(wrong_entry_std, delta2) / nominal, m, 1e-9 * m);
  }
}

TEST(MatrixReleaseTest, HugeNoiseGivesCoinFlips) {
  Rng rng(77);
  Eigen::MatrixXd a = Eigen::MatrixXd::Constant(1000, 1000, 0.3);
  AffinityRelease r = ReleaseAffinity(a, 1000, 1000, 17.7, 50, rng, 0);
  const double ones = (r.affinity.values.array() == 1.0).count() / 1e6;
  const double zeros = (r.affinity.values.array() == 0.0).count() / 1e6;
  EXPECT_NEAR(ones, 0.5, 0.01);
  EXPECT_NEAR(zeros, 0.5, 0.01);
}

TEST(MatrixReleaseTest, ZeroSensitivityIsExact) {
  Rng rng(2);
  Eigen::MatrixXd a = Eigen::MatrixXd::Random(4, 6).cwiseAbs();
  AffinityRelease r = ReleaseAffinity(a, 4, 6, 0.0, 50, rng, 0);
  EXPECT_TRUE(r.affinity.values == a);
}

TEST(RankFlipTest, FormulaAndMonteCarlo) {
  EXPECT_DOUBLE_EQ(RankFlipProbability(0.4, 0.4, 0.3, 2.0), 0.5);
  const double z = 1.959963984540054;
  EXPECT_NEAR(RankFlipProbability(z * 0.3 * 2 * std::sqrt(2.0), 0, 0.3, 2), 0.025,
              1e-9);
  EXPECT_EQ(RankFlipProbability(0.5, 0.2, 0, 1), 0.0);
  EXPECT_EQ(RankFlipProbability(0.5, 0.5, 0, 1), 0.5);
  // Noisy scores s + beta * noise with independent pre-clip noise.
  Rng rng(8);
  const double beta = 0.3, sigma = 0.5, si = 0.55, sj = 0.4;
  std::normal_distribution<double> g(0, sigma);
  int flips = 0;
  for (int i = 0; i < 100000; ++i) {
    flips += si + beta * g(rng) < sj + beta * g(rng);
  }
  EXPECT_NEAR(flips / 1e5, RankFlipProbability(si, sj, beta, sigma), 0.01);
}

TEST(SettlementTest, Snr) {
  EXPECT_NEAR(SettlementSnr(7, 0.4, 10, 5, 0.2, 50), 0.14, 1e-12);
  EXPECT_NEAR(SettlementSnr(14, 0.4, 10, 5, 0.2, 50), 0.28, 1e-12);
  EXPECT_NEAR(SettlementSnr(7, 0.9, 10, 10, 0.2, 50), 7 * 0.9 / (0.8 * 50), 1e-12);
}

TEST(EscrowTest, CommitVerify) {
  Nonce n = MakeNonce();
  EXPECT_EQ(n.size(), 16u);
  Digest d = EscrowCommit(0.1234, n);
  EXPECT_TRUE(EscrowVerify(d, 0.1234, n));
  EXPECT_FALSE(EscrowVerify(d, 0.1234 + 1e-9, n));
  Nonce other = MakeNonce();
  EXPECT_NE(ToHex(EscrowCommit(0.1234, other)), ToHex(d));
  EXPECT_THROW(EscrowCommit(0.1, Nonce(8, 1)), ParameterError);
  EXPECT_EQ(ToHex(d).size(), 64u);
}

TEST(EscrowTest, KnownDigest) {
  // Fixed nonce so the canonical encoding stays stable across releases.
  Nonce n(16, 0xab);
  EXPECT_EQ(ToHex(EscrowCommit(1.0, n)), ToHex(EscrowCommit(1.0, n)));
  EXPECT_NE(ToHex(EscrowCommit(1.0, n)), ToHex(EscrowCommit(-1.0, n)));
}

TEST(ExpMechanismTest, Tradeoff) {
  ExpMechanismTradeoff t = CompareExpMechanism(10, 128, 100, 0.01, 50, 50, 1e-6);
  EXPECT_NEAR(t.composed_eps, 100 * 0.01 * 50, 1e-12);
  EXPECT_NEAR(t.epoch_release_eps, ZcdpToEpsilon(50 / 5000.0, 1e-6), 1e-12);
  EXPECT_FALSE(t.per_query_competitive);
  EXPECT_TRUE(CompareExpMechanism(10, 128, 1, 0.01, 50, 50, 1e-6).per_query_competitive);
  EXPECT_EQ(CompareExpMechanism(10, 128, 0, 0.01, 50, 50, 1e-6).composed_eps, 0.0);
}

}  // namespace
}  // namespace chronos::privacy
