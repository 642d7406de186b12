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
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <vector>

#include "chronos/common/error.h"
#include "chronos/kg/change_process.h"
#include "chronos/kg/clipping.h"
#include "chronos/kg/generator.h"
#include "chronos/kg/io.h"
#include "chronos/kg/sellers.h"
#include "chronos/kg/temporal_kg.h"
#include "gtest/gtest.h"

namespace chronos::kg {
namespace {

// Byte-at-a-time FNV-1a written out independently of the library helper.
uint64_t ReferenceFnv(uint32_t u, uint32_t v, uint32_t r) {
  uint64_t h = 14695981039346656037ULL;
  for (uint32_t word : {u, v, r}) {
    for (int i = 0; i < 4; ++i) {
      h ^= (word >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  }
  return h;
}

TEST(PublicHashTest, MatchesByteLevelReference) {
  for (uint32_t u : {0u, 1u, 77u, 123456u}) {
    for (uint32_t r : {0u, 3u}) {
      EXPECT_EQ(PublicHash({u, u + 5, r}), ReferenceFnv(u, u + 5, r));
    }
  }
}

TEST(TemporalKgTest, VisibilityFollowsLaunchTime) {
  TemporalKG kg(4, 2, 2, 10.0);
  EdgeId a = kg.AddEdge(0, 1, 0, 9.99, kPublicOwner);
  EdgeId b = kg.AddEdge(1, 2, 1, 10.0, 3);
  EXPECT_TRUE(kg.edge(a).is_public());
  EXPECT_EQ(kg.edge(a).owner, kPublicOwner);
  EXPECT_FALSE(kg.edge(b).is_public());
  EXPECT_EQ(kg.edge(b).owner, 3);
  EXPECT_THROW(kg.AddEdge(0, 1, 0, 12.0, kPublicOwner), ParameterError);
  EXPECT_THROW(kg.AddEdge(0, 4, 0, 1.0, kPublicOwner), ParameterError);
  EXPECT_THROW(kg.AddEdge(0, 1, 2, 1.0, kPublicOwner), ParameterError);
  EXPECT_THROW(kg.AddEdge(0, 1, 0, -1.0, kPublicOwner), ParameterError);
  EXPECT_THROW(TemporalKG(3, 1, 1, 0.0), ParameterError);
}

TEST(TemporalKgTest, PrivateAccessIsAudited) {
  TemporalKG kg(3, 2, 1, 5.0);
  kg.AddEdge(0, 1, 0, 1.0, kPublicOwner);
  kg.AddEdge(1, 2, 0, 6.0, 0);
  TemporalKG pub = kg.PublicSubgraph();
  const uint64_t before = PrivateAccessCount();
  (void)pub.edges();
  (void)kg.edge(0);
  (void)PublicNeighbours(kg);
  EXPECT_EQ(PrivateAccessCount(), before);
  (void)kg.edge(1);
  EXPECT_EQ(PrivateAccessCount(), before + 1);
  EXPECT_TRUE(pub.IsPublicOnly());
  EXPECT_EQ(pub.edge_count(), 1u);
}

TEST(GeneratorTest, BuildsPlantedPartition) {
  TemporalKG kg = GenerateSyntheticKg(1000, 10000, 16, 10, 42);
  EXPECT_EQ(kg.node_count(), 1000u);
  EXPECT_EQ(kg.edge_count(), 10000u);
  EXPECT_EQ(kg.dim(), 16u);
  std::set<int> labels(kg.planted_communities().begin(),
                       kg.planted_communities().end());
  EXPECT_EQ(labels.size(), 10u);

  const auto& lab = kg.planted_communities();
  std::size_t intra = 0;
  for (const Edge& e : kg.edges()) intra += lab[e.u] == lab[e.v];
  // Intra share is 0.9 plus the chance an inter draw lands inside (~0.01).
  double frac = static_cast<double>(intra) / kg.edge_count();
  EXPECT_GT(frac, 0.85);
  // Intra density per pair vs inter density per pair.
  double intra_pairs = 10.0 * 100 * 99;
  double inter_pairs = 1000.0 * 999 - intra_pairs;
  double ratio = (intra / intra_pairs) / ((kg.edge_count() - intra) / inter_pairs);
  EXPECT_GT(ratio, 20.0);

  for (const Edge& e : kg.edges()) {
    EXPECT_EQ(e.is_public(), e.t_created < kg.launch_time());
    EXPECT_GE(e.t_created, 0.0);
  }
  EXPECT_DOUBLE_EQ(kg.launch_time(), 135.0);
  double pub_frac = static_cast<double>(kg.public_edge_count()) / kg.edge_count();
  EXPECT_NEAR(pub_frac, 0.75, 0.02);
}

TEST(GeneratorTest, EmbeddingsClusterByCommunity) {
  TemporalKG kg = GenerateSyntheticKg(400, 2000, 16, 4, 3);
  EmbeddingMatrix u = kg.embeddings();
  u.rowwise().normalize();
  const auto& lab = kg.planted_communities();
  double same = 0, diff = 0;
  int ns = 0, nd = 0;
  for (int i = 0; i < 400; i += 3) {
    for (int j = i + 1; j < 400; j += 7) {
      double c = u.row(i).dot(u.row(j));
      if (lab[i] == lab[j]) {
        same += c;
        ++ns;
      } else {
        diff += c;
        ++nd;
      }
    }
  }
  EXPECT_GT(same / ns, diff / nd + 0.3);
}

TEST(GeneratorTest, SameSeedIsBitIdentical) {
  TemporalKG a = GenerateSyntheticKg(300, 1500, 8, 5, 11);
  TemporalKG b = GenerateSyntheticKg(300, 1500, 8, 5, 11);
  ASSERT_EQ(a.edge_count(), b.edge_count());
  for (EdgeId i = 0; i < a.edge_count(); ++i) {
    const Edge& x = a.edges()[i];
    const Edge& y = b.edges()[i];
    EXPECT_TRUE(x.u == y.u && x.v == y.v && x.relation == y.relation &&
                x.t_created == y.t_created && x.owner == y.owner);
  }
  EXPECT_TRUE(a.embeddings() == b.embeddings());
  TemporalKG c = GenerateSyntheticKg(300, 1500, 8, 5, 12);
  EXPECT_FALSE(a.embeddings() == c.embeddings());
}

TEST(GeneratorTest, SingleCommunity) {
  TemporalKG kg = GenerateSyntheticKg(100, 400, 4, 1, 5);
  for (int l : kg.planted_communities()) EXPECT_EQ(l, 0);
}

TEST(GeneratorTest, RejectsBadSizes) {
  EXPECT_THROW(GenerateSyntheticKg(5, 100, 4, 10, 1), ParameterError);
  EXPECT_THROW(GenerateSyntheticKg(100, 50, 4, 10, 1), ParameterError);
  EXPECT_THROW(GenerateSyntheticKg(100, 500, 4, 0, 1), ParameterError);
  EXPECT_THROW(GenerateSyntheticKg(100, 500, 1, 2, 1), ParameterError);
}

TEST(ChangeProcessTest, PoissonLongRunRate) {
  std::vector<uint32_t> unit = {0};
  ChangeLog log = SimulateUnitChanges(unit, ChangeProcess::Poisson(0.05), 0,
                                      1e6, 9);
  double rate = static_cast<double>(log.size()) / 1e6;
  EXPECT_NEAR(rate, 0.05, 0.01 * 0.05);
}

TEST(ChangeProcessTest, PoissonInterArrivalsAreExponential) {
  std::vector<uint32_t> unit = {4};
  const double lambda = 0.2;
  ChangeLog log = SimulateUnitChanges(unit, ChangeProcess::Poisson(lambda), 0,
                                      5.2e4, 17);
  ASSERT_GE(log.size(), 10001u);
  std::vector<double> gaps;
  for (std::size_t i = 1; i <= 10000; ++i) {
    gaps.push_back(log[i].time - log[i - 1].time);
  }
  double mean = 0;
  for (double g : gaps) mean += g;
  mean /= gaps.size();
  double se = (1.0 / lambda) / std::sqrt(10000.0);
  EXPECT_LT(std::abs(mean - 1.0 / lambda), 3 * se);
  // Exponential: P(gap > mean) = e^-1.
  double tail = 0;
  for (double g : gaps) tail += g > 1.0 / lambda;
  EXPECT_NEAR(tail / gaps.size(), std::exp(-1.0), 0.015);
}

TEST(ChangeProcessTest, HawkesStationaryMeanRate) {
  std::vector<uint32_t> unit = {0};
  ChangeProcess p = ChangeProcess::Hawkes(8.2, 5.6, 8.0);
  EXPECT_NEAR(p.BranchingRatio(), 0.7, 1e-12);
  const double expected = 8.2 / (1 - 0.7);
  EXPECT_NEAR(expected, 27.33, 0.01);
  const double horizon = 2e4;
  ChangeLog log = SimulateUnitChanges(unit, p, 0, horizon, 21);
  EXPECT_NEAR(log.size() / horizon, expected, 0.05 * expected);
}

TEST(ChangeProcessTest, HawkesUnstableIsRejected) {
  std::vector<uint32_t> unit = {0};
  EXPECT_THROW(SimulateUnitChanges(unit, ChangeProcess::Hawkes(1, 8, 8), 0, 1,
                                   1),
               StabilityError);
}

TEST(ChangeProcessTest, VanishingRateGivesEmptyLog) {
  std::vector<uint32_t> unit = {0};
  EXPECT_TRUE(
      SimulateUnitChanges(unit, ChangeProcess::Poisson(1e-9), 0, 1, 5).empty());
  EXPECT_THROW(SimulateUnitChanges(unit, ChangeProcess::Poisson(0), 0, 1, 5),
               ParameterError);
  EXPECT_THROW(SimulateUnitChanges(unit, ChangeProcess::Poisson(1), 0, 0, 5),
               ParameterError);
}

TEST(ChangeProcessTest, SinusoidalModulation) {
  std::vector<uint32_t> unit = {0};
  ChangeLog log = SimulateUnitChanges(unit, ChangeProcess::Sinusoidal(10, 1.0),
                                      0, 2000, 3);
  // Integral of the rate over whole periods is rate * T.
  EXPECT_NEAR(log.size() / 2000.0, 10.0, 0.2);
  // First half-period integrates to rate*(0.5 + 0.5/pi), second to
  // rate*(0.5 - 0.5/pi).
  double first = 0, second = 0;
  for (const auto& e : log) {
    (std::fmod(e.time, 1.0) < 0.5 ? first : second) += 1;
  }
  const double pi = 3.141592653589793;
  EXPECT_NEAR(first / second, (0.5 + 0.5 / pi) / (0.5 - 0.5 / pi), 0.05);
}

TEST(ChangeProcessTest, BlockHomogeneousRates) {
  std::vector<uint32_t> unit = {0};
  ChangeLog log = SimulateUnitChanges(
      unit, ChangeProcess::Blocks({1.0, 4.0}, 10.0), 0, 4000, 8);
  double low = 0, high = 0;
  for (const auto& e : log) {
    (static_cast<int>(e.time / 10.0) % 2 == 0 ? low : high) += 1;
  }
  EXPECT_NEAR(low / 2000.0, 1.0, 0.07);
  EXPECT_NEAR(high / 2000.0, 4.0, 0.15);
}

TEST(ChangeProcessTest, UnitStreamsIndependentOfSelection) {
  std::vector<uint32_t> both = {3, 9};
  std::vector<uint32_t> only = {9};
  auto p = ChangeProcess::Poisson(0.5);
  ChangeLog a = SimulateUnitChanges(both, p, 0, 100, 77);
  ChangeLog b = SimulateUnitChanges(only, p, 0, 100, 77);
  ChangeLog a9;
  for (const auto& e : a) {
    if (e.unit == 9) a9.push_back(e);
  }
  EXPECT_EQ(a9, b);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](auto& x, auto& y) {
    return x.time < y.time;
  }));
}

TEST(ChangeProcessTest, WholeKgLogCoversEdges) {
  TemporalKG kg = GenerateSyntheticKg(50, 200, 4, 2, 1);
  ChangeLog log = SimulateChanges(kg, ChangeProcess::Poisson(0.1), 100, 2);
  for (const auto& e : log) {
    EXPECT_LT(e.unit, kg.edge_count());
    EXPECT_LT(e.time, 100.0);
  }
  EXPECT_NEAR(log.size() / (200 * 100.0), 0.1, 0.01);
}

class PartitionTest : public ::testing::Test {
 protected:
  TemporalKG kg_ = GenerateSyntheticKg(500, 4000, 8, 5, 99);
};

TEST_F(PartitionTest, BalancedWithinOne) {
  SellerPartition p = PartitionSellers(kg_, 10, 0.1, 1);
  const double each = kg_.PrivateEdgeIds().size() / 10.0;
  for (const auto& d : p.datasets) EXPECT_LE(std::abs(d.size() - each), 1.0);
  std::set<EdgeId> all;
  for (const auto& d : p.datasets) all.insert(d.begin(), d.end());
  EXPECT_EQ(all.size(), p.TotalClaims());  // disjoint
  auto priv = kg_.PrivateEdgeIds();
  EXPECT_EQ(std::vector<EdgeId>(all.begin(), all.end()), priv);
}

TEST_F(PartitionTest, EightyTwentySkew) {
  SellerPartition p = PartitionSellers(kg_, 10, 0.8, 1);
  const double priv = kg_.PrivateEdgeIds().size();
  EXPECT_LE(std::abs(p.datasets[0].size() - 0.8 * priv), 1.0);
  for (int s = 2; s < 10; ++s) {
    EXPECT_LE(std::abs(static_cast<double>(p.datasets[s].size()) -
                       static_cast<double>(p.datasets[1].size())),
              1.0);
  }
}

TEST_F(PartitionTest, TwoSellerBisection) {
  SellerPartition p = PartitionSellers(kg_, 2, 0.5, 4);
  const auto priv = kg_.PrivateEdgeIds().size();
  EXPECT_EQ(p.datasets[0].size() + p.datasets[1].size(), priv);
  EXPECT_LE(std::abs(static_cast<long>(p.datasets[0].size()) -
                     static_cast<long>(p.datasets[1].size())),
            1);
}

TEST_F(PartitionTest, RejectsBadArguments) {
  EXPECT_THROW(PartitionSellers(kg_, 10, 0.05, 1), ParameterError);
  EXPECT_THROW(PartitionSellers(kg_, 10, 1.2, 1), ParameterError);
  EXPECT_THROW(PartitionSellers(kg_, 1, 1.0, 1), ParameterError);
}

TEST_F(PartitionTest, ApplyPartitionSetsOwners) {
  SellerPartition p = PartitionSellers(kg_, 4, 0.25, 2);
  ApplyPartition(p, kg_);
  for (int s = 0; s < 4; ++s) {
    for (EdgeId e : p.datasets[s]) EXPECT_EQ(kg_.edge(e).owner, s);
  }
}

TEST(RegistryTest, OverlapFactor) {
  OwnershipRegistry empty;
  EXPECT_DOUBLE_EQ(empty.OverlapFactor(), 1.0);
  OwnershipRegistry reg;
  reg.Claim({1, 2, 0}, 0);
  reg.Claim({1, 2, 0}, 4);
  reg.Claim({1, 2, 0}, 7);
  reg.Claim({2, 3, 0}, 1);
  EXPECT_DOUBLE_EQ(reg.OverlapFactor(), 3.0);
  reg.Deduplicate();
  EXPECT_DOUBLE_EQ(reg.OverlapFactor(), 1.0);
  EXPECT_EQ(reg.Owner({1, 2, 0}), 0);
}

TEST(RegistryTest, InjectedDoubleClaimsScaleRhoByEtaSquared) {
  TemporalKG kg = GenerateSyntheticKg(300, 3000, 4, 3, 5);
  SellerPartition p = PartitionSellers(kg, 10, 0.1, 6, 0.2);
  auto keys = kg.Keys();
  OwnershipRegistry reg = OwnershipRegistry::FromPartition(p, keys);
  const double eta = reg.OverlapFactor();
  EXPECT_DOUBLE_EQ(eta, 2.0);
  // Share of doubly claimed edges.
  const double priv = kg.PrivateEdgeIds().size();
  EXPECT_NEAR((p.TotalClaims() - priv) / priv, 0.2, 0.03);
  // rho = Delta^2 / (2 sigma^2) with Delta = eta * sqrt(kappa).
  const double kappa = 327, sigma = 50;
  const double rho_base = kappa / (2 * sigma * sigma);
  const double rho_eta = std::pow(eta * std::sqrt(kappa), 2) / (2 * sigma * sigma);
  EXPECT_NEAR(rho_eta / rho_base, eta * eta, 0.02 * eta * eta);

  SellerPartition dedup = DeduplicatePartition(p, keys);
  EXPECT_EQ(dedup.TotalClaims(), static_cast<std::size_t>(priv));
  EXPECT_DOUBLE_EQ(OwnershipRegistry::FromPartition(dedup, keys).OverlapFactor(),
                   1.0);
}

TEST(ClippingTest, EdgeCapValues) {
  EXPECT_EQ(EdgeCap(1980000, 10), 297000);
  EXPECT_NEAR(std::sqrt(297000.0), 544.98, 0.005);
  EXPECT_EQ(EdgeCap(2180, 10), 327);
  EXPECT_NEAR(std::sqrt(327.0), 18.08, 0.005);
  EXPECT_EQ(EdgeCap(7, 2), 6);  // ceil(5.25)
}

class ClipFixture : public ::testing::Test {
 protected:
  void SetUp() override {
    kg_ = std::make_unique<TemporalKG>(GenerateSyntheticKg(50, 600, 4, 2, 8));
    keys_ = kg_->Keys();
    part_ = PartitionSellers(*kg_, 5, 0.6, 3);
  }
  std::unique_ptr<TemporalKG> kg_;
  std::vector<EdgeKey> keys_;
  SellerPartition part_;
};

TEST_F(ClipFixture, Stage1CapsAndKeepsSmallSellers) {
  const std::size_t total = 100;  // cap = 30
  SellerPartition c = ClipStage1(part_, keys_, total);
  for (int s = 0; s < part_.n; ++s) {
    EXPECT_LE(c.datasets[s].size(), 30u);
    if (part_.datasets[s].size() <= 30) {
      EXPECT_EQ(c.datasets[s], part_.datasets[s]);
    }
  }
  // Retained edges are exactly the 30 smallest hashes of the dominant seller.
  std::vector<uint64_t> hashes;
  for (EdgeId e : part_.datasets[0]) hashes.push_back(PublicHash(keys_[e]));
  std::sort(hashes.begin(), hashes.end());
  for (EdgeId e : c.datasets[0]) EXPECT_LE(PublicHash(keys_[e]), hashes[29]);
  EXPECT_EQ(ClipStage1(part_, keys_, total).datasets, c.datasets);
}

TEST_F(ClipFixture, Stage2RestrictsToActiveScope) {
  std::vector<bool> active(50, false);
  for (int i = 0; i < 30; ++i) active[i] = true;
  Stage2Result r = ClipStage2(part_, keys_, active, 40, 5, 1000);
  EXPECT_EQ(r.kappa_active, 12);
  for (const auto& d : r.partition.datasets) {
    EXPECT_LE(d.size(), 12u);
    for (EdgeId e : d) {
      EXPECT_TRUE(active[keys_[e].u] && active[keys_[e].v]);
    }
  }
  // kappa bounded by c_max.
  EXPECT_EQ(ClipStage2(part_, keys_, active, 40, 5, 7).kappa_active, 7);
  // Empty scope: nothing survives but kappa is still reported.
  std::vector<bool> none(50, false);
  Stage2Result e = ClipStage2(part_, keys_, none, 40, 5, 1000);
  EXPECT_EQ(e.partition.TotalClaims(), 0u);
  EXPECT_EQ(e.kappa_active, 12);
}

TEST_F(ClipFixture, LargeKappaDropsNothingInScope) {
  std::vector<bool> all(50, true);
  Stage2Result r = ClipStage2(part_, keys_, all, 100000, 5, 100000);
  EXPECT_EQ(r.partition.datasets, part_.datasets);
}

TEST_F(ClipFixture, ClippingIsIdempotentAndPerSeller) {
  std::vector<bool> active(50, false);
  for (int i = 0; i < 40; ++i) active[i] = true;
  auto clip = [&](const SellerPartition& p) {
    return ClipStage2(ClipStage1(p, keys_, 120), keys_, active, 60, 5,
                      EdgeCap(120, 5))
        .partition;
  };
  SellerPartition once = clip(part_);
  EXPECT_EQ(clip(once).datasets, once.datasets);
  for (int s = 0; s < part_.n; ++s) {
    SellerPartition without = clip(part_.Without(s));
    for (int o = 0; o < part_.n; ++o) {
      if (o == s) {
        EXPECT_TRUE(without.datasets[o].empty());
      } else {
        EXPECT_EQ(without.datasets[o], once.datasets[o]);
      }
    }
  }
}

TEST_F(ClipFixture, AdjacentPartitionsDifferInAtMostKappaEntries) {
  std::vector<bool> active(50, true);
  const int64_t c_max = EdgeCap(120, 5);
  auto matrix = [&](const SellerPartition& p, int64_t* kappa) {
    Stage2Result r =
        ClipStage2(ClipStage1(p, keys_, 120), keys_, active, 60, 5, c_max);
    *kappa = r.kappa_active;
    std::map<std::pair<NodeId, NodeId>, int> m;
    for (const auto& d : r.partition.datasets) {
      for (EdgeId e : d) m[{keys_[e].u, keys_[e].v}] += 1;
    }
    return m;
  };
  int64_t kappa = 0;
  auto full = matrix(part_, &kappa);
  for (int s = 0; s < part_.n; ++s) {
    int64_t k2 = 0;
    auto less = matrix(part_.Without(s), &k2);
    int diff = 0;
    for (NodeId u = 0; u < 50; ++u) {
      for (NodeId v = 0; v < 50; ++v) {
        int a = full.count({u, v}) ? full[{u, v}] : 0;
        int b = less.count({u, v}) ? less[{u, v}] : 0;
        diff += a != b;
      }
    }
    EXPECT_LE(diff, kappa);
  }
}

TEST(KgIoTest, RoundTrip) {
  TemporalKG kg = GenerateSyntheticKg(60, 300, 4, 3, 2);
  auto dir = std::filesystem::temp_directory_path();
  std::string e = (dir / "kg_io_edges.tsv").string();
  std::string x = (dir / "kg_io_emb.tsv").string();
  WriteKg(kg, e, x);
  TemporalKG back = ReadKg(e, x);
  ASSERT_EQ(back.edge_count(), kg.edge_count());
  for (EdgeId i = 0; i < kg.edge_count(); ++i) {
    EXPECT_EQ(back.edges()[i].t_created, kg.edges()[i].t_created);
    EXPECT_EQ(back.edges()[i].owner, kg.edges()[i].owner);
  }
  EXPECT_TRUE(back.embeddings().isApprox(kg.embeddings(), 1e-15));

  ChangeLog log = {{1, 0.5}, {3, 2.25}};
  std::string c = (dir / "kg_io_changes.csv").string();
  WriteChangeLog(log, c);
  EXPECT_EQ(ReadChangeLog(c), log);
  EXPECT_THROW(ReadKg((dir / "does_not_exist").string(), x), IoError);
}

}  // namespace
}  // namespace chronos::kg
