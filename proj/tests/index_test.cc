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
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chronos/common/error.h"
#include "chronos/decay/samples.h"
#include "chronos/index/affinity.h"
#include "chronos/index/hybrid_index.h"
#include "chronos/index/louvain.h"
#include "chronos/index/recall.h"
#include "chronos/index/staleness.h"
#include "chronos/kg/change_process.h"
#include "chronos/kg/generator.h"
#include "gtest/gtest.h"

namespace chronos::index {
namespace {

double PlantedDecay(double dt) { return decay::SurvivalCurve{}(dt); }

kg::TemporalKG MakeKg(std::size_t nodes, uint64_t seed) {
  kg::SyntheticKgConfig c;
  c.n_nodes = nodes;
  c.n_edges = nodes * 10;
  c.seed = seed;
  c.n_communities = std::min<std::size_t>(10, nodes / 5);
  return kg::GenerateSyntheticKg(c);
}

struct Built {
  kg::TemporalKG kg;
  std::shared_ptr<const PublicView> view;
  HybridIndex index;
};

Built BuildFor(std::size_t nodes, uint64_t seed, IndexParams params = {}) {
  Built b{MakeKg(nodes, seed), nullptr, {}};
  const kg::TemporalKG pub = b.kg.PublicSubgraph();
  b.view = PublicView::FromKg(pub, seed);
  b.index = HybridIndex::Build(b.view, PlantedDecay, pub.launch_time(), params);
  return b;
}

const Built& Shared1000() {
  static const Built b = BuildFor(1000, 5);
  return b;
}

// Brute-force cosine top-k written independently of ExactTopK.
std::vector<uint32_t> NaiveTopK(const kg::EmbeddingMatrix& e,
                                const Eigen::VectorXd& q, int k) {
  std::vector<std::pair<double, uint32_t>> all;
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    double dot = 0, nn = 0, qq = 0;
    for (Eigen::Index d = 0; d < e.cols(); ++d) {
      dot += e(i, d) * q[d];
      nn += e(i, d) * e(i, d);
      qq += q[d] * q[d];
    }
    all.push_back({-dot / std::sqrt(nn * qq), static_cast<uint32_t>(i)});
  }
  std::sort(all.begin(), all.end());
  std::vector<uint32_t> out;
  for (int i = 0; i < k; ++i) out.push_back(all[i].second);
  return out;
}

WeightedGraph Clique(int first, int size, WeightedGraph g) {
  for (int a = first; a < first + size; ++a) {
    for (int b = first; b < first + size; ++b) {
      if (a != b) g.adj[a].push_back({static_cast<uint32_t>(b), 1.0});
    }
  }
  return g;
}

void Connect(WeightedGraph& g, uint32_t a, uint32_t b) {
  g.adj[a].push_back({b, 1.0});
  g.adj[b].push_back({a, 1.0});
}

// ---------------------------------------------------------------- Louvain

TEST(LouvainTest, TwoDisconnectedCliquesGiveTwoCommunities) {
  WeightedGraph g;
  g.adj.resize(10);
  g = Clique(0, 5, Clique(5, 5, g));
  const auto p = Louvain(g, 1);
  EXPECT_EQ(p.count, 2);
  for (int v = 1; v < 5; ++v) EXPECT_TRUE(p.Same(0, v));
  EXPECT_FALSE(p.Same(0, 5));
}

TEST(LouvainTest, SingleNodeIsOneCommunityWithZeroModularity) {
  WeightedGraph g;
  g.adj.resize(1);
  const auto p = Louvain(g, 1);
  EXPECT_EQ(p.count, 1);
  EXPECT_DOUBLE_EQ(p.modularity, 0.0);
}

TEST(LouvainTest, EmptyGraphIsRejected) {
  EXPECT_THROW(Louvain(WeightedGraph{}, 1), ParameterError);
}

TEST(LouvainTest, TwoTrianglesBridgeHasKnownModularity) {
  // m = 7, each side has 3 internal edges and degree sum 7:
  // Q = 2 * (3/7 - (7/14)^2) = 5/14.
  WeightedGraph g;
  g.adj.resize(6);
  for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}) {
    Connect(g, a, b);
  }
  const auto p = Louvain(g, 3);
  EXPECT_EQ(p.count, 2);
  EXPECT_NEAR(p.modularity, 5.0 / 14.0, 1e-12);
  EXPECT_NEAR(Modularity(g, {0, 0, 0, 1, 1, 1}), 5.0 / 14.0, 1e-12);
}

TEST(LouvainTest, RecoversPlantedPartition) {
  const auto& b = Shared1000();
  const double ari =
      AdjustedRandIndex(b.view->partition.community, b.kg.planted_communities());
  EXPECT_GE(ari, 0.9);
}

TEST(LouvainTest, DeterministicForSeed) {
  const kg::TemporalKG pub = MakeKg(300, 9).PublicSubgraph();
  const auto g = WeightedGraph::FromNeighbourLists(kg::PublicNeighbours(pub));
  EXPECT_EQ(Louvain(g, 4).community, Louvain(g, 4).community);
}

TEST(LouvainTest, ModularityStaysInRange) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    WeightedGraph g;
    g.adj.resize(30);
    std::bernoulli_distribution edge(0.1);
    for (uint32_t a = 0; a < 30; ++a) {
      for (uint32_t b = a + 1; b < 30; ++b) {
        if (edge(rng)) Connect(g, a, b);
      }
    }
    std::vector<int> labels(30);
    std::uniform_int_distribution<int> lab(0, 3);
    for (int& l : labels) l = lab(rng);
    const double q = Modularity(g, labels);
    EXPECT_GE(q, -0.5);
    EXPECT_LE(q, 1.0);
    const auto p = Louvain(g, trial);
    EXPECT_GE(p.modularity, -0.5);
    EXPECT_LE(p.modularity, 1.0);
    EXPECT_GE(p.modularity, Modularity(g, std::vector<int>(30, 0)) - 1e-12);
  }
}

TEST(AdjustedRandTest, HandComputedValues) {
  EXPECT_DOUBLE_EQ(AdjustedRandIndex({0, 0, 1, 1}, {0, 0, 1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(AdjustedRandIndex({0, 0, 1, 1}, {7, 7, 3, 3}), 1.0);
  // All pair counts in the contingency table are 0; expected index is 2/3.
  EXPECT_NEAR(AdjustedRandIndex({0, 0, 1, 1}, {0, 1, 0, 1}), -0.5, 1e-12);
}

// -------------------------------------------------------- Static affinity

PublicView TinyView() {
  PublicView v;
  v.neighbours = {{2, 3}, {2, 3}, {0, 1}, {0, 1}, {5}, {4}};
  v.partition.community = {0, 0, 0, 1, 1, 1};
  v.partition.count = 2;
  return v;
}

TEST(StaticAffinityTest, DocumentedCases) {
  const PublicView v = TinyView();
  EXPECT_DOUBLE_EQ(StaticAffinity(v, 0, 1, 0.5), 1.0);  // same, identical
  EXPECT_DOUBLE_EQ(StaticAffinity(v, 0, 4, 0.5), 0.0);  // different, disjoint
  EXPECT_DOUBLE_EQ(StaticAffinity(v, 0, 2, 0.5), 0.5);  // same, disjoint
}

TEST(StaticAffinityTest, SymmetricAndBounded) {
  const auto& b = Shared1000();
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<uint32_t> pick(0, 999);
  for (int i = 0; i < 500; ++i) {
    const uint32_t u = pick(rng), v = pick(rng);
    const double a = StaticAffinity(*b.view, u, v, 0.5);
    EXPECT_DOUBLE_EQ(a, StaticAffinity(*b.view, v, u, 0.5));
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

// ------------------------------------------------------------------ Build

TEST(BuildTest, PrivateEdgesAreAContractViolation) {
  const kg::TemporalKG full = MakeKg(200, 3);
  ASSERT_FALSE(full.IsPublicOnly());
  EXPECT_THROW(PublicView::FromKg(full, 1), ContractViolation);
}

TEST(BuildTest, SameSeedGivesIdenticalAdjacency) {
  const Built a = BuildFor(400, 8);
  const Built b = BuildFor(400, 8);
  ASSERT_EQ(a.index.top_level(), b.index.top_level());
  for (int l = 0; l <= a.index.top_level(); ++l) {
    for (uint32_t v = 0; v < 400; ++v) {
      EXPECT_EQ(a.index.links(l, v), b.index.links(l, v));
    }
  }
  for (uint32_t v = 0; v < 400; ++v) {
    EXPECT_EQ(a.index.NeighbourOrder(v), b.index.NeighbourOrder(v));
  }
}

void ExpectStructure(const HybridIndex& index) {
  const int ef = index.params().ef;
  for (uint32_t v = 0; v < index.node_count(); ++v) {
    EXPECT_LE(static_cast<int>(index.NeighbourOrder(v).size()), ef);
    for (int l = 0; l <= index.top_level(); ++l) {
      const auto& list = index.links(l, v);
      if (index.level_of(v) < l) {
        EXPECT_TRUE(list.empty());
        continue;
      }
      EXPECT_LE(static_cast<int>(list.size()), index.capacity(l));
      std::set<uint32_t> uniq(list.begin(), list.end());
      EXPECT_EQ(uniq.size(), list.size());
      for (uint32_t u : list) {
        EXPECT_NE(u, v);
        EXPECT_GE(index.level_of(u), l);  // layers nest
      }
    }
  }
}

TEST(BuildTest, DegreeCapsNestingAndCandidateLength) {
  ExpectStructure(Shared1000().index);
  EXPECT_EQ(Shared1000().index.capacity(0), 32);
  EXPECT_EQ(Shared1000().index.capacity(1), 16);
}

TEST(BuildTest, HubsSitHigherOnAverage) {
  const auto& b = Shared1000();
  std::vector<double> deg;
  for (const auto& n : b.view->neighbours) deg.push_back(static_cast<double>(n.size()));
  std::vector<double> sorted = deg;
  std::sort(sorted.begin(), sorted.end());
  const double cut = sorted[static_cast<std::size_t>(0.9 * (sorted.size() - 1))];
  double hub = 0, rest = 0;
  int nh = 0, nr = 0;
  for (uint32_t v = 0; v < 1000; ++v) {
    if (deg[v] > cut) {
      hub += b.index.level_of(v), ++nh;
    } else {
      rest += b.index.level_of(v), ++nr;
    }
  }
  ASSERT_GT(nh, 0);
  EXPECT_GT(hub / nh, rest / nr + 0.5);
}

TEST(BuildTest, SmallKgIsNearExhaustive) {
  const Built b = BuildFor(100, 2);
  const auto queries = SampleQueries(*b.view, 200, 0.3, 6);
  Oracle oracle;
  for (const auto& q : queries) oracle.push_back(NaiveTopK(b.view->unit_embeddings, q.vector, 10));
  EXPECT_GE(MeasureRecall(b.index, queries, oracle, 10).mean, 0.95);
}

TEST(BuildTest, BetaZeroMatchesWeightedRecallOnStaticSnapshot) {
  IndexParams plain;
  plain.beta = 0;
  const Built a = BuildFor(1000, 5, plain);
  const auto& b = Shared1000();
  const auto queries = SampleQueries(*b.view, 300, 0.3, 7);
  const Oracle oracle = BuildOracle(*b.view, queries, 10);
  const double ra = MeasureRecall(a.index, queries, oracle, 10).mean;
  const double rb = MeasureRecall(b.index, queries, oracle, 10).mean;
  EXPECT_NEAR(ra, rb, 0.02);
}

TEST(BuildTest, SimilarityRuleRespectsCaps) {
  IndexParams p;
  p.diversity = DiversityRule::kSimilarity;
  const Built b = BuildFor(300, 4, p);
  ExpectStructure(b.index);
}

TEST(BuildTest, RejectsBadParams) {
  IndexParams p;
  p.m = 1;
  EXPECT_THROW(p.Validate(), ParameterError);
  p = {};
  p.beta = 1.5;
  EXPECT_THROW(p.Validate(), ParameterError);
}

TEST(PairWeightsTest, MaxOverEdgesWithDecayAndAffinity) {
  PublicView v = TinyView();
  v.edges = {{0, 0, 2, 10.0}, {1, 2, 0, 20.0}, {2, 4, 5, 5.0}};
  auto linear = [](double dt) { return std::max(0.0, 1.0 - dt / 100.0); };
  const PairWeights w(v, linear, 30.0, 0.5);
  // Pair (0, 2): same community, disjoint neighbourhoods -> 0.5; best decay
  // comes from the newer edge at age 10.
  EXPECT_DOUBLE_EQ(w(0, 2), 0.9 * 0.5);
  EXPECT_DOUBLE_EQ(w(2, 0), w(0, 2));
  EXPECT_DOUBLE_EQ(w(4, 5), 0.75 * StaticAffinity(v, 4, 5, 0.5));
  EXPECT_DOUBLE_EQ(w(0, 1), 0.0);
}

// ----------------------------------------------------------------- Search

TEST(SearchTest, SelfRetrievalAtBetaZero) {
  const auto& b = Shared1000();
  SearchOptions opt;
  for (uint32_t x : {0u, 17u, 512u, 999u}) {
    const Eigen::VectorXd q = b.view->unit_embeddings.row(x).transpose();
    EXPECT_EQ(b.index.Search(q, opt).front().node, x);
  }
}

TEST(SearchTest, KAboveEfIsRejected) {
  const auto& b = Shared1000();
  SearchOptions opt;
  opt.k = 129;
  EXPECT_THROW(b.index.Search(b.view->unit_embeddings.row(0).transpose(), opt),
               ParameterError);
}

TEST(SearchTest, ZeroAffinityMatchesAbsentAffinity) {
  const auto& b = Shared1000();
  const std::vector<double> zeros(b.index.params().ef, 0.0);
  for (uint32_t anchor : {3u, 44u, 700u}) {
    const Eigen::VectorXd q = b.view->unit_embeddings.row(anchor).transpose();
    SearchOptions plain;
    plain.k = 20;
    SearchOptions with = plain;
    with.beta = 0.3;
    with.anchor = static_cast<int>(anchor);
    with.affinity_row = zeros.data();
    const auto r1 = b.index.Search(q, plain);
    const auto r2 = b.index.Search(q, with);
    ASSERT_EQ(r1.size(), r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) EXPECT_EQ(r1[i].node, r2[i].node);
  }
}

TEST(SearchTest, BoostedCandidateDoesNotDropInRank) {
  IndexParams p;
  p.ef = 50;
  const Built b = BuildFor(50, 12, p);
  int improved = 0;
  for (uint32_t anchor = 0; anchor < 50; ++anchor) {
    const auto& order = b.index.NeighbourOrder(anchor);
    if (order.size() < 4) continue;
    const uint32_t boosted = order[3];
    std::vector<double> row(p.ef, 0.0);
    row[3] = 1.0;
    const Eigen::VectorXd q = b.view->unit_embeddings.row(anchor).transpose();
    SearchOptions opt;
    opt.k = 50;
    auto rank_of = [&](const std::vector<SearchResult>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].node == boosted) return static_cast<int>(i);
      }
      return 1 << 20;
    };
    const int before = rank_of(b.index.Search(q, opt));
    opt.beta = 0.3;
    opt.anchor = static_cast<int>(anchor);
    opt.affinity_row = row.data();
    const int after = rank_of(b.index.Search(q, opt));
    EXPECT_LE(after, before);
    if (after < before) ++improved;
  }
  EXPECT_GT(improved, 0);
}

TEST(SearchTest, BetaZeroReproducesCosineOrderExactly) {
  IndexParams p;
  p.ef = 60;
  const Built b = BuildFor(60, 21, p);
  const auto queries = SampleQueries(*b.view, 30, 0.3, 2);
  for (const auto& q : queries) {
    SearchOptions opt;
    opt.k = 60;
    const auto got = b.index.Search(q.vector, opt);
    const auto want = NaiveTopK(b.view->unit_embeddings, q.vector, 60);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_EQ(got[i].node, want[i]);
  }
}

TEST(SearchTest, ReadsNoPrivateStateAfterRelease) {
  const auto& b = Shared1000();
  std::vector<uint32_t> active(1000);
  std::iota(active.begin(), active.end(), 0u);
  const auto layout = AffinityLayout::Make(b.index, active);
  const uint64_t before_compute = kg::PrivateAccessCount();
  const Eigen::MatrixXd a = ComputeAffinity(b.kg, b.kg.PrivateEdgeIds(), b.index,
                                            layout, PlantedDecay, 200.0);
  // The curator step is audited, which shows the counter can see reads.
  EXPECT_GT(kg::PrivateAccessCount(), before_compute);

  const uint64_t before_search = kg::PrivateAccessCount();
  for (uint32_t anchor : {1u, 250u, 900u}) {
    const auto row = AffinityRow(a, layout, static_cast<int>(anchor));
    SearchOptions opt;
    opt.beta = 0.3;
    opt.anchor = static_cast<int>(anchor);
    opt.affinity_row = row.data();
    b.index.Search(b.view->unit_embeddings.row(anchor).transpose(), opt);
  }
  EXPECT_EQ(kg::PrivateAccessCount(), before_search);
}

// --------------------------------------------------------------- Affinity

TEST(AffinityTest, ShapeRangeAndPerSellerSensitivity) {
  const auto& b = Shared1000();
  std::vector<uint32_t> active;
  for (uint32_t v = 0; v < 1000; v += 2) active.push_back(v);
  const auto layout = AffinityLayout::Make(b.index, active);
  const auto priv = b.kg.PrivateEdgeIds();
  const Eigen::MatrixXd full =
      ComputeAffinity(b.kg, priv, b.index, layout, PlantedDecay, 200.0);
  EXPECT_EQ(full.rows(), 500);
  EXPECT_EQ(full.cols(), b.index.params().ef);
  EXPECT_GE(full.minCoeff(), 0.0);
  EXPECT_LE(full.maxCoeff(), 1.0);
  EXPECT_GT(full.maxCoeff(), 0.0);

  std::set<kg::SellerId> sellers;
  for (auto id : priv) sellers.insert(b.kg.edge(id).owner);
  for (kg::SellerId s : sellers) {
    std::vector<kg::EdgeId> rest;
    std::size_t own = 0;
    for (auto id : priv) {
      if (b.kg.edge(id).owner == s) {
        ++own;
      } else {
        rest.push_back(id);
      }
    }
    const Eigen::MatrixXd without =
        ComputeAffinity(b.kg, rest, b.index, layout, PlantedDecay, 200.0);
    EXPECT_LE((full - without).norm(), std::sqrt(static_cast<double>(own)) + 1e-12);
  }
}

TEST(AffinityTest, InactiveAnchorDisablesRescoring) {
  const auto& b = Shared1000();
  const std::vector<uint32_t> active{5, 6};
  const auto layout = AffinityLayout::Make(b.index, active);
  const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, b.index.params().ef);
  EXPECT_TRUE(AffinityRow(a, layout, 7).empty());
  EXPECT_EQ(AffinityRow(a, layout, 6).size(), 128u);
}

// -------------------------------------------------------------- Staleness

std::vector<uint32_t> LiveSlots(const HybridIndex& index) {
  std::vector<uint32_t> out;
  for (ShortcutId s = 0; s < index.shortcut_slots(); ++s) {
    if (index.SlotLive(s)) out.push_back(s);
  }
  return out;
}

TEST(StalenessTest, EmptyLogLeavesNothingStale) {
  const auto& b = Shared1000();
  StalenessState st(b.index, 0.0);
  EXPECT_EQ(MarkStale(st, {}, 10.0), 0u);
  EXPECT_DOUBLE_EQ(st.StaleFraction(), 0.0);
  EXPECT_EQ(st.LiveCount(), b.index.LiveShortcutCount());
}

TEST(StalenessTest, EveryShortcutChangedGivesFullStaleness) {
  const auto& b = Shared1000();
  StalenessState st(b.index, 0.0);
  kg::ChangeLog log;
  for (uint32_t s : LiveSlots(b.index)) log.push_back({s, 1.0});
  MarkStale(st, log, 2.0);
  EXPECT_DOUBLE_EQ(st.StaleFraction(), 1.0);
}

TEST(StalenessTest, IgnoresFutureEventsAndEventsBeforeRepair) {
  const auto& b = Shared1000();
  StalenessState st(b.index, 5.0);
  const uint32_t s = LiveSlots(b.index).front();
  MarkStale(st, {{s, 4.0}}, 10.0);  // before the last repair
  EXPECT_FALSE(st.IsStale(s));
  MarkStale(st, {{s, 11.0}}, 10.0);  // after t_now
  EXPECT_FALSE(st.IsStale(s));
  MarkStale(st, {{s, 6.0}}, 10.0);
  EXPECT_TRUE(st.IsStale(s));
}

TEST(StalenessTest, PoissonStaleFractionMatchesSurvival) {
  const auto& b = Shared1000();
  const auto live = LiveSlots(b.index);
  ASSERT_GE(live.size(), 10000u);
  const double lambda = 0.05, dt = 7.0;
  StalenessState st(b.index, 0.0);
  const auto log = kg::SimulateUnitChanges(live, kg::ChangeProcess::Poisson(lambda),
                                           0.0, dt, 77);
  MarkStale(st, log, dt);
  const double p = -std::expm1(-lambda * dt);
  const double se = std::sqrt(p * (1 - p) / static_cast<double>(live.size()));
  EXPECT_NEAR(st.StaleFraction(), p, 3 * se);
}

TEST(StalenessTest, DependencyMapFollowsKgEdges) {
  const auto& b = Shared1000();
  const DependencyMap deps = BuildDependencyMap(b.index);
  ASSERT_FALSE(deps.empty());
  const auto& [edge, slots] = *deps.begin();
  StalenessState st(b.index, 0.0);
  MarkStale(st, {{edge, 1.0}}, 1.0, deps);
  EXPECT_EQ(st.StaleCount(), slots.size());
  for (ShortcutId s : slots) EXPECT_TRUE(st.IsStale(s));
}

// ------------------------------------------------------------ Maintenance

std::vector<uint32_t> AllNodes(std::size_t n) {
  std::vector<uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

void MarkRandomFraction(const HybridIndex& index, StalenessState& st,
                        double fraction, uint64_t seed) {
  auto live = LiveSlots(index);
  std::mt19937_64 rng(seed);
  std::shuffle(live.begin(), live.end(), rng);
  kg::ChangeLog log;
  const std::size_t n = static_cast<std::size_t>(fraction * live.size());
  for (std::size_t i = 0; i < n; ++i) log.push_back({live[i], 1.0});
  MarkStale(st, log, 1.0);
}

TEST(MaintainTest, NothingStaleIsANoOp) {
  Built b = BuildFor(300, 3);
  StalenessState st(b.index, 0.0);
  const auto r = Maintain(b.index, st, AllNodes(300), 1.0);
  EXPECT_EQ(r.mode, MaintenanceMode::kNone);
  EXPECT_DOUBLE_EQ(r.cost_units, 0.0);
}

TEST(MaintainTest, IncrementalRepairRestoresFreshRecall) {
  Built b = BuildFor(1000, 5);
  const auto queries = SampleQueries(*b.view, 300, 0.3, 8);
  const Oracle oracle = BuildOracle(*b.view, queries, 10);
  StalenessState st(b.index, 0.0);
  MarkRandomFraction(b.index, st, 0.2, 3);
  EXPECT_NEAR(st.StaleFraction(), 0.2, 1e-3);
  const double degraded =
      MeasureRecall(b.index, queries, oracle, 10, nullptr, &st.stale()).mean;

  const auto r = Maintain(b.index, st, AllNodes(1000), 1.0);
  EXPECT_EQ(r.mode, MaintenanceMode::kIncremental);
  EXPECT_GT(r.cost_units, 0.0);
  EXPECT_LE(r.cost_units, 1.0);
  ExpectStructure(b.index);
  EXPECT_DOUBLE_EQ(st.StaleFraction(), 0.0);

  const Built fresh = BuildFor(1000, 5);
  const double fresh_recall = MeasureRecall(fresh.index, queries, oracle, 10).mean;
  const double repaired =
      MeasureRecall(b.index, queries, oracle, 10, nullptr, &st.stale()).mean;
  EXPECT_GE(repaired, 0.95 * fresh_recall);
  EXPECT_LT(degraded, repaired);
}

TEST(MaintainTest, InactiveNodesKeepTheirStaleLinks) {
  Built b = BuildFor(300, 3);
  StalenessState st(b.index, 0.0);
  MarkRandomFraction(b.index, st, 0.1, 9);
  const double before = st.StaleFraction();
  const std::vector<uint32_t> few{0, 1, 2};
  const auto r = Maintain(b.index, st, few, 2.0);
  EXPECT_EQ(r.mode, MaintenanceMode::kIncremental);
  EXPECT_LT(st.StaleFraction(), before);
  EXPECT_GT(st.StaleFraction(), 0.0);
  EXPECT_LT(r.cost_units, 0.5);
  ExpectStructure(b.index);
}

TEST(MaintainTest, HalfStaleTriggersRebuild) {
  Built b = BuildFor(300, 3);
  StalenessState st(b.index, 0.0);
  MarkRandomFraction(b.index, st, 0.5, 4);
  const auto r = Maintain(b.index, st, AllNodes(300), 3.0);
  EXPECT_EQ(r.mode, MaintenanceMode::kFullRebuild);
  EXPECT_DOUBLE_EQ(r.cost_units, 1.0);
  EXPECT_DOUBLE_EQ(st.StaleFraction(), 0.0);
  EXPECT_DOUBLE_EQ(b.index.t_built(), 3.0);
  ExpectStructure(b.index);
}

// ---------------------------------------------------------------- Recall

TEST(RecallTest, ExactReturnsScoreOne) {
  const std::vector<uint32_t> truth{4, 9, 1};
  const std::vector<SearchResult> res{{1, 0.0}, {4, 0.0}, {9, 0.0}};
  EXPECT_DOUBLE_EQ(RecallAtK(res, truth), 1.0);
}

TEST(RecallTest, RandomReturnsScoreKOverN) {
  std::mt19937_64 rng(3);
  std::vector<uint32_t> ids(1000);
  std::iota(ids.begin(), ids.end(), 0u);
  const int trials = 20000;
  double sum = 0;
  for (int t = 0; t < trials; ++t) {
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<uint32_t> truth(ids.begin(), ids.begin() + 10);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<SearchResult> res;
    for (int i = 0; i < 10; ++i) res.push_back({ids[i], 0.0});
    sum += RecallAtK(res, truth);
  }
  // Per-trial recall is hypergeometric / 10 with variance about 9e-4.
  EXPECT_NEAR(sum / trials, 0.01, 3 * std::sqrt(9e-4 / trials));
}

TEST(RecallTest, EmptyQuerySetIsRejected) {
  EXPECT_THROW(MeasureRecall(Shared1000().index, {}, {}, 10), ParameterError);
}

TEST(RecallTest, ExactTopKMatchesNaiveOracle) {
  const auto& b = Shared1000();
  for (const auto& q : SampleQueries(*b.view, 20, 0.3, 1)) {
    EXPECT_EQ(ExactTopK(b.view->unit_embeddings, q.vector, 10),
              NaiveTopK(b.view->unit_embeddings, q.vector, 10));
  }
}

TEST(RecallTest, MisleadingLinksWithholdResults) {
  const auto& b = Shared1000();
  const auto queries = SampleQueries(*b.view, 100, 0.3, 4);
  const Oracle oracle = BuildOracle(*b.view, queries, 10);
  std::vector<uint8_t> all(b.index.shortcut_slots(), 1);
  const double r = MeasureRecall(b.index, queries, oracle, 10, nullptr, &all).mean;
  // Only the layer-0 entry can survive, so at most one hit per query.
  EXPECT_LE(r, 0.1 + 1e-12);
}

TEST(CalibrationTest, PathSizeAndImpactRanges) {
  const auto& b = Shared1000();
  const auto queries = SampleQueries(*b.view, 30, 0.3, 5);
  const Oracle oracle = BuildOracle(*b.view, queries, 10);
  for (StaleEffect e : {StaleEffect::kMisleading, StaleEffect::kBroken}) {
    const auto cal = CalibrateImpact(b.index, queries, oracle, 10, e);
    EXPECT_LE(static_cast<double>(cal.max_path),
              b.index.params().ef * b.index.params().max_levels);
    EXPECT_GT(cal.TotalPath(), 0.0);
    for (std::size_t l = 0; l < cal.delta_r.size(); ++l) {
      EXPECT_GE(cal.delta_r[l], 0.0);
      EXPECT_LE(cal.delta_r[l], cal.max_drop[l] + 1e-12);
      EXPECT_LE(cal.max_per_query[l], cal.max_drop[l] + 1e-12);
      EXPECT_LE(cal.max_drop[l], 1.0);
    }
    const double pooled = cal.PooledDeltaR() * cal.TotalPath();
    double sum = 0;
    for (std::size_t l = 0; l < cal.delta_r.size(); ++l) sum += cal.delta_r[l] * cal.path_size[l];
    EXPECT_NEAR(pooled, sum, 1e-9);
  }
}

// ---------------------------------------------------------------- Bounds

TEST(BoundsTest, ConservativeCases) {
  EXPECT_DOUBLE_EQ(RecallBoundConservative(1408, 5.1e-4, 0.05, 0.0, 0.93), 0.93);
  const double loss = 1408 * 5.1e-4 * (1 - std::exp(-0.05 * 7));
  EXPECT_NEAR(loss, 0.212, 5e-4);
  EXPECT_NEAR(0.93 - RecallBoundConservative(1408, 5.1e-4, 0.05, 7, 0.93), loss, 1e-12);
  EXPECT_NEAR(RecallBoundConservative(100, 1e-3, 1e3, 1e3, 0.9), 0.9 - 0.1, 1e-12);
  EXPECT_THROW(RecallBoundConservative(-1, 1e-3, 1, 1, 1), ParameterError);
}

TEST(BoundsTest, TightCases) {
  EXPECT_DOUBLE_EQ(RecallBoundTight(1408, 5.1e-4, 0.05, 7, 0.93, 1.0),
                   RecallBoundConservative(1408, 5.1e-4, 0.05, 7, 0.93));
  EXPECT_DOUBLE_EQ(RecallBoundTight(1408, 5.1e-4, 0.05, 7, 0.93, 0.0), 0.93);
  const double loss = 0.93 - RecallBoundTight(2240, 3.9e-4, 2.9, 7, 0.93, 0.714);
  EXPECT_NEAR(loss, 2240 * 3.9e-4 * (1 - std::exp(-2.9 * 7)) * 0.714, 1e-12);
  EXPECT_NEAR(loss, 0.623, 1e-3);
  EXPECT_THROW(RecallBoundTight(1, 1, 1, 1, 1, 1.5), ParameterError);
}

TEST(BoundsTest, OrderingProperty) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const double p = 2000 * u(rng), dr = 1e-3 * u(rng), lam = 3 * u(rng);
    const double dt = 90 * u(rng), r = u(rng), env = u(rng);
    const double c = RecallBoundConservative(p, dr, lam, dt, r);
    const double t = RecallBoundTight(p, dr, lam, dt, r, env);
    EXPECT_GE(t, c - 1e-15);
    EXPECT_LE(t, r);
    EXPECT_LE(c, r);
  }
}

TEST(BoundsTest, HawkesCases) {
  const auto base = RecallBoundHawkes(1408, 5.1e-4, 0.3, 0.0, 7, 0.9, 1.0, 0.05);
  EXPECT_NEAR(0.9 - base.mean, 1408 * 5.1e-4 * 0.3 * 7, 1e-12);
  const auto excited = RecallBoundHawkes(1408, 5.1e-4, 0.3, 0.7, 7, 0.9, 1.0, 0.05);
  EXPECT_NEAR((0.9 - excited.mean) / (0.9 - base.mean), 1.0 / 0.3, 1e-9);
  EXPECT_NEAR((0.9 - excited.mean) / (0.9 - base.mean), 3.33, 5e-3);
  EXPECT_NEAR(excited.mean - excited.high_probability,
              5.1e-4 * std::sqrt(2 * 1408 * std::log(1 / 0.05)) / 0.3, 1e-12);
  const auto sure = RecallBoundHawkes(1408, 5.1e-4, 0.3, 0.7, 7, 0.9, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(sure.mean, sure.high_probability);
  EXPECT_THROW(RecallBoundHawkes(1, 1, 1, 1.0, 1, 1, 1, 0.1), StabilityError);
  EXPECT_THROW(RecallBoundHawkes(1, 1, 1, 0.5, 1, 1, 1, 0.0), ParameterError);
}

// --------------------------------------------------------------- Snapshot

TEST(SnapshotTest, RoundTripPreservesSearch) {
  const auto& b = Shared1000();
  const auto dir = std::filesystem::temp_directory_path() / "chronos_index_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "index.txt").string();
  b.index.Save(path);
  const HybridIndex loaded = HybridIndex::Load(path, b.view, PlantedDecay);
  EXPECT_EQ(loaded.shortcut_slots(), b.index.shortcut_slots());
  EXPECT_EQ(loaded.entry(), b.index.entry());
  for (uint32_t v = 0; v < 1000; v += 37) {
    EXPECT_EQ(loaded.NeighbourOrder(v), b.index.NeighbourOrder(v));
    const Eigen::VectorXd q = b.view->unit_embeddings.row(v).transpose();
    const auto r1 = b.index.Search(q, {});
    const auto r2 = loaded.Search(q, {});
    ASSERT_EQ(r1.size(), r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) EXPECT_EQ(r1[i].node, r2[i].node);
  }
  const std::string csv = (dir / "nidx.csv").string();
  b.index.WriteNeighbourOrderCsv(csv);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "node,j,candidate");
}

TEST(SnapshotTest, CorruptHeaderIsAnIoError) {
  const auto path = std::filesystem::temp_directory_path() / "chronos_bad_index.txt";
  std::ofstream(path) << "nonsense\n";
  EXPECT_THROW(HybridIndex::Load(path.string(), Shared1000().view, PlantedDecay), IoError);
}

}  // namespace
}  // namespace chronos::index
