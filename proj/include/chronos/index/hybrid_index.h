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

#ifndef CHRONOS_INDEX_HYBRID_INDEX_H_
#define CHRONOS_INDEX_HYBRID_INDEX_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "chronos/index/louvain.h"
#include "chronos/kg/temporal_kg.h"

namespace chronos::index {

using DecayFn = std::function<double(double)>;

// Occlusion test used when picking neighbours. kDistance rejects c when a
// kept k has 1 - cos(c, k) < rho * (1 - cos(c, v)); kSimilarity rejects c
// when cos(c, k) > rho * cos(c, v).
enum class DiversityRule { kDistance, kSimilarity };

struct IndexParams {
  int m = 16;                 // per-layer degree; layer 0 allows 2m
  int ef_construction = 200;
  int ef = 128;
  int max_levels = 5;
  double level_mult = 0;      // m_L; 0 selects 1/ln(m)
  double rho_div = 0.7;
  DiversityRule diversity = DiversityRule::kDistance;
  double beta = 0.3;          // weight of the KG term in the hybrid score
  double gamma_community = 0.5;
  double hub_quantile = 0.9;  // nodes above this degree quantile get +1 level
  uint64_t seed = 42;

  void Validate() const;
};

// Public inputs the index is allowed to see. Built from a public-only KG.
struct PublicView {
  kg::EmbeddingMatrix unit_embeddings;          // rows L2-normalized
  std::vector<std::vector<uint32_t>> neighbours;  // undirected, sorted
  CommunityPartition partition;
  struct TimedPair {
    uint32_t id;  // edge id in the KG the view was built from
    uint32_t u, v;
    double t_created;
  };
  std::vector<TimedPair> edges;

  // Throws ContractViolation if `kg` holds any private edge.
  static std::shared_ptr<const PublicView> FromKg(const kg::TemporalKG& kg,
                                                  uint64_t seed);

  std::size_t size() const { return neighbours.size(); }
};

// gamma * 1[same community] + (1 - gamma) * Jaccard(N(u), N(v)).
double StaticAffinity(const PublicView& view, uint32_t u, uint32_t v,
                      double gamma);

// Per-pair KG weight decay(t_now - t_e) * static affinity, max over the
// public edges joining the pair in either direction.
class PairWeights {
 public:
  PairWeights() = default;
  PairWeights(const PublicView& view, const DecayFn& decay, double t_now,
              double gamma);
  double operator()(uint32_t u, uint32_t v) const;
  std::size_t size() const { return w_.size(); }

 private:
  std::unordered_map<uint64_t, double> w_;
};

// A directed link slot. Ids are stable positions (level, node, slot); the
// link stored there can be rewritten by maintenance.
using ShortcutId = uint32_t;

struct SearchResult {
  uint32_t node;
  double score;
};

// Path bookkeeping for the staleness model.
// On-path links of one search: the upper-layer greedy hops plus the
// layer-0 discovery chains of the final beam.
struct PathTrace {
  std::vector<ShortcutId> shortcuts;
  std::vector<int> levels;  // parallel to shortcuts
};

struct SearchOptions {
  int k = 10;            // must not exceed the effective ef
  int ef = 0;            // 0 -> params().ef
  double beta = 0;       // weight of the released affinity in rescoring
  // Released affinity row of the query anchor, aligned with
  // NeighbourOrder(anchor). Empty -> no rescoring term.
  const double* affinity_row = nullptr;
  int anchor = -1;
  // Per-shortcut masks. A broken link is never traversed. A misleading link
  // is traversed, but every node reached through it (directly or further
  // down the discovery chain, including after a misleading upper-layer hop)
  // is treated as invalid and withheld from the results.
  const std::vector<uint8_t>* broken = nullptr;
  const std::vector<uint8_t>* misleading = nullptr;
  PathTrace* trace = nullptr;
};

// Hierarchical navigable graph over public embeddings with decay-weighted
// KG-aware neighbour selection.
class HybridIndex {
 public:
  HybridIndex() = default;

  static HybridIndex Build(std::shared_ptr<const PublicView> view,
                           const DecayFn& decay, double t_now,
                           const IndexParams& params);

  std::vector<SearchResult> Search(const Eigen::VectorXd& query,
                                   const SearchOptions& options) const;

  const IndexParams& params() const { return params_; }
  std::size_t node_count() const { return level_.size(); }
  int top_level() const { return top_level_; }
  uint32_t entry() const { return entry_; }
  int level_of(uint32_t node) const { return level_[node]; }
  const std::vector<uint32_t>& links(int level, uint32_t node) const;
  int capacity(int level) const { return level == 0 ? 2 * params_.m : params_.m; }

  // Slot bookkeeping.
  std::size_t shortcut_slots() const { return slot_count_; }
  ShortcutId SlotBase(int level, uint32_t node) const;
  std::size_t LiveShortcutCount() const;
  // Decodes a slot id into (level, node, position).
  struct SlotRef {
    int level;
    uint32_t node;
    int position;
  };
  SlotRef Decode(ShortcutId id) const;
  bool SlotLive(ShortcutId id) const;
  // Target node of a live slot.
  uint32_t SlotTarget(ShortcutId id) const;

  // N_idx(v): candidates chosen for v at insertion, union over layers,
  // ordered by hybrid score and truncated to ef.
  const std::vector<uint32_t>& NeighbourOrder(uint32_t node) const {
    return n_idx_[node];
  }

  // Re-selects the links of `node` on `level` from a fresh beam search that
  // avoids `broken` links, and inserts reverse links. Returns the nodes
  // whose lists changed.
  std::vector<uint32_t> Reconnect(uint32_t node, int level,
                                  const std::vector<uint8_t>* broken);

  double t_built() const { return t_built_; }
  const PublicView& view() const { return *view_; }
  std::shared_ptr<const PublicView> shared_view() const { return view_; }
  const PairWeights& weights() const { return weights_; }
  const DecayFn& decay() const { return decay_; }

  // Snapshot: params + per-layer adjacency. Load needs the same view.
  void Save(const std::string& path) const;
  static HybridIndex Load(const std::string& path,
                          std::shared_ptr<const PublicView> view,
                          const DecayFn& decay);
  void WriteNeighbourOrderCsv(const std::string& path) const;

 private:
  struct Candidate {
    double sim;
    uint32_t node;
  };
  double Sim(uint32_t a, uint32_t b) const;
  double Sim(const Eigen::VectorXd& q, uint32_t b) const;
  double HybridScore(uint32_t v, uint32_t u) const;

  std::vector<Candidate> SearchLayer(const Eigen::VectorXd& q,
                                     const std::vector<uint32_t>& entries,
                                     int ef, int level,
                                     const std::vector<uint8_t>* broken,
                                     std::vector<ShortcutId>* parent_slot,
                                     std::vector<uint32_t>* parent_node) const;
  uint32_t GreedyDescend(const Eigen::VectorXd& q, uint32_t start,
                         int from_level, int to_level,
                         const std::vector<uint8_t>* broken,
                         std::vector<ShortcutId>* hops,
                         std::vector<int>* hop_levels) const;
  std::vector<uint32_t> SelectNeighbours(uint32_t v,
                                         const std::vector<uint32_t>& pool,
                                         int max_count) const;
  void Insert(uint32_t v);
  void AddReverseLink(uint32_t from, uint32_t to, int level,
                      std::vector<uint32_t>* changed);
  void AssignSlots();

  std::shared_ptr<const PublicView> view_;
  DecayFn decay_;
  PairWeights weights_;
  IndexParams params_;
  double t_built_ = 0;
  std::vector<int> level_;
  // links_[level][node]; nodes below a level keep empty lists.
  std::vector<std::vector<std::vector<uint32_t>>> links_;
  std::vector<std::vector<uint32_t>> n_idx_;
  std::vector<std::vector<ShortcutId>> slot_base_;  // [level][node]
  struct SlotBlock {
    ShortcutId base;
    int level;
    uint32_t node;
  };
  std::vector<SlotBlock> blocks_;  // ascending base
  std::size_t slot_count_ = 0;
  uint32_t entry_ = 0;
  int top_level_ = -1;
};

}  // namespace chronos::index

#endif  // CHRONOS_INDEX_HYBRID_INDEX_H_
