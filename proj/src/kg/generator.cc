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

#include "chronos/kg/generator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_set>
#include <vector>

#include "chronos/common/error.h"
#include "chronos/common/random.h"

namespace chronos::kg {
namespace {

// Cumulative-weight sampler over a fixed member list.
class WeightedPicker {
 public:
  WeightedPicker() = default;
  WeightedPicker(std::vector<NodeId> members, const std::vector<double>& w)
      : members_(std::move(members)) {
    cum_.reserve(members_.size());
    double acc = 0;
    for (NodeId m : members_) {
      acc += w[m];
      cum_.push_back(acc);
    }
  }
  NodeId Pick(Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, cum_.back());
    auto it = std::upper_bound(cum_.begin(), cum_.end(), unif(rng));
    std::size_t idx = std::min<std::size_t>(it - cum_.begin(), cum_.size() - 1);
    return members_[idx];
  }
  bool empty() const { return members_.empty(); }

 private:
  std::vector<NodeId> members_;
  std::vector<double> cum_;
};

}  // namespace

TemporalKG GenerateSyntheticKg(const SyntheticKgConfig& c) {
  Require(c.n_communities >= 1, "n_communities must be >= 1");
  Require(c.n_nodes >= c.n_communities, "n_nodes must be >= n_communities");
  Require(c.n_nodes >= 2, "n_nodes must be >= 2");
  Require(c.n_edges >= c.n_nodes, "n_edges must be >= n_nodes");
  Require(c.dim >= 2, "embedding dimension must be >= 2");
  Require(c.intra_fraction >= 0 && c.intra_fraction <= 1,
          "intra_fraction must lie in [0, 1]");
  Require(c.window_days > 0, "window_days must be > 0");
  Require(c.launch_quantile > 0 && c.launch_quantile <= 1,
          "launch_quantile must lie in (0, 1]");
  Require(c.n_sellers >= 1, "n_sellers must be >= 1");
  Require(c.neighbour_bias >= 0 && c.neighbour_bias <= 1,
          "neighbour_bias must lie in [0, 1]");
  Require(c.degree_tail >= 0, "degree_tail must be >= 0");
  const double max_edges = static_cast<double>(c.n_nodes) *
                           static_cast<double>(c.n_nodes - 1) * c.relation_count;
  Require(static_cast<double>(c.n_edges) <= 0.5 * max_edges,
          "n_edges too large for the node/relation universe");

  Rng rng(c.seed);
  const std::size_t n = c.n_nodes;
  const std::size_t d = c.dim;
  TemporalKG kg(n, d, c.relation_count, c.launch_quantile * c.window_days);

  // Balanced random community assignment.
  std::vector<int> label(n);
  for (std::size_t i = 0; i < n; ++i) {
    label[i] = static_cast<int>(i % c.n_communities);
  }
  std::shuffle(label.begin(), label.end(), rng);
  kg.planted_communities() = label;

  std::normal_distribution<double> gauss(0.0, 1.0);
  EmbeddingMatrix centroids(c.n_communities, d);
  for (std::size_t k = 0; k < c.n_communities; ++k) {
    for (std::size_t j = 0; j < d; ++j) centroids(k, j) = gauss(rng);
    centroids.row(k).normalize();
  }
  EmbeddingMatrix& x = kg.embeddings();
  const double noise_sd = c.noise_scale / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      x(i, j) = centroids(label[i], j) + noise_sd * gauss(rng);
    }
  }

  std::vector<double> weight(n, 1.0);
  if (c.degree_tail > 0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (double& w : weight) {
      w = std::min(50.0, std::pow(1.0 - unif(rng), -1.0 / c.degree_tail));
    }
  }

  std::vector<std::vector<NodeId>> members(c.n_communities);
  for (NodeId i = 0; i < n; ++i) members[label[i]].push_back(i);
  std::vector<WeightedPicker> community_picker;
  community_picker.reserve(c.n_communities);
  for (auto& m : members) community_picker.emplace_back(m, weight);
  std::vector<NodeId> all(n);
  std::iota(all.begin(), all.end(), 0);
  WeightedPicker global_picker(all, weight);

  // Nearest community members by cosine, used for locality-biased edges.
  std::vector<std::vector<NodeId>> local;
  if (c.neighbour_bias > 0 && c.local_pool > 0) {
    EmbeddingMatrix unit = x;
    unit.rowwise().normalize();
    local.resize(n);
    for (NodeId i = 0; i < n; ++i) {
      const auto& m = members[label[i]];
      std::vector<std::pair<double, NodeId>> scored;
      scored.reserve(m.size());
      for (NodeId j : m) {
        if (j != i) scored.emplace_back(-unit.row(i).dot(unit.row(j)), j);
      }
      std::size_t keep = std::min(c.local_pool, scored.size());
      std::partial_sort(scored.begin(), scored.begin() + keep, scored.end());
      for (std::size_t t = 0; t < keep; ++t) local[i].push_back(scored[t].second);
    }
  }

  std::uniform_int_distribution<NodeId> pick_node(0, static_cast<NodeId>(n - 1));
  std::uniform_int_distribution<RelationId> pick_rel(0, c.relation_count - 1);
  std::uniform_int_distribution<int> pick_seller(0, c.n_sellers - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::unordered_set<EdgeKey, EdgeKeyHash> seen;
  seen.reserve(c.n_edges * 2);

  std::size_t attempts = 0;
  const std::size_t max_attempts = 50 * c.n_edges + 1000;
  while (kg.edge_count() < c.n_edges) {
    Require(++attempts <= max_attempts,
            "could not place the requested number of distinct edges");
    NodeId u = pick_node(rng);
    NodeId v;
    if (c.n_communities == 1 || unif(rng) < c.intra_fraction) {
      if (!local.empty() && !local[u].empty() && unif(rng) < c.neighbour_bias) {
        std::uniform_int_distribution<std::size_t> pick(0, local[u].size() - 1);
        v = local[u][pick(rng)];
      } else {
        v = community_picker[label[u]].Pick(rng);
      }
    } else {
      v = global_picker.Pick(rng);
    }
    RelationId r = pick_rel(rng);
    double t = unif(rng) * c.window_days;
    int seller = pick_seller(rng);
    if (u == v) continue;
    EdgeKey key{u, v, r};
    if (!seen.insert(key).second) continue;
    kg.AddEdge(u, v, r, t, t < kg.launch_time() ? kPublicOwner : seller);
  }
  return kg;
}

}  // namespace chronos::kg
