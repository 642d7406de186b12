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

#ifndef CHRONOS_KG_TEMPORAL_KG_H_
#define CHRONOS_KG_TEMPORAL_KG_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace chronos::kg {

using NodeId = uint32_t;
using EdgeId = uint32_t;
using RelationId = uint32_t;
using SellerId = int32_t;

inline constexpr SellerId kPublicOwner = -1;

using EmbeddingMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Visibility { kPublicPreMarketplace, kPrivateSeller };

// Identity of an edge in the public universe of possible (u, v, r) tuples.
struct EdgeKey {
  NodeId u = 0;
  NodeId v = 0;
  RelationId relation = 0;

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

// 64-bit FNV-1a over the little-endian encoding u | v | r (4 bytes each).
uint64_t PublicHash(const EdgeKey& key);

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const { return PublicHash(k); }
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  RelationId relation = 0;
  double t_created = 0;  // days since epoch 0
  SellerId owner = kPublicOwner;
  Visibility visibility = Visibility::kPublicPreMarketplace;

  EdgeKey key() const { return {u, v, relation}; }
  bool is_public() const {
    return visibility == Visibility::kPublicPreMarketplace;
  }
};

// Number of times private edge data has been handed out by any TemporalKG.
// Serving code is expected to leave this untouched; tests assert on it.
uint64_t PrivateAccessCount();

// Timestamped directed multigraph with node embeddings. Edges created before
// `launch_time` are public pre-marketplace metadata; later ones belong to
// sellers.
class TemporalKG {
 public:
  TemporalKG(std::size_t node_count, std::size_t dim,
             RelationId relation_count, double launch_time);

  // Appends an edge and returns its id. Visibility follows from t_created.
  // Throws ParameterError for bad endpoints, negative timestamps, unknown
  // relations, or a private edge without a seller owner.
  EdgeId AddEdge(NodeId u, NodeId v, RelationId relation, double t_created,
                 SellerId owner);

  std::size_t node_count() const { return node_count_; }
  std::size_t dim() const { return static_cast<std::size_t>(embeddings_.cols()); }
  std::size_t edge_count() const { return edges_.size(); }
  RelationId relation_count() const { return relation_count_; }
  double launch_time() const { return launch_time_; }

  // Full edge list including private seller edges (audited).
  std::span<const Edge> edges() const;
  const Edge& edge(EdgeId id) const;

  // Public-universe keys by edge id; carries no timestamps or owners.
  std::vector<EdgeKey> Keys() const;

  std::vector<EdgeId> PublicEdgeIds() const;
  std::vector<EdgeId> PrivateEdgeIds() const;
  std::size_t public_edge_count() const { return public_count_; }

  // Copy containing only the public pre-marketplace edges (ids renumbered).
  TemporalKG PublicSubgraph() const;

  // True when no private edge is present.
  bool IsPublicOnly() const { return public_count_ == edges_.size(); }

  void SetOwner(EdgeId id, SellerId owner);

  EmbeddingMatrix& embeddings() { return embeddings_; }
  const EmbeddingMatrix& embeddings() const { return embeddings_; }

  // Planted community labels, empty when unknown.
  std::vector<int>& planted_communities() { return planted_; }
  const std::vector<int>& planted_communities() const { return planted_; }

 private:
  std::size_t node_count_;
  RelationId relation_count_;
  double launch_time_;
  std::vector<Edge> edges_;
  std::size_t public_count_ = 0;
  EmbeddingMatrix embeddings_;
  std::vector<int> planted_;
};

// Undirected public adjacency lists (deduplicated, self loops dropped).
std::vector<std::vector<NodeId>> PublicNeighbours(const TemporalKG& kg);

}  // namespace chronos::kg

#endif  // CHRONOS_KG_TEMPORAL_KG_H_
