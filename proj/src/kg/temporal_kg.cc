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

#include "chronos/kg/temporal_kg.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <string>

#include "chronos/common/error.h"
#include "chronos/common/random.h"

namespace chronos::kg {
namespace {

std::atomic<uint64_t> g_private_access{0};

void PutLe32(unsigned char* out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<unsigned char>(v >> (8 * i));
}

}  // namespace

uint64_t PublicHash(const EdgeKey& key) {
  std::array<unsigned char, 12> bytes{};
  PutLe32(bytes.data(), key.u);
  PutLe32(bytes.data() + 4, key.v);
  PutLe32(bytes.data() + 8, key.relation);
  return Fnv1a64(bytes.data(), bytes.size());
}

uint64_t PrivateAccessCount() { return g_private_access.load(); }

TemporalKG::TemporalKG(std::size_t node_count, std::size_t dim,
                       RelationId relation_count, double launch_time)
    : node_count_(node_count),
      relation_count_(relation_count),
      launch_time_(launch_time),
      embeddings_(EmbeddingMatrix::Zero(static_cast<Eigen::Index>(node_count),
                                        static_cast<Eigen::Index>(dim))) {
  Require(dim >= 2, "embedding dimension must be >= 2");
  Require(relation_count >= 1, "at least one relation type is required");
}

EdgeId TemporalKG::AddEdge(NodeId u, NodeId v, RelationId relation,
                           double t_created, SellerId owner) {
  Require(u < node_count_ && v < node_count_, "edge endpoint out of range");
  Require(relation < relation_count_, "unknown relation id");
  Require(t_created >= 0 && std::isfinite(t_created),
          "edge timestamp must be finite and >= 0");
  Edge e;
  e.u = u;
  e.v = v;
  e.relation = relation;
  e.t_created = t_created;
  if (t_created < launch_time_) {
    e.visibility = Visibility::kPublicPreMarketplace;
    e.owner = kPublicOwner;
    ++public_count_;
  } else {
    Require(owner >= 0, "private edges need a seller owner");
    e.visibility = Visibility::kPrivateSeller;
    e.owner = owner;
  }
  edges_.push_back(e);
  return static_cast<EdgeId>(edges_.size() - 1);
}

std::span<const Edge> TemporalKG::edges() const {
  if (public_count_ != edges_.size()) ++g_private_access;
  return edges_;
}

const Edge& TemporalKG::edge(EdgeId id) const {
  Require(id < edges_.size(), "edge id out of range");
  if (!edges_[id].is_public()) ++g_private_access;
  return edges_[id];
}

std::vector<EdgeKey> TemporalKG::Keys() const {
  std::vector<EdgeKey> keys;
  keys.reserve(edges_.size());
  for (const Edge& e : edges_) keys.push_back(e.key());
  return keys;
}

std::vector<EdgeId> TemporalKG::PublicEdgeIds() const {
  std::vector<EdgeId> ids;
  for (EdgeId i = 0; i < edges_.size(); ++i) {
    if (edges_[i].is_public()) ids.push_back(i);
  }
  return ids;
}

std::vector<EdgeId> TemporalKG::PrivateEdgeIds() const {
  std::vector<EdgeId> ids;
  for (EdgeId i = 0; i < edges_.size(); ++i) {
    if (!edges_[i].is_public()) ids.push_back(i);
  }
  return ids;
}

TemporalKG TemporalKG::PublicSubgraph() const {
  TemporalKG out(node_count_, dim(), relation_count_, launch_time_);
  out.embeddings_ = embeddings_;
  out.planted_ = planted_;
  for (const Edge& e : edges_) {
    if (e.is_public()) out.AddEdge(e.u, e.v, e.relation, e.t_created, kPublicOwner);
  }
  return out;
}

void TemporalKG::SetOwner(EdgeId id, SellerId owner) {
  Require(id < edges_.size(), "edge id out of range");
  Edge& e = edges_[id];
  if (e.is_public()) {
    Require(owner == kPublicOwner, "public edges cannot have a seller owner");
  } else {
    Require(owner >= 0, "private edges need a seller owner");
  }
  e.owner = owner;
}

std::vector<std::vector<NodeId>> PublicNeighbours(const TemporalKG& kg) {
  std::vector<std::vector<NodeId>> adj(kg.node_count());
  for (EdgeId id : kg.PublicEdgeIds()) {
    const Edge& e = kg.edge(id);
    if (e.u == e.v) continue;
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

}  // namespace chronos::kg
