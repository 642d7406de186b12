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

#ifndef CHRONOS_INDEX_LOUVAIN_H_
#define CHRONOS_INDEX_LOUVAIN_H_

#include <cstdint>
#include <vector>

namespace chronos::index {

// Undirected weighted graph as adjacency lists; each undirected edge appears
// in both endpoint lists. Self loops appear once.
struct WeightedGraph {
  struct Arc {
    uint32_t to;
    double weight;
  };
  std::vector<std::vector<Arc>> adj;

  std::size_t size() const { return adj.size(); }
  static WeightedGraph FromNeighbourLists(
      const std::vector<std::vector<uint32_t>>& neighbours);
};

struct CommunityPartition {
  std::vector<int> community;  // node -> dense community id
  double modularity = 0;
  int count = 0;

  bool Same(uint32_t u, uint32_t v) const {
    return community[u] == community[v];
  }
};

double Modularity(const WeightedGraph& g, const std::vector<int>& labels);

// Louvain: random-order local moves followed by aggregation, repeated until
// a pass yields no gain. Deterministic for a given seed. Isolated nodes form
// singleton communities. Throws ParameterError for an empty graph.
CommunityPartition Louvain(const WeightedGraph& g, uint64_t seed);

// Adjusted Rand index between two labelings of the same nodes.
double AdjustedRandIndex(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace chronos::index

#endif  // CHRONOS_INDEX_LOUVAIN_H_
