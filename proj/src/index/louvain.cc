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

#include "chronos/index/louvain.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

#include "chronos/common/error.h"
#include "chronos/common/random.h"

namespace chronos::index {
namespace {

std::vector<int> Relabel(const std::vector<int>& labels) {
  std::unordered_map<int, int> dense;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = dense.emplace(labels[i], static_cast<int>(dense.size()));
    out[i] = it->second;
  }
  return out;
}

// One level of local moves. Returns true if any node moved.
bool LocalMoves(const WeightedGraph& g, std::vector<int>& label, Rng& rng) {
  const std::size_t n = g.size();
  std::vector<double> degree(n, 0.0);
  double two_m = 0;
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& a : g.adj[u]) {
      degree[u] += a.weight * (a.to == u ? 2.0 : 1.0);
    }
    two_m += degree[u];
  }
  if (two_m == 0) return false;
  std::vector<double> tot(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) tot[label[u]] += degree[u];

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);

  bool any = false;
  std::vector<double> link(n, 0.0);
  std::vector<int> touched;
  bool improved = true;
  while (improved) {
    improved = false;
    for (uint32_t u : order) {
      const int cur = label[u];
      touched.clear();
      for (const auto& a : g.adj[u]) {
        if (a.to == u) continue;
        const int c = label[a.to];
        if (link[c] == 0) touched.push_back(c);
        link[c] += a.weight;
      }
      tot[cur] -= degree[u];
      int best = cur;
      double best_gain = link[cur] - tot[cur] * degree[u] / two_m;
      for (int c : touched) {
        const double gain = link[c] - tot[c] * degree[u] / two_m;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += degree[u];
      for (int c : touched) link[c] = 0;
      link[cur] = 0;
      if (best != cur) {
        label[u] = best;
        improved = true;
        any = true;
      }
    }
  }
  return any;
}

WeightedGraph Aggregate(const WeightedGraph& g, const std::vector<int>& label,
                        int count) {
  std::vector<std::map<int, double>> acc(count);
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (const auto& a : g.adj[u]) {
      const int cu = label[u], cv = label[a.to];
      if (cu == cv) {
        // Each internal arc is seen from both ends except self loops.
        acc[cu][cu] += a.to == u ? a.weight : 0.5 * a.weight;
      } else {
        acc[cu][cv] += a.weight;
      }
    }
  }
  WeightedGraph out;
  out.adj.resize(count);
  for (int c = 0; c < count; ++c) {
    for (const auto& [d, w] : acc[c]) {
      out.adj[c].push_back({static_cast<uint32_t>(d), w});
    }
  }
  return out;
}

}  // namespace

WeightedGraph WeightedGraph::FromNeighbourLists(
    const std::vector<std::vector<uint32_t>>& neighbours) {
  WeightedGraph g;
  g.adj.resize(neighbours.size());
  for (std::size_t u = 0; u < neighbours.size(); ++u) {
    for (uint32_t v : neighbours[u]) g.adj[u].push_back({v, 1.0});
  }
  return g;
}

double Modularity(const WeightedGraph& g, const std::vector<int>& labels) {
  Require(labels.size() == g.size(), "label count must match node count");
  double two_m = 0;
  std::vector<double> degree(g.size(), 0.0);
  for (std::size_t u = 0; u < g.size(); ++u) {
    for (const auto& a : g.adj[u]) degree[u] += a.weight * (a.to == u ? 2.0 : 1.0);
    two_m += degree[u];
  }
  if (two_m == 0) return 0.0;
  std::unordered_map<int, double> in, tot;
  for (std::size_t u = 0; u < g.size(); ++u) {
    tot[labels[u]] += degree[u];
    for (const auto& a : g.adj[u]) {
      if (labels[a.to] == labels[u]) in[labels[u]] += a.weight * (a.to == u ? 2.0 : 1.0);
    }
  }
  double q = 0;
  for (const auto& [c, t] : tot) q += in[c] / two_m - (t / two_m) * (t / two_m);
  return q;
}

CommunityPartition Louvain(const WeightedGraph& g, uint64_t seed) {
  Require(g.size() > 0, "Louvain needs a non-empty graph");
  Rng rng = MakeRng(seed, "louvain");
  std::vector<int> node_label(g.size());
  std::iota(node_label.begin(), node_label.end(), 0);

  WeightedGraph level = g;
  while (true) {
    std::vector<int> label(level.size());
    std::iota(label.begin(), label.end(), 0);
    const bool moved = LocalMoves(level, label, rng);
    label = Relabel(label);
    const int count = label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
    for (int& l : node_label) l = label[l];
    if (!moved || count == static_cast<int>(level.size())) break;
    level = Aggregate(level, label, count);
  }
  CommunityPartition p;
  p.community = Relabel(node_label);
  p.count = *std::max_element(p.community.begin(), p.community.end()) + 1;
  p.modularity = Modularity(g, p.community);
  return p;
}

double AdjustedRandIndex(const std::vector<int>& a, const std::vector<int>& b) {
  Require(a.size() == b.size(), "labelings must have equal length");
  const double n = static_cast<double>(a.size());
  if (a.size() < 2) return 1.0;
  std::map<std::pair<int, int>, double> joint;
  std::map<int, double> ca, cb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a[i], b[i]}] += 1;
    ca[a[i]] += 1;
    cb[b[i]] += 1;
  }
  auto c2 = [](double x) { return x * (x - 1) / 2; };
  double sum_joint = 0, sum_a = 0, sum_b = 0;
  for (const auto& [k, v] : joint) sum_joint += c2(v);
  for (const auto& [k, v] : ca) sum_a += c2(v);
  for (const auto& [k, v] : cb) sum_b += c2(v);
  const double expected = sum_a * sum_b / c2(n);
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (sum_joint - expected) / (max_index - expected);
}

}  // namespace chronos::index
