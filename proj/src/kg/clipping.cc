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

#include "chronos/kg/clipping.h"

#include <algorithm>
#include <utility>

#include "chronos/common/error.h"

namespace chronos::kg {
namespace {

std::vector<EdgeId> KeepFirstByHash(std::vector<EdgeId> ids,
                                    std::span<const EdgeKey> keys,
                                    int64_t cap) {
  if (cap < 0) cap = 0;
  if (static_cast<int64_t>(ids.size()) <= cap) return ids;
  std::vector<std::pair<uint64_t, EdgeId>> order;
  order.reserve(ids.size());
  for (EdgeId e : ids) order.emplace_back(PublicHash(keys[e]), e);
  std::partial_sort(order.begin(), order.begin() + cap, order.end());
  std::vector<EdgeId> kept;
  kept.reserve(cap);
  for (int64_t i = 0; i < cap; ++i) kept.push_back(order[i].second);
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

int64_t EdgeCap(std::size_t total_edges, int n) {
  Require(n >= 1, "seller count must be >= 1");
  // Integer form of ceil(1.5 * E / n) = ceil(3E / 2n).
  const int64_t num = 3 * static_cast<int64_t>(total_edges);
  const int64_t den = 2 * static_cast<int64_t>(n);
  return (num + den - 1) / den;
}

SellerPartition ClipStage1(const SellerPartition& partition,
                           std::span<const EdgeKey> keys,
                           std::size_t total_edges) {
  const int64_t cap = EdgeCap(total_edges, partition.n);
  SellerPartition out = partition;
  for (auto& d : out.datasets) d = KeepFirstByHash(std::move(d), keys, cap);
  return out;
}

Stage2Result ClipStage2(const SellerPartition& partition,
                        std::span<const EdgeKey> keys,
                        const std::vector<bool>& active, std::size_t e_active,
                        int n, int64_t c_max) {
  Stage2Result r;
  r.kappa_active = std::min(c_max, EdgeCap(e_active, n));
  r.partition = partition;
  for (auto& d : r.partition.datasets) {
    std::vector<EdgeId> inside;
    for (EdgeId e : d) {
      const EdgeKey& k = keys[e];
      if (k.u < active.size() && k.v < active.size() && active[k.u] &&
          active[k.v]) {
        inside.push_back(e);
      }
    }
    d = KeepFirstByHash(std::move(inside), keys, r.kappa_active);
  }
  return r;
}

}  // namespace chronos::kg
