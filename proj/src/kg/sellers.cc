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

#include "chronos/kg/sellers.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "chronos/common/error.h"
#include "chronos/common/random.h"

namespace chronos::kg {

std::size_t SellerPartition::TotalClaims() const {
  std::size_t total = 0;
  for (const auto& d : datasets) total += d.size();
  return total;
}

std::size_t SellerPartition::MaxSellerSize() const {
  std::size_t m = 0;
  for (const auto& d : datasets) m = std::max(m, d.size());
  return m;
}

SellerPartition SellerPartition::Without(int s) const {
  Require(s >= 0 && s < n, "seller id out of range");
  SellerPartition out = *this;
  out.datasets[s].clear();
  return out;
}

SellerPartition PartitionSellers(const TemporalKG& kg, int n, double skew,
                                 uint64_t seed, double overlap_fraction) {
  Require(n >= 2, "need at least two sellers");
  const double lo = 1.0 / n;
  Require(skew >= lo - 1e-12 && skew <= 1.0, "skew must lie in [1/n, 1]");
  Require(overlap_fraction >= 0 && overlap_fraction <= 1,
          "overlap_fraction must lie in [0, 1]");

  Rng rng = MakeRng(seed, "partition-sellers");
  std::vector<EdgeId> priv = kg.PrivateEdgeIds();
  std::shuffle(priv.begin(), priv.end(), rng);

  SellerPartition p;
  p.n = n;
  p.skew = skew;
  p.datasets.assign(n, {});
  const std::size_t total = priv.size();
  auto dominant = static_cast<std::size_t>(std::llround(skew * total));
  dominant = std::min(dominant, total);
  p.datasets[0].assign(priv.begin(), priv.begin() + dominant);
  const std::size_t rest = total - dominant;
  std::size_t pos = dominant;
  for (int s = 1; s < n; ++s) {
    std::size_t share = rest / (n - 1) + (static_cast<std::size_t>(s - 1) < rest % (n - 1) ? 1 : 0);
    p.datasets[s].assign(priv.begin() + pos, priv.begin() + pos + share);
    pos += share;
  }

  if (overlap_fraction > 0) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::uniform_int_distribution<int> other(1, n - 1);
    std::vector<std::vector<EdgeId>> extra(n);
    for (int s = 0; s < n; ++s) {
      for (EdgeId e : p.datasets[s]) {
        if (unif(rng) < overlap_fraction) extra[(s + other(rng)) % n].push_back(e);
      }
    }
    for (int s = 0; s < n; ++s) {
      p.datasets[s].insert(p.datasets[s].end(), extra[s].begin(), extra[s].end());
    }
  }
  for (auto& d : p.datasets) std::sort(d.begin(), d.end());
  return p;
}

void ApplyPartition(const SellerPartition& partition, TemporalKG& kg) {
  std::vector<SellerId> owner(kg.edge_count(), kPublicOwner);
  for (int s = partition.n - 1; s >= 0; --s) {
    for (EdgeId e : partition.datasets[s]) owner[e] = s;
  }
  for (EdgeId e : kg.PrivateEdgeIds()) {
    Require(owner[e] != kPublicOwner, "private edge missing from partition");
    kg.SetOwner(e, owner[e]);
  }
}

void OwnershipRegistry::Claim(const EdgeKey& key, SellerId seller) {
  auto& list = claims_[key];
  if (std::find(list.begin(), list.end(), seller) == list.end()) {
    list.push_back(seller);
  }
}

double OwnershipRegistry::OverlapFactor() const {
  std::size_t eta = 1;
  for (const auto& [key, list] : claims_) eta = std::max(eta, list.size());
  return static_cast<double>(eta);
}

void OwnershipRegistry::Deduplicate() {
  for (auto& [key, list] : claims_) {
    SellerId keep = *std::min_element(list.begin(), list.end());
    list.assign(1, keep);
  }
}

SellerId OwnershipRegistry::Owner(const EdgeKey& key) const {
  auto it = claims_.find(key);
  Require(it != claims_.end(), "unknown edge key");
  return *std::min_element(it->second.begin(), it->second.end());
}

OwnershipRegistry OwnershipRegistry::FromPartition(
    const SellerPartition& partition, std::span<const EdgeKey> keys) {
  OwnershipRegistry reg;
  for (int s = 0; s < partition.n; ++s) {
    for (EdgeId e : partition.datasets[s]) reg.Claim(keys[e], s);
  }
  return reg;
}

SellerPartition DeduplicatePartition(const SellerPartition& partition,
                                     std::span<const EdgeKey> keys) {
  OwnershipRegistry reg = OwnershipRegistry::FromPartition(partition, keys);
  SellerPartition out = partition;
  for (int s = 0; s < partition.n; ++s) {
    auto& d = out.datasets[s];
    d.erase(std::remove_if(d.begin(), d.end(),
                           [&](EdgeId e) { return reg.Owner(keys[e]) != s; }),
            d.end());
  }
  return out;
}

}  // namespace chronos::kg
