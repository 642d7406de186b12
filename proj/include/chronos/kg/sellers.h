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

#ifndef CHRONOS_KG_SELLERS_H_
#define CHRONOS_KG_SELLERS_H_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "chronos/kg/temporal_kg.h"

namespace chronos::kg {

struct SellerPartition {
  int n = 0;
  // Sorted edge ids per seller.
  std::vector<std::vector<EdgeId>> datasets;
  double skew = 0;

  std::size_t TotalClaims() const;
  std::size_t MaxSellerSize() const;
  // Copy with seller `s` emptied (used for leave-one-seller-out checks).
  SellerPartition Without(int s) const;
};

// Assigns the private edges of `kg` to n sellers. Seller 0 is the dominant
// seller and holds round(skew * |E_priv|) edges drawn uniformly at random;
// the rest are split evenly. With overlap_fraction > 0 that share of edges is
// additionally claimed by a second, distinct seller.
// Throws ParameterError for n < 2, skew outside [1/n, 1] or a bad overlap.
SellerPartition PartitionSellers(const TemporalKG& kg, int n, double skew,
                                 uint64_t seed, double overlap_fraction = 0.0);

// Writes the first claimant of every private edge into kg owners.
void ApplyPartition(const SellerPartition& partition, TemporalKG& kg);

// Edge key -> claimant sellers.
class OwnershipRegistry {
 public:
  void Claim(const EdgeKey& key, SellerId seller);
  // Max claimant count over keys; 1 for an empty registry.
  double OverlapFactor() const;
  // Keeps only the lowest seller id per key.
  void Deduplicate();
  SellerId Owner(const EdgeKey& key) const;
  std::size_t size() const { return claims_.size(); }

  static OwnershipRegistry FromPartition(const SellerPartition& partition,
                                         std::span<const EdgeKey> keys);

 private:
  std::unordered_map<EdgeKey, std::vector<SellerId>, EdgeKeyHash> claims_;
};

// Drops duplicate claims so every key keeps its lowest-id claimant.
SellerPartition DeduplicatePartition(const SellerPartition& partition,
                                     std::span<const EdgeKey> keys);

}  // namespace chronos::kg

#endif  // CHRONOS_KG_SELLERS_H_
