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

#ifndef CHRONOS_KG_CLIPPING_H_
#define CHRONOS_KG_CLIPPING_H_

#include <cstdint>
#include <span>
#include <vector>

#include "chronos/kg/sellers.h"

namespace chronos::kg {

// ceil(1.5 * total_edges / n).
int64_t EdgeCap(std::size_t total_edges, int n);

// Keeps at most EdgeCap(total_edges, n) edges per seller, chosen by
// ascending PublicHash of the edge key (ties by edge id).
SellerPartition ClipStage1(const SellerPartition& partition,
                           std::span<const EdgeKey> keys,
                           std::size_t total_edges);

struct Stage2Result {
  SellerPartition partition;
  int64_t kappa_active = 0;
};

// Restricts each seller to edges with both endpoints active and then keeps
// the first kappa_active = min(c_max, ceil(1.5 * e_active / n)) edges in
// public-hash order. `active` is a node mask.
Stage2Result ClipStage2(const SellerPartition& partition,
                        std::span<const EdgeKey> keys,
                        const std::vector<bool>& active, std::size_t e_active,
                        int n, int64_t c_max);

}  // namespace chronos::kg

#endif  // CHRONOS_KG_CLIPPING_H_
