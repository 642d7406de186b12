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

#ifndef CHRONOS_INDEX_AFFINITY_H_
#define CHRONOS_INDEX_AFFINITY_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chronos/index/hybrid_index.h"
#include "chronos/kg/temporal_kg.h"

namespace chronos::index {

// Row layout of the released affinity matrix: one row per active node, one
// column per slot of that node's candidate order N_idx.
struct AffinityLayout {
  std::vector<uint32_t> active;  // row -> node
  std::vector<int> row_of;       // node -> row, -1 when inactive
  int cols = 0;

  static AffinityLayout Make(const HybridIndex& index,
                             std::span<const uint32_t> active);
  int rows() const { return static_cast<int>(active.size()); }
};

// Curator-side affinity A[row(u), j]: the largest decay-weighted static
// affinity over admitted private edges u -> N_idx(u)[j]. An edge reaches at
// most one entry and each entry is at most 1, so removing a seller with c
// admitted edges moves A by at most sqrt(c) in Frobenius norm.
Eigen::MatrixXd ComputeAffinity(const kg::TemporalKG& kg,
                                std::span<const kg::EdgeId> admitted,
                                const HybridIndex& index,
                                const AffinityLayout& layout,
                                const DecayFn& decay, double t_now);

// Row of a released matrix for the query anchor; empty when the anchor is
// not active, which disables rescoring.
std::vector<double> AffinityRow(const Eigen::MatrixXd& released,
                                const AffinityLayout& layout, int anchor);

}  // namespace chronos::index

#endif  // CHRONOS_INDEX_AFFINITY_H_
