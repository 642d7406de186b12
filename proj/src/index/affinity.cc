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

#include "chronos/index/affinity.h"

#include <algorithm>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"

namespace chronos::index {

AffinityLayout AffinityLayout::Make(const HybridIndex& index,
                                    std::span<const uint32_t> active) {
  AffinityLayout layout;
  layout.row_of.assign(index.node_count(), -1);
  layout.cols = index.params().ef;
  for (uint32_t v : active) {
    Require(v < index.node_count(), "active node out of range");
    if (layout.row_of[v] >= 0) continue;
    layout.row_of[v] = static_cast<int>(layout.active.size());
    layout.active.push_back(v);
  }
  return layout;
}

Eigen::MatrixXd ComputeAffinity(const kg::TemporalKG& kg,
                                std::span<const kg::EdgeId> admitted,
                                const HybridIndex& index,
                                const AffinityLayout& layout,
                                const DecayFn& decay, double t_now) {
  Require(kg.node_count() == index.node_count(), "KG and index disagree on nodes");
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(layout.rows(), layout.cols);
  const double gamma = index.params().gamma_community;
  for (kg::EdgeId id : admitted) {
    const kg::Edge& e = kg.edge(id);
    if (e.is_public() || e.t_created > t_now) continue;
    const int row = layout.row_of[e.u];
    if (row < 0) continue;
    const auto& order = index.NeighbourOrder(e.u);
    auto it = std::find(order.begin(), order.end(), e.v);
    if (it == order.end()) continue;
    const double w = Clamp01(decay(t_now - e.t_created)) *
                     StaticAffinity(index.view(), e.u, e.v, gamma);
    double& cell = a(row, it - order.begin());
    cell = std::max(cell, w);
  }
  return a;
}

std::vector<double> AffinityRow(const Eigen::MatrixXd& released,
                                const AffinityLayout& layout, int anchor) {
  if (anchor < 0 || anchor >= static_cast<int>(layout.row_of.size())) return {};
  const int row = layout.row_of[anchor];
  if (row < 0) return {};
  Require(released.rows() == layout.rows() && released.cols() == layout.cols,
          "released matrix does not match the layout");
  std::vector<double> out(layout.cols);
  for (int j = 0; j < layout.cols; ++j) out[j] = released(row, j);
  return out;
}

}  // namespace chronos::index
