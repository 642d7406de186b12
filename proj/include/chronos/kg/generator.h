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

#ifndef CHRONOS_KG_GENERATOR_H_
#define CHRONOS_KG_GENERATOR_H_

#include <cstdint>

#include "chronos/kg/temporal_kg.h"

namespace chronos::kg {

struct SyntheticKgConfig {
  std::size_t n_nodes = 1000;
  std::size_t n_edges = 10000;
  std::size_t dim = 16;
  std::size_t n_communities = 10;
  uint64_t seed = 42;

  // Probability that an edge stays inside the source node's community.
  double intra_fraction = 0.9;
  // Norm of the isotropic noise added to the unit community centroid.
  double noise_scale = 0.6;
  // Edge timestamps are uniform on [0, window_days].
  double window_days = 180.0;
  // launch_time = launch_quantile * window_days.
  double launch_quantile = 0.75;
  RelationId relation_count = 8;
  int n_sellers = 10;
  // Probability that an intra-community edge targets one of the source's
  // `local_pool` nearest community members in embedding space.
  double neighbour_bias = 0.5;
  std::size_t local_pool = 20;
  // Pareto tail index for node attractiveness; 0 means uniform targets.
  double degree_tail = 2.0;
};

// Planted-partition temporal KG. Deterministic for a given config.
// Throws ParameterError on invalid sizes.
TemporalKG GenerateSyntheticKg(const SyntheticKgConfig& config);

inline TemporalKG GenerateSyntheticKg(std::size_t n_nodes, std::size_t n_edges,
                                      std::size_t dim,
                                      std::size_t n_communities,
                                      uint64_t seed) {
  SyntheticKgConfig c;
  c.n_nodes = n_nodes;
  c.n_edges = n_edges;
  c.dim = dim;
  c.n_communities = n_communities;
  c.seed = seed;
  return GenerateSyntheticKg(c);
}

}  // namespace chronos::kg

#endif  // CHRONOS_KG_GENERATOR_H_
