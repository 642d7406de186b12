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

#ifndef CHRONOS_INDEX_RECALL_H_
#define CHRONOS_INDEX_RECALL_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "chronos/index/hybrid_index.h"

namespace chronos::index {

struct Query {
  Eigen::VectorXd vector;
  int anchor = -1;  // query entity, -1 when none
};

// Queries anchored at uniformly drawn nodes; the vector is the node's
// embedding plus isotropic noise of total norm about `noise`.
std::vector<Query> SampleQueries(const PublicView& view, std::size_t count,
                                 double noise, uint64_t seed);

// Exact cosine top-k by brute force, ties broken by node id.
std::vector<uint32_t> ExactTopK(const kg::EmbeddingMatrix& unit_embeddings,
                                const Eigen::VectorXd& query, int k);

using Oracle = std::vector<std::vector<uint32_t>>;
Oracle BuildOracle(const PublicView& view, const std::vector<Query>& queries,
                   int k);

double RecallAtK(const std::vector<SearchResult>& results,
                 const std::vector<uint32_t>& truth);

struct RecallMeasurement {
  double mean = 0;
  std::vector<double> per_query;
};

// How a stale shortcut hurts a search: kMisleading links are followed but
// invalidate what they lead to; kBroken links are skipped.
enum class StaleEffect { kMisleading, kBroken };

// Mean recall@k against the oracle with optional per-shortcut masks.
// Throws ParameterError for an empty query set.
RecallMeasurement MeasureRecall(const HybridIndex& index,
                                const std::vector<Query>& queries,
                                const Oracle& oracle, int k,
                                const std::vector<uint8_t>* broken = nullptr,
                                const std::vector<uint8_t>* misleading = nullptr);

// Leave-one-out impact of on-path shortcuts. For each calibration query and
// each on-path shortcut, the shortcut alone is made stale with the given
// effect and the recall drop is recorded. Per layer: the largest drop of each query, averaged over
// queries (max_per_query), the mean drop per removal (delta_r) and the
// overall maximum (max_drop); path sizes are averaged over queries.
struct ImpactCalibration {
  std::vector<double> delta_r;
  std::vector<double> max_per_query;
  std::vector<double> max_drop;
  std::vector<double> path_size;
  double fresh_recall = 0;
  std::size_t queries = 0;
  std::size_t removals = 0;
  std::size_t max_path = 0;

  double TotalPath() const;
  // Path-weighted per-layer impact, so TotalPath() * PooledDeltaR() equals
  // the per-layer sum.
  double PooledDeltaR() const;
};

ImpactCalibration CalibrateImpact(
    const HybridIndex& index, const std::vector<Query>& queries,
    const Oracle& oracle, int k,
    StaleEffect effect = StaleEffect::kMisleading);

// Lower bounds on expected recall after dt days without repair.
double RecallBoundConservative(double path_size, double delta_r, double lambda,
                               double dt, double r_star);
double RecallBoundTight(double path_size, double delta_r, double lambda,
                        double dt, double r_star, double certified_envelope);
struct HawkesRecallBound {
  double mean;
  double high_probability;
};
// Throws StabilityError when xi >= 1.
HawkesRecallBound RecallBoundHawkes(double path_size, double delta_r,
                                    double mu, double xi, double dt,
                                    double r_star, double envelope,
                                    double delta_conf);

}  // namespace chronos::index

#endif  // CHRONOS_INDEX_RECALL_H_
