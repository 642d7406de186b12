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

#ifndef CHRONOS_VALUATION_MRR_VALUE_H_
#define CHRONOS_VALUATION_MRR_VALUE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "chronos/kg/sellers.h"
#include "chronos/kg/temporal_kg.h"
#include "chronos/valuation/game.h"

namespace chronos::valuation {

struct ValuationQuery {
  uint32_t anchor = 0;
  uint32_t gold = 0;
  double time = 0;
  int segment = 0;  // event segment the query falls in
};

struct MrrConfig {
  double beta = 0.3;                           // weight of the KG boost
  std::function<double(double)> decay = nullptr;  // nullptr -> no decay
};

// Draws queries from admitted private edges: the anchor is the source, the
// gold answer the target, and the query time lies up to `max_lag` days
// after the edge appeared.
std::vector<ValuationQuery> SampleWorkload(const kg::TemporalKG& kg,
                                           const kg::SellerPartition& sellers,
                                           std::size_t count, double max_lag,
                                           uint64_t seed);

// v(S) = mean reciprocal rank of the gold nodes when every node c != anchor
// is scored by (1 - beta) cos(anchor, c) + beta max decay(t_q - t_e) over
// the public and coalition edges joining anchor and c that exist at t_q.
// Reads seller data, so it belongs to the curator side.
class MrrValueFunction : public CoalitionValueFn {
 public:
  MrrValueFunction(const kg::TemporalKG& kg, const kg::SellerPartition& sellers,
                   std::vector<ValuationQuery> workload, const MrrConfig& config);

  int players() const override { return players_; }
  double Value(const Coalition& members) const override;

  // Queries dropped because their gold node is not in the KG.
  std::size_t skipped() const { return skipped_; }
  std::size_t active_queries() const { return active_.size(); }
  std::size_t total_queries() const;

  // Same game restricted to the queries of one event segment. Throws
  // ParameterError when the segment has no queries.
  MrrValueFunction ForSegment(int segment) const;
  // Same game on a seeded subsample of the active queries.
  MrrValueFunction Subsample(double fraction, uint64_t seed) const;

  // Reciprocal rank of one active query.
  double ReciprocalRank(std::size_t active_index, const Coalition& members) const;

 private:
  struct Link {
    double weight;
    bool is_public;
    std::vector<uint16_t> claimants;
  };
  struct Neighbour {
    uint32_t node;
    double base;
    std::vector<Link> links;
  };
  struct Prepared {
    ValuationQuery query;
    double gold_base;
    std::vector<Link> gold_links;
    std::vector<Neighbour> neighbours;   // excludes gold and anchor
    std::vector<double> others_sorted;   // base scores of everyone else
  };
  MrrValueFunction() = default;
  double Boost(const std::vector<Link>& links, const Coalition& members) const;

  int players_ = 0;
  double beta_ = 0.3;
  std::shared_ptr<const std::vector<Prepared>> prepared_;
  std::vector<std::size_t> active_;
  std::size_t skipped_ = 0;
};

}  // namespace chronos::valuation

#endif  // CHRONOS_VALUATION_MRR_VALUE_H_
