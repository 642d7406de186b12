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

#include "chronos/valuation/mrr_value.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"
#include "chronos/common/random.h"

namespace chronos::valuation {

std::vector<ValuationQuery> SampleWorkload(const kg::TemporalKG& kg,
                                           const kg::SellerPartition& sellers,
                                           std::size_t count, double max_lag,
                                           uint64_t seed) {
  Require(max_lag >= 0, "max_lag must be non-negative");
  std::vector<kg::EdgeId> pool;
  for (const auto& d : sellers.datasets) pool.insert(pool.end(), d.begin(), d.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  Require(!pool.empty(), "no seller edges to draw queries from");
  Rng rng = MakeRng(seed, "valuation-workload");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> lag(0.0, max_lag);
  std::vector<ValuationQuery> out;
  out.reserve(count);
  while (out.size() < count) {
    const kg::Edge& e = kg.edge(pool[pick(rng)]);
    if (e.u == e.v) continue;
    out.push_back({e.u, e.v, e.t_created + lag(rng), 0});
  }
  return out;
}

MrrValueFunction::MrrValueFunction(const kg::TemporalKG& kg,
                                   const kg::SellerPartition& sellers,
                                   std::vector<ValuationQuery> workload,
                                   const MrrConfig& config)
    : players_(sellers.n), beta_(config.beta) {
  Require(config.beta >= 0 && config.beta <= 1, "beta must lie in [0, 1]");
  Require(!workload.empty(), "valuation workload is empty");
  Require(sellers.n >= 1 && sellers.n < 65536, "seller count out of range");
  const std::size_t n = kg.node_count();

  std::unordered_map<kg::EdgeId, std::vector<uint16_t>> claimants;
  for (int s = 0; s < sellers.n; ++s) {
    for (kg::EdgeId id : sellers.datasets[s]) claimants[id].push_back(static_cast<uint16_t>(s));
  }
  // Edges by endpoint, both directions.
  std::vector<std::vector<kg::EdgeId>> incident(n);
  const auto edges = kg.edges();
  for (std::size_t id = 0; id < edges.size(); ++id) {
    if (edges[id].u == edges[id].v) continue;
    incident[edges[id].u].push_back(static_cast<kg::EdgeId>(id));
    incident[edges[id].v].push_back(static_cast<kg::EdgeId>(id));
  }
  kg::EmbeddingMatrix unit = kg.embeddings();
  for (Eigen::Index r = 0; r < unit.rows(); ++r) {
    const double norm = unit.row(r).norm();
    if (norm > 0) unit.row(r) /= norm;
  }

  auto prepared = std::make_shared<std::vector<Prepared>>();
  for (const auto& q : workload) {
    if (q.anchor >= n || q.gold >= n || q.anchor == q.gold) {
      ++skipped_;
      continue;
    }
    Prepared p;
    p.query = q;
    const Eigen::VectorXd cos = unit * unit.row(q.anchor).transpose();
    std::unordered_map<uint32_t, std::vector<Link>> links;
    for (kg::EdgeId id : incident[q.anchor]) {
      const kg::Edge& e = edges[id];
      if (e.t_created > q.time) continue;
      const uint32_t other = e.u == q.anchor ? e.v : e.u;
      const double w = config.decay ? Clamp01(config.decay(q.time - e.t_created)) : 1.0;
      Link link{w, e.is_public(), {}};
      if (!link.is_public) {
        auto it = claimants.find(id);
        if (it == claimants.end()) continue;  // unclaimed private edge
        link.claimants = it->second;
      }
      links[other].push_back(std::move(link));
    }
    p.gold_base = (1 - beta_) * cos[q.gold];
    if (auto it = links.find(q.gold); it != links.end()) p.gold_links = it->second;
    for (uint32_t c = 0; c < n; ++c) {
      if (c == q.anchor || c == q.gold) continue;
      const double base = (1 - beta_) * cos[c];
      auto it = links.find(c);
      if (it == links.end()) {
        p.others_sorted.push_back(base);
      } else {
        p.neighbours.push_back({c, base, it->second});
      }
    }
    std::sort(p.others_sorted.begin(), p.others_sorted.end());
    prepared->push_back(std::move(p));
  }
  Require(!prepared->empty(), "no valid queries in the valuation workload");
  active_.resize(prepared->size());
  for (std::size_t i = 0; i < active_.size(); ++i) active_[i] = i;
  prepared_ = std::move(prepared);
}

std::size_t MrrValueFunction::total_queries() const { return prepared_->size(); }

double MrrValueFunction::Boost(const std::vector<Link>& links,
                               const Coalition& members) const {
  double best = 0;
  for (const auto& l : links) {
    if (l.weight <= best) continue;
    bool available = l.is_public;
    for (uint16_t s : l.claimants) {
      if (members[s]) {
        available = true;
        break;
      }
    }
    if (available) best = l.weight;
  }
  return beta_ * best;
}

double MrrValueFunction::ReciprocalRank(std::size_t active_index,
                                        const Coalition& members) const {
  const Prepared& p = (*prepared_)[active_[active_index]];
  const double gold = p.gold_base + Boost(p.gold_links, members);
  // Strictly better competitors; ties go to the gold node.
  std::size_t ahead = p.others_sorted.end() -
                      std::upper_bound(p.others_sorted.begin(), p.others_sorted.end(), gold);
  for (const auto& nb : p.neighbours) {
    if (nb.base + Boost(nb.links, members) > gold) ++ahead;
  }
  return 1.0 / static_cast<double>(ahead + 1);
}

double MrrValueFunction::Value(const Coalition& members) const {
  Require(static_cast<int>(members.size()) == players_, "coalition size mismatch");
  CompensatedSum sum;
  for (std::size_t i = 0; i < active_.size(); ++i) sum.Add(ReciprocalRank(i, members));
  return sum.value() / static_cast<double>(active_.size());
}

MrrValueFunction MrrValueFunction::ForSegment(int segment) const {
  MrrValueFunction out = *this;
  out.active_.clear();
  for (std::size_t i : active_) {
    if ((*prepared_)[i].query.segment == segment) out.active_.push_back(i);
  }
  Require(!out.active_.empty(), "event segment has no queries");
  return out;
}

MrrValueFunction MrrValueFunction::Subsample(double fraction, uint64_t seed) const {
  Require(fraction > 0 && fraction <= 1, "subsample fraction must lie in (0, 1]");
  MrrValueFunction out = *this;
  out.active_ = active_;
  Rng rng = MakeRng(seed, "valuation-proxy");
  std::shuffle(out.active_.begin(), out.active_.end(), rng);
  const std::size_t keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(fraction * active_.size())));
  out.active_.resize(keep);
  std::sort(out.active_.begin(), out.active_.end());
  return out;
}

}  // namespace chronos::valuation
