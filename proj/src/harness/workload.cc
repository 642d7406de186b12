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

#include "chronos/harness/workload.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "chronos/common/error.h"

namespace chronos::harness {

double DiurnalRate(double mean_rate, double t_hours) {
  Require(mean_rate > 0, "mean rate must be positive");
  return mean_rate * (1 + 0.5 * std::sin(2 * std::numbers::pi * t_hours / 24));
}

EpochKind ClassifyEpoch(coordinator::Action action, std::size_t queries) {
  return action != coordinator::Action::kNull || queries >= 1 ? EpochKind::kActive
                                                              : EpochKind::kNull;
}

std::vector<uint32_t> BuildActiveScope(std::span<const uint32_t> previous_epoch,
                                       std::span<const uint64_t> frequency,
                                       std::span<const double> prior,
                                       std::size_t reserve, std::size_t cap) {
  Require(prior.size() == frequency.size(), "prior and frequency sizes differ");
  Require(reserve <= cap, "reserve exceeds cap");
  const std::size_t n = frequency.size();
  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const auto before = [&](uint32_t a, uint32_t b) {
    if (frequency[a] != frequency[b]) return frequency[a] > frequency[b];
    if (prior[a] != prior[b]) return prior[a] > prior[b];
    return a < b;
  };
  std::sort(order.begin(), order.end(), before);

  std::vector<uint8_t> chosen(n, 0);
  for (std::size_t i = 0; i < std::min(reserve, n); ++i) chosen[order[i]] = 1;
  std::vector<uint32_t> recent;
  for (uint32_t v : previous_epoch) {
    Require(v < n, "queried entity out of range");
    if (!chosen[v]) recent.push_back(v);
  }
  std::sort(recent.begin(), recent.end(), before);
  recent.erase(std::unique(recent.begin(), recent.end()), recent.end());
  const std::size_t room = cap - std::min(reserve, n);
  if (recent.size() > room) recent.resize(room);
  for (uint32_t v : recent) chosen[v] = 1;

  std::vector<uint32_t> scope;
  for (uint32_t v = 0; v < n; ++v) {
    if (chosen[v]) scope.push_back(v);
  }
  return scope;
}

QueryWorkload::QueryWorkload(std::size_t nodes, double exponent,
                             std::vector<std::size_t> shift_epochs, uint64_t seed)
    : nodes_(nodes), shifts_(std::move(shift_epochs)), seed_(seed) {
  Require(nodes >= 1, "workload needs nodes");
  Require(exponent >= 0, "zipf exponent must be non-negative");
  std::sort(shifts_.begin(), shifts_.end());
  std::vector<double> w(nodes);
  for (std::size_t r = 0; r < nodes; ++r) w[r] = std::pow(static_cast<double>(r + 1), -exponent);
  rank_ = std::discrete_distribution<std::size_t>(w.begin(), w.end());
}

std::size_t QueryWorkload::Regime(std::size_t epoch) const {
  return static_cast<std::size_t>(
      std::upper_bound(shifts_.begin(), shifts_.end(), epoch) - shifts_.begin());
}

void QueryWorkload::EnsureRegime(std::size_t regime) {
  while (permutations_.size() <= regime) {
    std::vector<uint32_t> p(nodes_);
    std::iota(p.begin(), p.end(), 0u);
    Rng rng = MakeRng(seed_, "workload-regime", permutations_.size());
    std::shuffle(p.begin(), p.end(), rng);
    permutations_.push_back(std::move(p));
  }
}

uint32_t QueryWorkload::SampleAnchor(std::size_t epoch, Rng& rng) {
  const std::size_t regime = Regime(epoch);
  EnsureRegime(regime);
  return permutations_[regime][rank_(rng)];
}

}  // namespace chronos::harness
