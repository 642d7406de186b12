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

#ifndef CHRONOS_HARNESS_WORKLOAD_H_
#define CHRONOS_HARNESS_WORKLOAD_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "chronos/common/random.h"
#include "chronos/coordinator/coordinator.h"

namespace chronos::harness {

// lambda_q (1 + 0.5 sin(2 pi t / 24)) with t in hours.
double DiurnalRate(double mean_rate, double t_hours);

enum class EpochKind { kNull, kActive };

// Active iff the action releases something or a buyer query arrived.
EpochKind ClassifyEpoch(coordinator::Action action, std::size_t queries);

// Entities queried in the previous epoch plus the `reserve` most frequently
// queried entities so far, capped at `cap` by frequency. Ties in frequency
// go to the higher `prior` score, then the lower node id. Sorted output.
std::vector<uint32_t> BuildActiveScope(std::span<const uint32_t> previous_epoch,
                                       std::span<const uint64_t> frequency,
                                       std::span<const double> prior,
                                       std::size_t reserve, std::size_t cap);

// Zipf popularity over a seeded permutation of the nodes; every shift draws
// a new permutation.
class QueryWorkload {
 public:
  QueryWorkload(std::size_t nodes, double exponent,
                std::vector<std::size_t> shift_epochs, uint64_t seed);

  // Anchor for a query issued at `epoch`.
  uint32_t SampleAnchor(std::size_t epoch, Rng& rng);
  // Index of the popularity regime in force at `epoch`.
  std::size_t Regime(std::size_t epoch) const;

 private:
  void EnsureRegime(std::size_t regime);

  std::size_t nodes_;
  std::vector<std::size_t> shifts_;
  uint64_t seed_;
  std::discrete_distribution<std::size_t> rank_;
  std::vector<std::vector<uint32_t>> permutations_;
};

}  // namespace chronos::harness

#endif  // CHRONOS_HARNESS_WORKLOAD_H_
