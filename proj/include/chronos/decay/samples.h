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

#ifndef CHRONOS_DECAY_SAMPLES_H_
#define CHRONOS_DECAY_SAMPLES_H_

#include <cstdint>
#include <vector>

#include "chronos/decay/training.h"
#include "chronos/kg/change_process.h"
#include "chronos/kg/temporal_kg.h"

namespace chronos::decay {

// Relevance curve sigmoid(1 - (dt / tau)^shape). It starts at sigmoid(1),
// the value an untrained flow from the all-ones state produces.
struct SurvivalCurve {
  double shape = 2.24;
  double tau = 22.8;  // days

  double operator()(double dt) const;
  // Mean of the curve over [0, window].
  double MeanOver(double window) const;
  // Window whose mean relevance equals `rate` (bisection).
  double WindowForPositiveRate(double rate) const;
};

// dt uniform on [0, window], label ~ Bernoulli(curve(dt)).
std::vector<DecaySample> SampleFromCurve(const SurvivalCurve& curve,
                                         std::size_t count, double window,
                                         uint64_t seed);

struct PairSamplingConfig {
  double split_begin = 0;   // query times drawn from [split_begin, split_end)
  double split_end = 0;
  double max_age = 90;      // ages beyond this are not sampled
  double negative_ratio = 3.0;
  std::size_t queries_per_edge = 1;
  uint64_t seed = 1;
};

// Labeled pairs from an edge change log: for an edge created at t_c and a
// query time q in the split window, the pair is positive iff the edge saw no
// change in (t_c, q]. Negatives are subsampled to negative_ratio per
// positive. Edges created after a query time are never used for it, so
// disjoint windows give a strict temporal split.
std::vector<DecaySample> BuildTrainingPairs(const kg::TemporalKG& kg,
                                            const kg::ChangeLog& changes,
                                            const PairSamplingConfig& config);

}  // namespace chronos::decay

#endif  // CHRONOS_DECAY_SAMPLES_H_
