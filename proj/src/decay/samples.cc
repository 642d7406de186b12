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

#include "chronos/decay/samples.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"
#include "chronos/common/random.h"

namespace chronos::decay {

double SurvivalCurve::operator()(double dt) const {
  return Sigmoid(1.0 - std::pow(std::max(0.0, dt) / tau, shape));
}

double SurvivalCurve::MeanOver(double window) const {
  Require(window > 0, "window must be > 0");
  // Composite Simpson with an even number of panels.
  const int n = 2000;
  const double h = window / n;
  double acc = (*this)(0) + (*this)(window);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * (*this)(i * h);
  return acc * h / 3.0 / window;
}

double SurvivalCurve::WindowForPositiveRate(double rate) const {
  Require(rate > 0 && rate < (*this)(0), "rate outside the curve's range");
  double lo = 1e-6, hi = tau;
  while (MeanOver(hi) > rate) hi *= 2;
  for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
    double mid = 0.5 * (lo + hi);
    (MeanOver(mid) > rate ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<DecaySample> SampleFromCurve(const SurvivalCurve& curve,
                                         std::size_t count, double window,
                                         uint64_t seed) {
  Require(window > 0, "window must be > 0");
  Rng rng = MakeRng(seed, "survival-samples");
  std::uniform_real_distribution<double> when(0.0, window);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<DecaySample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double dt = when(rng);
    out.push_back({dt, unif(rng) < curve(dt)});
  }
  return out;
}

std::vector<DecaySample> BuildTrainingPairs(const kg::TemporalKG& kg,
                                            const kg::ChangeLog& changes,
                                            const PairSamplingConfig& c) {
  Require(c.split_end > c.split_begin, "empty split window");
  Require(c.max_age > 0, "max_age must be > 0");
  Require(c.negative_ratio > 0, "negative_ratio must be > 0");
  std::vector<std::vector<double>> by_edge(kg.edge_count());
  for (const auto& e : changes) {
    if (e.unit < by_edge.size()) by_edge[e.unit].push_back(e.time);
  }
  for (auto& v : by_edge) std::sort(v.begin(), v.end());

  Rng rng = MakeRng(c.seed, "training-pairs");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<DecaySample> pos, neg;
  const auto edges = kg.edges();
  for (kg::EdgeId id = 0; id < edges.size(); ++id) {
    const double born = edges[id].t_created;
    const double lo = std::max(c.split_begin, born);
    const double hi = std::min(c.split_end, born + c.max_age);
    if (hi <= lo) continue;
    for (std::size_t q = 0; q < c.queries_per_edge; ++q) {
      const double when = lo + unif(rng) * (hi - lo);
      const auto& ch = by_edge[id];
      auto it = std::upper_bound(ch.begin(), ch.end(), born);
      const bool changed = it != ch.end() && *it <= when;
      (changed ? neg : pos).push_back({when - born, !changed});
    }
  }
  // Keep negative_ratio negatives per positive, trimming whichever side is
  // over-represented.
  std::shuffle(pos.begin(), pos.end(), rng);
  std::shuffle(neg.begin(), neg.end(), rng);
  const auto want_neg =
      static_cast<std::size_t>(std::llround(c.negative_ratio * pos.size()));
  if (neg.size() > want_neg) {
    neg.resize(want_neg);
  } else {
    pos.resize(std::min(
        pos.size(),
        static_cast<std::size_t>(std::llround(neg.size() / c.negative_ratio))));
  }
  pos.insert(pos.end(), neg.begin(), neg.end());
  return pos;
}

}  // namespace chronos::decay
