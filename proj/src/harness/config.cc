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

#include "chronos/harness/config.h"

#include "chronos/common/error.h"

namespace chronos::harness {

std::string_view ScheduleName(NoiseSchedule s) {
  return s == NoiseSchedule::kFixed ? "fixed" : "adaptive";
}

NoiseSchedule ParseSchedule(std::string_view name) {
  if (name == "fixed") return NoiseSchedule::kFixed;
  if (name == "adaptive") return NoiseSchedule::kAdaptive;
  throw ParameterError("unknown schedule: " + std::string(name));
}

std::string_view PolicyName(PolicyKind p) {
  return p == PolicyKind::kCoordinator ? "coordinator" : "round-robin";
}

PolicyKind ParsePolicy(std::string_view name) {
  if (name == "coordinator") return PolicyKind::kCoordinator;
  if (name == "round-robin") return PolicyKind::kRoundRobin;
  throw ParameterError("unknown policy: " + std::string(name));
}

kg::SyntheticKgConfig DefaultKgConfig() {
  kg::SyntheticKgConfig c;
  c.n_nodes = 2000;
  c.n_edges = 20000;
  c.window_days = 180;
  c.launch_quantile = 0.5;
  return c;
}

void SimulationConfig::Validate() const {
  Require(epochs_per_day >= 1, "epochs_per_day must be >= 1");
  Require(n_sellers >= 2, "need at least two sellers");
  Require(beta >= 0 && beta <= 1, "beta must lie in [0, 1]");
  Require(k >= 1 && ef >= k, "need 1 <= k <= ef");
  Require(m >= 2, "m must be >= 2");
  Require(sigma0 > 0, "sigma0 must be positive");
  Require(t_active_plan >= 1, "t_active_plan must be >= 1");
  Require(eps_total > 0, "eps_total must be positive");
  Require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
  Require(idx_sensitivity >= 0, "idx_sensitivity must be non-negative");
  Require(clip_bound > 0, "clip_bound must be positive");
  Require(affinity_eta > 0, "affinity_eta must be positive");
  Require(query_rate > 0, "query_rate must be positive");
  Require(zipf_exponent >= 0, "zipf_exponent must be non-negative");
  Require(change_rate >= 0, "change_rate must be non-negative");
  Require(recall_floor >= 0 && recall_floor <= 1, "recall_floor must lie in [0, 1]");
  Require(recall_every >= 1, "recall_every must be >= 1");
  Require(recall_queries >= 1, "recall_queries must be >= 1");
  Require(active_cap >= 1 && reserve <= active_cap, "need reserve <= active_cap");
  Require(valuation_permutations >= 1, "valuation_permutations must be >= 1");
  Require(valuation_window >= 1, "valuation_window must be >= 1");
  Require(kg.n_nodes >= 2 && kg.n_edges >= 1, "kg must be non-trivial");
  Require(kg.launch_quantile > 0 && kg.launch_quantile < 1,
          "launch_quantile must lie in (0, 1)");
  bocpd.Validate();
}

double SimulationConfig::IndexStatsSensitivity() const {
  return idx_sensitivity > 0 ? idx_sensitivity : 1.5 / n_sellers;
}

}  // namespace chronos::harness
