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

#ifndef CHRONOS_HARNESS_CONFIG_H_
#define CHRONOS_HARNESS_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chronos/changepoint/bocpd.h"
#include "chronos/kg/generator.h"

namespace chronos::harness {

enum class NoiseSchedule { kFixed, kAdaptive };
enum class PolicyKind { kCoordinator, kRoundRobin };

std::string_view ScheduleName(NoiseSchedule s);
NoiseSchedule ParseSchedule(std::string_view name);
std::string_view PolicyName(PolicyKind p);
PolicyKind ParsePolicy(std::string_view name);

// Desk-scale synthetic KG: 2000 nodes, launch half-way through a 180-day
// window so that private edges keep arriving over a 90-day run.
kg::SyntheticKgConfig DefaultKgConfig();

struct SimulationConfig {
  std::size_t horizon = 2160;
  int epochs_per_day = 24;
  kg::SyntheticKgConfig kg = DefaultKgConfig();

  int n_sellers = 10;
  double seller_skew = 0.3;

  double beta = 0.3;
  int ef = 128;
  int k = 10;
  int m = 16;

  double sigma0 = 50;
  NoiseSchedule schedule = NoiseSchedule::kAdaptive;
  std::size_t t_active_plan = 2160;  // T_active used by the adaptive schedule
  double eps_total = 4.25;
  double delta = 1e-6;
  // Index-stats sensitivity; 0 selects 1.5 / n.
  double idx_sensitivity = 0;
  double clip_bound = 0.2;
  double affinity_eta = 1;

  double query_rate = 0.45;  // mean buyer queries per epoch
  bool diurnal = true;
  double zipf_exponent = 1.0;
  // Epochs at which buyer interest moves to a different set of entities.
  std::vector<std::size_t> workload_shifts = {720, 1440};
  double change_rate = 0.02;  // Poisson changes per shortcut per day

  PolicyKind policy = PolicyKind::kCoordinator;
  bool enforce_budget = true;
  // Fire all three mechanisms every epoch (worst-case ledger).
  bool force_all_active = false;
  double recall_floor = 0.90;

  int recall_every = 10;
  std::size_t recall_queries = 100;
  std::size_t reserve = 500;
  std::size_t active_cap = 1500;

  std::size_t valuation_permutations = 200;
  std::size_t valuation_window = 100;  // latest queries of a segment valued
  changepoint::BocpdConfig bocpd;

  uint64_t seed = 42;

  void Validate() const;
  // Sensitivity actually used for index-stats releases.
  double IndexStatsSensitivity() const;
};

}  // namespace chronos::harness

#endif  // CHRONOS_HARNESS_CONFIG_H_
