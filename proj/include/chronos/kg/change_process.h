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

#ifndef CHRONOS_KG_CHANGE_PROCESS_H_
#define CHRONOS_KG_CHANGE_PROCESS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "chronos/kg/temporal_kg.h"

namespace chronos::kg {

enum class ProcessKind { kPoisson, kHawkes, kSinusoidal, kBlockHomogeneous };

struct ChangeProcess {
  ProcessKind kind = ProcessKind::kPoisson;
  // Base rate in changes/day/unit (poisson, sinusoidal).
  double rate = 0.05;
  // Self-exciting parameters (rates per day).
  double hawkes_mu = 8.2;
  double hawkes_alpha = 5.6;
  double hawkes_beta = 8.0;
  // Sinusoidal modulation rate * (1 + 0.5 sin(2 pi t / period_days)).
  double period_days = 1.0;
  // Piecewise-constant rates cycled over blocks of block_days.
  std::vector<double> block_rates;
  double block_days = 1.0;

  static ChangeProcess Poisson(double rate);
  static ChangeProcess Hawkes(double mu, double alpha, double beta);
  static ChangeProcess Sinusoidal(double rate, double period_days);
  static ChangeProcess Blocks(std::vector<double> rates, double block_days);

  double BranchingRatio() const { return hawkes_alpha / hawkes_beta; }
  // Long-run mean events per day for one unit.
  double MeanRate() const;

  // Throws ParameterError for non-positive rates and StabilityError for a
  // self-exciting process with branching ratio >= 1.
  void Validate() const;
};

struct ChangeEvent {
  uint32_t unit = 0;  // edge id or shortcut id
  double time = 0;

  friend bool operator==(const ChangeEvent&, const ChangeEvent&) = default;
};

using ChangeLog = std::vector<ChangeEvent>;

// Independent change streams for each unit over [t_begin, t_end). Each unit
// draws from its own seeded stream, so the log for a unit does not depend on
// which other units are simulated. `rate_scale`, when non-empty, multiplies
// the base intensity of unit i (hawkes: mu only). Output sorted by time.
ChangeLog SimulateUnitChanges(std::span<const uint32_t> units,
                              const ChangeProcess& process, double t_begin,
                              double t_end, uint64_t seed,
                              std::span<const double> rate_scale = {});

// One stream per edge of `kg` over [0, horizon_days).
ChangeLog SimulateChanges(const TemporalKG& kg, const ChangeProcess& process,
                          double horizon_days, uint64_t seed);

}  // namespace chronos::kg

#endif  // CHRONOS_KG_CHANGE_PROCESS_H_
