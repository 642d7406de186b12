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

#ifndef CHRONOS_CHANGEPOINT_METRICS_H_
#define CHRONOS_CHANGEPOINT_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace chronos::changepoint {

struct DetectorMetrics {
  double precision = 1;
  double recall = 0;
  double median_delay = 0;  // NaN when nothing matched
  double wasted_rho = 0;
  std::size_t matched = 0;
  std::size_t false_alarms = 0;
  // Set when nothing was declared; precision is then 1 by convention.
  bool precision_undefined = false;
  std::vector<double> delays;
};

// Greedy matching: each true event takes the earliest unused declaration in
// [truth, truth + match_window]. Unmatched declarations are false alarms and
// each costs `rho_per_false_alarm`.
DetectorMetrics EvaluateDetector(std::span<const long> declared,
                                 std::span<const long> truth, long match_window,
                                 double rho_per_false_alarm);

// Privacy cost of one triggered revaluation: releases * 1/(2 sigma^2).
double RevaluationRho(double sigma, int releases = 1);

}  // namespace chronos::changepoint

#endif  // CHRONOS_CHANGEPOINT_METRICS_H_
