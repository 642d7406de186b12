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

#include "chronos/changepoint/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"

namespace chronos::changepoint {

DetectorMetrics EvaluateDetector(std::span<const long> declared,
                                 std::span<const long> truth, long match_window,
                                 double rho_per_false_alarm) {
  Require(match_window >= 0, "match_window must be non-negative");
  Require(rho_per_false_alarm >= 0, "rho cost must be non-negative");
  std::vector<long> d(declared.begin(), declared.end());
  std::vector<long> tr(truth.begin(), truth.end());
  std::sort(d.begin(), d.end());
  std::sort(tr.begin(), tr.end());
  std::vector<bool> used(d.size(), false);

  DetectorMetrics m;
  for (long t : tr) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (used[i] || d[i] < t) continue;
      if (d[i] > t + match_window) break;
      used[i] = true;
      ++m.matched;
      m.delays.push_back(static_cast<double>(d[i] - t));
      break;
    }
  }
  m.false_alarms = d.size() - m.matched;
  m.recall = tr.empty() ? 1.0 : static_cast<double>(m.matched) / tr.size();
  if (d.empty()) {
    m.precision = 1;
    m.precision_undefined = true;
  } else {
    m.precision = static_cast<double>(m.matched) / d.size();
  }
  m.median_delay = m.delays.empty() ? std::numeric_limits<double>::quiet_NaN()
                                    : Quantile(m.delays, 0.5);
  m.wasted_rho = static_cast<double>(m.false_alarms) * rho_per_false_alarm;
  return m;
}

double RevaluationRho(double sigma, int releases) {
  Require(sigma > 0, "sigma must be positive");
  Require(releases >= 0, "release count must be non-negative");
  return releases / (2 * sigma * sigma);
}

}  // namespace chronos::changepoint
