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

#ifndef CHRONOS_HARNESS_REPORT_H_
#define CHRONOS_HARNESS_REPORT_H_

#include <string>
#include <vector>

#include "chronos/harness/simulation.h"

namespace chronos::harness {

// A published constant next to the value its own formula yields.
struct ArithmeticCheck {
  std::string name;
  std::string inputs;
  double printed = 0;
  double formula = 0;

  bool Discrepant(double tolerance = 0.005) const;
};

// Recall-bound, settlement-SNR, index-stats sensitivity and worst-case
// budget values, each evaluated through the library.
std::vector<ArithmeticCheck> ArithmeticChecks();

// JSON report: the checks plus, when given, a run summary.
void WriteReportJson(const std::string& path,
                     const std::vector<ArithmeticCheck>& checks,
                     const RunSummary* summary);

}  // namespace chronos::harness

#endif  // CHRONOS_HARNESS_REPORT_H_
