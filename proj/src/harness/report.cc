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

#include "chronos/harness/report.h"

#include <cmath>
#include <fstream>

#include "chronos/common/error.h"
#include "chronos/index/recall.h"
#include "chronos/privacy/accountant.h"
#include "chronos/privacy/mechanisms.h"
#include "json.hpp"

namespace chronos::harness {

bool ArithmeticCheck::Discrepant(double tolerance) const {
  return std::abs(formula - printed) > tolerance;
}

std::vector<ArithmeticCheck> ArithmeticChecks() {
  std::vector<ArithmeticCheck> out;
  out.push_back({"conservative recall loss", "P=1408 dr=5.1e-4 lambda=0.05 dt=7", 0.251,
                 1 - index::RecallBoundConservative(1408, 5.1e-4, 0.05, 7, 1)});
  // The tight loss term is P * dr * (1 - e^{-lambda dt}) * envelope.
  out.push_back({"tight recall loss", "P=2240 dr=3.9e-4 (1-e^-lambda dt)=0.999 envelope=0.714",
                 0.128, 2240 * 3.9e-4 * 0.999 * 0.714});
  out.push_back({"settlement SNR", "W=7 phi=0.4 n=10 n_coal=5 B=0.2 sigma=50", 0.70,
                 privacy::SettlementSnr(7, 0.4, 10, 5, 0.2, 50)});
  out.push_back({"index-stats sensitivity", "1.5/n at n=10", 0.015,
                 privacy::IndexStatsSensitivity(10)});
  const int epochs = 2160, mechanisms = 3;
  const double sigma = 50, delta = 1e-6;
  const double rho = epochs * mechanisms / (2 * sigma * sigma);
  out.push_back({"worst-case epsilon", "2160 epochs x 3 mechanisms at sigma=50, delta=1e-6", 8.47,
                 privacy::ZcdpToEpsilon(rho, delta)});
  return out;
}

void WriteReportJson(const std::string& path, const std::vector<ArithmeticCheck>& checks,
                     const RunSummary* summary) {
  nlohmann::ordered_json j;
  j["schema"] = "chronos-report v1";
  auto& arr = j["arithmetic_checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"inputs", c.inputs},
                   {"printed", c.printed},
                   {"formula", c.formula},
                   {"discrepant", c.Discrepant()}});
  }
  if (summary != nullptr) {
    j["run"] = {{"epochs", summary->epochs},
                {"active_epochs", summary->active_epochs},
                {"releases", summary->releases},
                {"final_rho", summary->final_rho},
                {"final_eps", summary->final_eps},
                {"mean_recall", summary->mean_recall},
                {"final_recall", summary->final_recall},
                {"index_updates", summary->index_updates},
                {"revalues", summary->revalues},
                {"budget_overrides", summary->budget_overrides},
                {"recall_overrides", summary->recall_overrides},
                {"events", summary->events},
                {"budget_exhausted", summary->budget_exhausted}};
  }
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  f << j.dump(2) << "\n";
}

}  // namespace chronos::harness
