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

#ifndef CHRONOS_HARNESS_SIMULATION_H_
#define CHRONOS_HARNESS_SIMULATION_H_

#include <cstddef>
#include <string>
#include <vector>

#include "chronos/changepoint/bocpd.h"
#include "chronos/coordinator/coordinator.h"
#include "chronos/harness/config.h"
#include "chronos/index/affinity.h"
#include "chronos/index/hybrid_index.h"
#include "chronos/privacy/accountant.h"
#include "chronos/valuation/shapley.h"

namespace chronos::harness {

struct MetricsRecord {
  std::size_t epoch = 0;
  double recall = 0;           // latest measurement
  bool recall_measured = false;
  std::size_t queries = 0;
  double eps_cum = 0;
  double rho_cum = 0;
  double stale_fraction = 0;
  coordinator::Action action = coordinator::Action::kNull;
  coordinator::OverrideKind override_kind = coordinator::OverrideKind::kNone;
  bool active = false;
  double sigma = 0;
  int events = 0;              // events declared so far
  int mpv_snapshot = -1;       // index into valuation reports, -1 if none
};

struct RunSummary {
  std::size_t epochs = 0;
  std::size_t active_epochs = 0;
  std::size_t releases = 0;
  double final_rho = 0;
  double final_eps = 0;
  double mean_recall = 0;      // over measured epochs
  double final_recall = 0;
  std::size_t index_updates = 0;
  std::size_t revalues = 0;
  std::size_t budget_overrides = 0;
  std::size_t recall_overrides = 0;
  std::size_t skipped_affinity = 0;
  int events = 0;
  bool budget_exhausted = false;
};

struct RunResult {
  SimulationConfig config;
  std::vector<MetricsRecord> metrics;
  privacy::PrivacyAccountant accountant;
  std::vector<coordinator::DecisionRecord> decisions;
  std::vector<valuation::MpvScores> valuations;
  std::vector<changepoint::EventRecord> events;
  RunSummary summary;
};

// Everything a query may read when it is served: the public index, the
// current misleading-link mask and the last released affinity matrix.
struct ServingView {
  const index::HybridIndex* index = nullptr;
  const std::vector<uint8_t>* misleading = nullptr;
  const Eigen::MatrixXd* affinity = nullptr;  // null before the first release
  const index::AffinityLayout* layout = nullptr;
  double beta = 0;
  int k = 10;
  int ef = 128;
};

std::vector<index::SearchResult> ServeQuery(const ServingView& view,
                                            const Eigen::VectorXd& query,
                                            int anchor);

// Runs the epoch loop. Deterministic for a given config (seed included).
RunResult RunSimulation(const SimulationConfig& config);

// Recomputes the summary from metrics rows alone.
RunSummary Summarize(const std::vector<MetricsRecord>& metrics);

inline constexpr const char* kMetricsSchema = "# chronos-metrics v1";

// Writes metrics.csv, transcript.csv, decisions.csv, valuation.csv,
// events.csv and summary.json into `dir`. Throws IoError on failure.
void ExportRun(const RunResult& run, const std::string& dir);
void WriteMetricsCsv(const std::string& path, const std::vector<MetricsRecord>& metrics);
std::vector<MetricsRecord> ReadMetricsCsv(const std::string& path);
void WriteSummaryJson(const std::string& path, const RunSummary& summary);
RunSummary ReadSummaryJson(const std::string& path);

}  // namespace chronos::harness

#endif  // CHRONOS_HARNESS_SIMULATION_H_
