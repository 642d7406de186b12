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

#ifndef CHRONOS_COORDINATOR_COORDINATOR_H_
#define CHRONOS_COORDINATOR_COORDINATOR_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chronos/coordinator/exp3ix.h"
#include "chronos/privacy/accountant.h"

namespace chronos::coordinator {

enum class Action { kIndexUpdate = 0, kRevalue = 1, kNull = 2 };
inline constexpr int kActionCount = 3;
std::string_view ActionName(Action a);

struct CoordinatorState {
  double lambda_hat = 0;
  double recall_hat = 0;  // noisy, may leave [0, 1]
  double eps_rem = 0;
  int n_pending = 0;
  bool event_active = false;
};

struct RewardParams {
  double mu_r = 10;
  double nu = 5;
};

// clamp((qps_norm + mu_R clamp(R,0,1) - nu eps) / (1 + mu_R), 0, 1). NULL
// spends nothing, so its eps_consumed is ignored.
double Reward(const CoordinatorState& state, Action action, double qps_norm,
              double eps_consumed, const RewardParams& params = {});

// Queries served / running max of queries served.
class QpsNormalizer {
 public:
  double Normalize(double qps);

 private:
  double max_ = 0;
};

enum class OverrideKind { kNone, kBudget, kRecall };
std::string_view OverrideName(OverrideKind k);

struct OverrideDecision {
  Action action;
  OverrideKind kind;
  Action original;
};

// Budget first: an action whose projected eps spend exceeds eps_rem becomes
// NULL. Otherwise NULL under a recall violation becomes INDEX-UPDATE when the
// index update fits in the budget.
OverrideDecision ApplyOverrides(Action action, const CoordinatorState& state,
                                const std::array<double, kActionCount>& projected_eps,
                                double recall_floor);

struct OverrideEntry {
  int epoch;
  OverrideKind kind;
  Action original;
};

class OverrideLog {
 public:
  void Record(int epoch, const OverrideDecision& d);
  const std::vector<OverrideEntry>& entries() const { return entries_; }
  std::size_t count() const { return entries_.size(); }
  std::size_t count(OverrideKind k) const;

 private:
  std::vector<OverrideEntry> entries_;
};

// Projected eps increase of appending `rho` to the ledger.
double ProjectedEpsilon(const privacy::PrivacyAccountant& accountant, double rho);

struct RegretReport {
  double regret = 0;
  int best_arm = 0;
  std::vector<double> curve;  // R_t / sqrt(t ln t), t >= 2
};

// counterfactual[t][a] is the reward arm a would have earned at step t.
RegretReport EmpiricalRegret(const std::vector<int>& played,
                             const std::vector<std::vector<double>>& counterfactual);
// Without counterfactuals each arm is credited with its mean observed reward.
RegretReport EmpiricalRegret(const std::vector<int>& played,
                             const std::vector<double>& rewards, int arms);

struct CoordinatorConfig {
  std::size_t horizon = 2160;
  double recall_floor = 0.90;
  RewardParams reward;
};

struct DecisionRecord {
  int epoch = 0;
  std::array<double, kActionCount> p{};
  Action sampled = Action::kNull;
  Action action = Action::kNull;
  OverrideKind override_kind = OverrideKind::kNone;
  double reward = 0;
  double eps_rem = 0;
};

// One decision per epoch: sample, override, then feed back the reward.
class Coordinator {
 public:
  Coordinator(const CoordinatorConfig& config, uint64_t seed);

  DecisionRecord Decide(int epoch, const CoordinatorState& state,
                        const std::array<double, kActionCount>& projected_eps);
  // Credits the reward of the executed action to the sampled arm.
  void Feedback(double reward);

  const Exp3Ix& policy() const { return policy_; }
  const OverrideLog& overrides() const { return overrides_; }
  const std::vector<DecisionRecord>& log() const { return log_; }
  const CoordinatorConfig& config() const { return config_; }

 private:
  CoordinatorConfig config_;
  Exp3Ix policy_;
  OverrideLog overrides_;
  std::vector<DecisionRecord> log_;
  bool awaiting_feedback_ = false;
};

void WriteDecisionLogCsv(const std::string& path, const std::vector<DecisionRecord>& log);

}  // namespace chronos::coordinator

#endif  // CHRONOS_COORDINATOR_COORDINATOR_H_
