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

#include "chronos/coordinator/coordinator.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"

namespace chronos::coordinator {

std::string_view ActionName(Action a) {
  switch (a) {
    case Action::kIndexUpdate:
      return "index-update";
    case Action::kRevalue:
      return "revalue";
    case Action::kNull:
      return "null";
  }
  return "?";
}

std::string_view OverrideName(OverrideKind k) {
  switch (k) {
    case OverrideKind::kNone:
      return "none";
    case OverrideKind::kBudget:
      return "budget";
    case OverrideKind::kRecall:
      return "recall";
  }
  return "?";
}

double Reward(const CoordinatorState& state, Action action, double qps_norm,
              double eps_consumed, const RewardParams& params) {
  Require(qps_norm >= 0 && qps_norm <= 1, "qps_norm must lie in [0, 1]");
  Require(params.mu_r >= 0 && params.nu >= 0, "reward weights must be non-negative");
  const double spend = action == Action::kNull ? 0.0 : eps_consumed;
  const double raw = qps_norm + params.mu_r * Clamp01(state.recall_hat) - params.nu * spend;
  return Clamp01(raw / (1 + params.mu_r));
}

double QpsNormalizer::Normalize(double qps) {
  Require(qps >= 0, "qps must be non-negative");
  max_ = std::max(max_, qps);
  return max_ > 0 ? qps / max_ : 0.0;
}

OverrideDecision ApplyOverrides(Action action, const CoordinatorState& state,
                                const std::array<double, kActionCount>& projected_eps,
                                double recall_floor) {
  const auto spend = [&](Action a) { return projected_eps[static_cast<int>(a)]; };
  if (spend(action) > state.eps_rem) return {Action::kNull, OverrideKind::kBudget, action};
  if (action == Action::kNull && state.recall_hat < recall_floor &&
      spend(Action::kIndexUpdate) <= state.eps_rem) {
    return {Action::kIndexUpdate, OverrideKind::kRecall, action};
  }
  return {action, OverrideKind::kNone, action};
}

void OverrideLog::Record(int epoch, const OverrideDecision& d) {
  if (d.kind != OverrideKind::kNone) entries_.push_back({epoch, d.kind, d.original});
}

std::size_t OverrideLog::count(OverrideKind k) const {
  return std::count_if(entries_.begin(), entries_.end(),
                       [k](const OverrideEntry& e) { return e.kind == k; });
}

double ProjectedEpsilon(const privacy::PrivacyAccountant& accountant, double rho) {
  Require(rho >= 0, "rho must be non-negative");
  if (rho == 0) return 0;
  return accountant.EpsilonIfAdded(rho) - accountant.ZcdpEpsilon();
}

namespace {

RegretReport Finish(const std::vector<double>& arm_totals, const std::vector<double>& played_prefix,
                    const std::vector<std::vector<double>>& arm_prefix) {
  RegretReport r;
  const std::size_t t_max = played_prefix.size();
  r.best_arm = static_cast<int>(std::max_element(arm_totals.begin(), arm_totals.end()) -
                                arm_totals.begin());
  r.regret = t_max ? arm_totals[r.best_arm] - played_prefix.back() : 0.0;
  for (std::size_t t = 2; t <= t_max; ++t) {
    double best = arm_prefix[0][t - 1];
    for (const auto& a : arm_prefix) best = std::max(best, a[t - 1]);
    const double td = static_cast<double>(t);
    r.curve.push_back((best - played_prefix[t - 1]) / std::sqrt(td * std::log(td)));
  }
  return r;
}

}  // namespace

RegretReport EmpiricalRegret(const std::vector<int>& played,
                             const std::vector<std::vector<double>>& counterfactual) {
  Require(played.size() == counterfactual.size(), "one counterfactual row per step");
  if (played.empty()) return {};
  const std::size_t arms = counterfactual[0].size();
  std::vector<std::vector<double>> prefix(arms, std::vector<double>(played.size()));
  std::vector<double> played_prefix(played.size());
  std::vector<double> acc(arms, 0);
  double got = 0;
  for (std::size_t t = 0; t < played.size(); ++t) {
    Require(counterfactual[t].size() == arms, "ragged counterfactual rows");
    Require(played[t] >= 0 && static_cast<std::size_t>(played[t]) < arms, "arm out of range");
    for (std::size_t a = 0; a < arms; ++a) {
      acc[a] += counterfactual[t][a];
      prefix[a][t] = acc[a];
    }
    got += counterfactual[t][played[t]];
    played_prefix[t] = got;
  }
  return Finish(acc, played_prefix, prefix);
}

RegretReport EmpiricalRegret(const std::vector<int>& played,
                             const std::vector<double>& rewards, int arms) {
  Require(played.size() == rewards.size(), "one reward per step");
  Require(arms >= 1, "need at least one arm");
  std::vector<double> sum(arms, 0), n(arms, 0);
  for (std::size_t t = 0; t < played.size(); ++t) {
    Require(played[t] >= 0 && played[t] < arms, "arm out of range");
    sum[played[t]] += rewards[t];
    n[played[t]] += 1;
  }
  std::vector<std::vector<double>> replay(played.size(), std::vector<double>(arms));
  for (std::size_t t = 0; t < played.size(); ++t) {
    for (int a = 0; a < arms; ++a) replay[t][a] = n[a] > 0 ? sum[a] / n[a] : 0.0;
    replay[t][played[t]] = rewards[t];
  }
  return EmpiricalRegret(played, replay);
}

Coordinator::Coordinator(const CoordinatorConfig& config, uint64_t seed)
    : config_(config), policy_(kActionCount, config.horizon, seed) {
  Require(config.recall_floor >= 0 && config.recall_floor <= 1,
          "recall_floor must lie in [0, 1]");
}

DecisionRecord Coordinator::Decide(int epoch, const CoordinatorState& state,
                                   const std::array<double, kActionCount>& projected_eps) {
  Require(!awaiting_feedback_, "previous decision has no feedback yet");
  Require(state.eps_rem >= 0, "eps_rem must be non-negative");
  DecisionRecord rec;
  rec.epoch = epoch;
  std::copy(policy_.probabilities().begin(), policy_.probabilities().end(), rec.p.begin());
  rec.sampled = static_cast<Action>(policy_.Sample());
  const OverrideDecision d =
      ApplyOverrides(rec.sampled, state, projected_eps, config_.recall_floor);
  if (projected_eps[static_cast<int>(d.action)] > state.eps_rem) {
    throw ContractViolation("override left a budget-violating action");
  }
  overrides_.Record(epoch, d);
  rec.action = d.action;
  rec.override_kind = d.kind;
  rec.eps_rem = state.eps_rem;
  log_.push_back(rec);
  awaiting_feedback_ = true;
  return rec;
}

void Coordinator::Feedback(double reward) {
  Require(awaiting_feedback_, "feedback without a pending decision");
  policy_.Update(static_cast<int>(log_.back().sampled), reward);
  log_.back().reward = reward;
  awaiting_feedback_ = false;
}

void WriteDecisionLogCsv(const std::string& path, const std::vector<DecisionRecord>& log) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(8);
  out << "epoch,p_index,p_revalue,p_null,action,override,reward,eps_rem\n";
  for (const auto& r : log) {
    out << r.epoch << ',' << r.p[0] << ',' << r.p[1] << ',' << r.p[2] << ','
        << ActionName(r.action) << ',' << OverrideName(r.override_kind) << ','
        << r.reward << ',' << r.eps_rem << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace chronos::coordinator
