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

#include "chronos/coordinator/exp3ix.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "chronos/common/error.h"

namespace chronos::coordinator {

Exp3Ix::Exp3Ix(int arms, std::size_t horizon, uint64_t seed)
    : Exp3Ix(arms,
             std::sqrt(std::log(static_cast<double>(std::max(arms, 2))) /
                       (static_cast<double>(arms) * static_cast<double>(std::max<std::size_t>(horizon, 1)))),
             0, seed) {
  Require(horizon >= 1, "horizon must be positive");
  gamma_ = eta_ / 2;
}

Exp3Ix::Exp3Ix(int arms, double eta, double gamma, uint64_t seed)
    : eta_(eta), gamma_(gamma), rng_(MakeRng(seed, "exp3ix")) {
  Require(arms >= 2, "bandit needs at least two arms");
  Require(eta > 0, "eta must be positive");
  Require(gamma >= 0, "gamma must be non-negative");
  loss_.assign(arms, 0.0);
  p_.assign(arms, 1.0 / arms);
}

int Exp3Ix::Sample() {
  std::discrete_distribution<int> pick(p_.begin(), p_.end());
  return pick(rng_);
}

void Exp3Ix::Update(int arm, double reward) {
  Require(arm >= 0 && arm < arms(), "arm out of range");
  if (!(reward >= 0 && reward <= 1)) {
    ++clamped_;
    reward = std::isnan(reward) ? 0.0 : std::clamp(reward, 0.0, 1.0);
  }
  loss_[arm] += (1 - reward) / (p_[arm] + gamma_);
  Refresh();
}

void Exp3Ix::Refresh() {
  const double lo = *std::min_element(loss_.begin(), loss_.end());
  double total = 0;
  for (std::size_t j = 0; j < p_.size(); ++j) {
    // Exponent capped so no arm underflows to exactly zero.
    p_[j] = std::exp(std::max(-eta_ * (loss_[j] - lo), -700.0));
    total += p_[j];
  }
  for (double& x : p_) x /= total;
}

}  // namespace chronos::coordinator
