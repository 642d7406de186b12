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

#ifndef CHRONOS_COORDINATOR_EXP3IX_H_
#define CHRONOS_COORDINATOR_EXP3IX_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chronos/common/random.h"

namespace chronos::coordinator {

// EXP3 with implicit exploration. Rewards in [0, 1]; losses are 1 - r.
class Exp3Ix {
 public:
  // eta = sqrt(ln d / (d T)), gamma = eta / 2.
  Exp3Ix(int arms, std::size_t horizon, uint64_t seed);
  Exp3Ix(int arms, double eta, double gamma, uint64_t seed);

  int arms() const { return static_cast<int>(p_.size()); }
  double eta() const { return eta_; }
  double gamma() const { return gamma_; }
  const std::vector<double>& probabilities() const { return p_; }
  const std::vector<double>& loss_estimates() const { return loss_; }

  int Sample();
  // Credits `reward` to `arm` using the probabilities it was sampled with.
  // Rewards outside [0, 1] are clamped and counted.
  void Update(int arm, double reward);
  std::size_t clamped_rewards() const { return clamped_; }

 private:
  void Refresh();

  double eta_;
  double gamma_;
  Rng rng_;
  std::vector<double> loss_;
  std::vector<double> p_;
  std::size_t clamped_ = 0;
};

}  // namespace chronos::coordinator

#endif  // CHRONOS_COORDINATOR_EXP3IX_H_
