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

#ifndef CHRONOS_DECAY_TRAINING_H_
#define CHRONOS_DECAY_TRAINING_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "chronos/decay/ode_model.h"

namespace chronos::decay {

// A (pair, elapsed time) observation: positive when the pair is still
// relevant dt days after it was formed.
struct DecaySample {
  double dt = 0;
  bool positive = false;
};

// Sample counts per solver grid point; dt is rounded to the nearest multiple
// of `step`.
struct BinnedSamples {
  double step = 0.25;
  std::vector<double> positives;
  std::vector<double> negatives;
  double total = 0;

  static BinnedSamples FromSamples(const std::vector<DecaySample>& samples,
                                   double step);
};

// Mean contrastive loss -log decay on positives, -log(1 - decay) on
// negatives, with decay taken from the fixed-step RK4 trajectory. When `grad`
// is non-null it receives d loss / d theta (flattened weights), computed by
// reverse-mode differentiation through the solver steps.
double GridLoss(const OdeDecayModel& model, const BinnedSamples& bins,
                Eigen::VectorXd* grad = nullptr);

// Same loss evaluated at the exact sample times with the model's solver.
double SampleLoss(const OdeDecayModel& model,
                  const std::vector<DecaySample>& samples);

struct TrainingConfig {
  int epochs = 400;
  double lr = 1e-3;
  double step = 0.25;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
};

struct TrainingResult {
  OdeDecayModel model;
  double initial_loss = 0;
  double final_loss = 0;
  std::vector<double> loss_history;
};

// Full-batch Adam on GridLoss starting from `init`. Throws ParameterError
// when there are no positives and TrainingError on a non-finite loss.
TrainingResult TrainOde(const std::vector<DecaySample>& samples,
                        const TrainingConfig& config, OdeDecayModel init);

}  // namespace chronos::decay

#endif  // CHRONOS_DECAY_TRAINING_H_
