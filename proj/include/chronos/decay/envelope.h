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

#ifndef CHRONOS_DECAY_ENVELOPE_H_
#define CHRONOS_DECAY_ENVELOPE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chronos/decay/ode_model.h"

namespace chronos::decay {

// Running minimum of `decay` over a grid on [0, dt] with spacing <= grid_step
// (the grid always contains dt itself).
double MonotoneEnvelope(const std::function<double(double)>& decay, double dt,
                        double grid_step = 0.1);
double MonotoneEnvelope(const OdeDecayModel& model, double dt,
                        double grid_step = 0.1);

// max(0, envelope - eps_solver * exp(lipschitz * dt)).
double CertifiedValue(double envelope, double dt, double lipschitz,
                      double eps_solver);
double CertifiedEnvelope(const OdeDecayModel& model, double dt,
                         double lipschitz, double eps_solver,
                         double grid_step = 0.1);

struct EnvelopeRow {
  double dt = 0;
  double decay = 0;
  double envelope = 0;
  double certified = 0;
};

// Tabulated decay / envelope / certified envelope with linear lookup.
class EnvelopeCertificate {
 public:
  EnvelopeCertificate() = default;
  static EnvelopeCertificate Build(const OdeDecayModel& model, double max_dt,
                                   double grid_step, double lipschitz,
                                   double eps_solver);
  // Same table from an arbitrary decay curve (used for baselines).
  static EnvelopeCertificate FromFunction(
      const std::function<double(double)>& decay, double max_dt,
      double grid_step, double lipschitz, double eps_solver);

  const std::vector<EnvelopeRow>& rows() const { return rows_; }
  double lipschitz() const { return lipschitz_; }
  double eps_solver() const { return eps_solver_; }
  double grid_step() const { return grid_step_; }
  double max_dt() const { return rows_.empty() ? 0 : rows_.back().dt; }

  // Lookups clamp dt to [0, max_dt] and interpolate linearly. The envelope
  // lookup stays non-increasing because the tabulated values are.
  double Decay(double dt) const;
  double Envelope(double dt) const;
  double Certified(double dt) const;

  // Largest relative rise decay(t2)/decay(t1) - 1 over t2 > t1 on the grid.
  double MonotonicityViolation() const;
  // Largest |d decay / dt| on the grid (empirical K_decay).
  double MaxSlope() const;

  // CSV `dt,envelope,certified`.
  void WriteCsv(const std::string& path) const;

 private:
  double Lookup(double dt, double EnvelopeRow::*field) const;

  std::vector<EnvelopeRow> rows_;
  double lipschitz_ = 0;
  double eps_solver_ = 0;
  double grid_step_ = 0.1;
};

struct LipschitzEstimate {
  double estimate = 0;     // sampled lower estimate
  double certificate = 0;  // product of layer spectral norms
};

// Samples states along the h0 trajectory on [0, max_dt] plus random
// perturbations, taking the largest difference quotient and Jacobian norm
// seen; the certificate bounds the field's Lipschitz constant in h globally.
// Both are in per-day units.
LipschitzEstimate EstimateLipschitz(const OdeDecayModel& model,
                                    int sample_count, double max_dt,
                                    uint64_t seed);

}  // namespace chronos::decay

#endif  // CHRONOS_DECAY_ENVELOPE_H_
