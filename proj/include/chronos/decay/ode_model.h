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

#ifndef CHRONOS_DECAY_ODE_MODEL_H_
#define CHRONOS_DECAY_ODE_MODEL_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chronos::decay {

enum class Activation { kSoftplus, kIdentity };
enum class SolverKind { kRk4, kDormandPrince };

struct SolverConfig {
  SolverKind kind = SolverKind::kRk4;
  double step = 0.25;       // days, fixed-step RK4
  double tolerance = 1e-5;  // epsilon_solver; also the adaptive tolerance
};

// Weights of the vector field MLP: x = [h; t / time_scale] ->
// W3 act(W2 act(W1 x + b1) + b2) + b3, scaled by 1 / time_scale so the
// network works in normalised time.
struct MlpWeights {
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;

  int state_dim() const { return static_cast<int>(w3.rows()); }
  int hidden_dim() const { return static_cast<int>(w1.rows()); }
  int parameter_count() const;
  Eigen::VectorXd Flatten() const;
  void Unflatten(const Eigen::VectorXd& theta);
  static MlpWeights Zero(int state_dim, int hidden_dim);
};

// Decay function decay(dt) = sigmoid(h(dt)[0]) where dh/dt = f(h, t) and
// h(0) is the all-ones vector.
class OdeDecayModel {
 public:
  OdeDecayModel(int state_dim = 32, int hidden_dim = 32,
                double time_scale = 30.0,
                Activation activation = Activation::kSoftplus);

  // Small random weights; the output layer is shrunk so the untrained flow
  // stays close to h0.
  void InitializeRandom(uint64_t seed);

  MlpWeights& weights() { return weights_; }
  const MlpWeights& weights() const { return weights_; }
  SolverConfig& solver() { return solver_; }
  const SolverConfig& solver() const { return solver_; }
  double time_scale() const { return time_scale_; }
  Activation activation() const { return activation_; }
  int state_dim() const { return weights_.state_dim(); }
  int hidden_dim() const { return weights_.hidden_dim(); }

  Eigen::VectorXd InitialState() const;

  // Vector field f(h, t) in per-day units.
  Eigen::VectorXd Field(const Eigen::VectorXd& h, double t) const;
  // Jacobian of f with respect to h.
  Eigen::MatrixXd StateJacobian(const Eigen::VectorXd& h, double t) const;

  // State at dt using the configured solver. Throws ParameterError for
  // dt < 0 and NumericError when the state stops being finite.
  Eigen::VectorXd State(double dt) const;
  double Decay(double dt) const;

  // Decay at each of the ascending times, integrating once across them.
  std::vector<double> DecayAt(const std::vector<double>& times) const;

  // Integrates a state from t0 to t1 with the configured solver.
  Eigen::VectorXd Advance(const Eigen::VectorXd& h, double t0,
                          double t1) const;

  // Fixed-step RK4 with n = ceil(dt / step) equal steps.
  Eigen::VectorXd IntegrateRk4(double dt, double step) const;
  // Adaptive Dormand-Prince 5(4) with mixed absolute/relative tolerance.
  Eigen::VectorXd IntegrateDopri(double dt, double tolerance) const;

  void Save(const std::string& path) const;
  static OdeDecayModel Load(const std::string& path);

 private:
  Eigen::VectorXd Rk4Span(Eigen::VectorXd h, double t0, double t1,
                          double step) const;
  Eigen::VectorXd DopriSpan(Eigen::VectorXd h, double t0, double t1,
                            double tolerance) const;

  MlpWeights weights_;
  double time_scale_;
  Activation activation_;
  SolverConfig solver_;
};

// e^{-rate * dt}.
double ExponentialDecay(double rate, double dt);

}  // namespace chronos::decay

#endif  // CHRONOS_DECAY_ODE_MODEL_H_
