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

#include "chronos/decay/training.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"

namespace chronos::decay {
namespace {

// Forward cache and vector-Jacobian product of the field MLP.
class FieldVjp {
 public:
  FieldVjp(const OdeDecayModel& model, MlpWeights* grad)
      : model_(model), w_(model.weights()), grad_(grad) {}

  // Returns d<gbar, f(h,t)>/dh and accumulates the weight gradient.
  Eigen::VectorXd Apply(const Eigen::VectorXd& h, double t,
                        const Eigen::VectorXd& gbar) {
    const int s = model_.state_dim();
    const double tau = model_.time_scale();
    const bool soft = model_.activation() == Activation::kSoftplus;
    Eigen::VectorXd x(s + 1);
    x.head(s) = h;
    x[s] = t / tau;
    Eigen::VectorXd z1 = w_.w1 * x + w_.b1;
    Eigen::VectorXd a1 = soft ? z1.unaryExpr(&Softplus) : z1;
    Eigen::VectorXd z2 = w_.w2 * a1 + w_.b2;
    Eigen::VectorXd a2 = soft ? z2.unaryExpr(&Softplus) : z2;

    Eigen::VectorXd go = gbar / tau;
    grad_->w3.noalias() += go * a2.transpose();
    grad_->b3 += go;
    Eigen::VectorXd g2 = w_.w3.transpose() * go;
    if (soft) g2.array() *= z2.unaryExpr(&Sigmoid).array();
    grad_->w2.noalias() += g2 * a1.transpose();
    grad_->b2 += g2;
    Eigen::VectorXd g1 = w_.w2.transpose() * g2;
    if (soft) g1.array() *= z1.unaryExpr(&Sigmoid).array();
    grad_->w1.noalias() += g1 * x.transpose();
    grad_->b1 += g1;
    return (w_.w1.leftCols(s).transpose() * g1);
  }

 private:
  const OdeDecayModel& model_;
  const MlpWeights& w_;
  MlpWeights* grad_;
};

}  // namespace

BinnedSamples BinnedSamples::FromSamples(
    const std::vector<DecaySample>& samples, double step) {
  Require(step > 0, "bin step must be > 0");
  BinnedSamples b;
  b.step = step;
  for (const DecaySample& s : samples) {
    Require(s.dt >= 0 && std::isfinite(s.dt), "sample dt must be >= 0");
    auto k = static_cast<std::size_t>(std::llround(s.dt / step));
    if (k >= b.positives.size()) {
      b.positives.resize(k + 1, 0.0);
      b.negatives.resize(k + 1, 0.0);
    }
    (s.positive ? b.positives : b.negatives)[k] += 1;
    b.total += 1;
  }
  return b;
}

double GridLoss(const OdeDecayModel& model, const BinnedSamples& bins,
                Eigen::VectorXd* grad) {
  Require(bins.total > 0, "no training samples");
  const std::size_t n_grid = bins.positives.size();
  const double dt = bins.step;
  const int s = model.state_dim();

  // Forward: states on the grid and the stage inputs of every step.
  std::vector<Eigen::VectorXd> states(n_grid);
  std::vector<std::array<Eigen::VectorXd, 4>> stages(n_grid > 0 ? n_grid - 1 : 0);
  states[0] = model.InitialState();
  for (std::size_t k = 0; k + 1 < n_grid; ++k) {
    const double t = k * dt;
    const Eigen::VectorXd& h = states[k];
    auto& y = stages[k];
    y[0] = h;
    Eigen::VectorXd k1 = model.Field(y[0], t);
    y[1] = h + 0.5 * dt * k1;
    Eigen::VectorXd k2 = model.Field(y[1], t + 0.5 * dt);
    y[2] = h + 0.5 * dt * k2;
    Eigen::VectorXd k3 = model.Field(y[2], t + 0.5 * dt);
    y[3] = h + dt * k3;
    Eigen::VectorXd k4 = model.Field(y[3], t + dt);
    states[k + 1] = h + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!states[k + 1].allFinite()) {
      throw NumericError("ODE state became non-finite during training");
    }
  }

  CompensatedSum loss;
  std::vector<double> dloss(n_grid, 0.0);
  for (std::size_t k = 0; k < n_grid; ++k) {
    const double x = states[k][0];
    const double p = bins.positives[k], q = bins.negatives[k];
    if (p == 0 && q == 0) continue;
    loss.Add(p * Softplus(-x) + q * Softplus(x));
    dloss[k] = (p * (Sigmoid(x) - 1.0) + q * Sigmoid(x)) / bins.total;
  }
  const double value = loss.value() / bins.total;
  if (grad == nullptr) return value;

  MlpWeights g = MlpWeights::Zero(s, model.hidden_dim());
  FieldVjp vjp(model, &g);
  Eigen::VectorXd adj = Eigen::VectorXd::Zero(s);
  for (std::size_t k = n_grid; k-- > 0;) {
    adj[0] += dloss[k];
    if (k == 0) break;
    // Step k-1 -> k.
    const double t = (k - 1) * dt;
    const auto& y = stages[k - 1];
    Eigen::VectorXd gk1 = dt / 6.0 * adj;
    Eigen::VectorXd gk2 = dt / 3.0 * adj;
    Eigen::VectorXd gk3 = dt / 3.0 * adj;
    Eigen::VectorXd gk4 = dt / 6.0 * adj;
    Eigen::VectorXd hbar = adj;
    Eigen::VectorXd y4 = vjp.Apply(y[3], t + dt, gk4);
    hbar += y4;
    gk3 += dt * y4;
    Eigen::VectorXd y3 = vjp.Apply(y[2], t + 0.5 * dt, gk3);
    hbar += y3;
    gk2 += 0.5 * dt * y3;
    Eigen::VectorXd y2 = vjp.Apply(y[1], t + 0.5 * dt, gk2);
    hbar += y2;
    gk1 += 0.5 * dt * y2;
    hbar += vjp.Apply(y[0], t, gk1);
    adj = hbar;
  }
  *grad = g.Flatten();
  return value;
}

double SampleLoss(const OdeDecayModel& model,
                  const std::vector<DecaySample>& samples) {
  Require(!samples.empty(), "no samples");
  std::vector<DecaySample> sorted = samples;
  std::sort(sorted.begin(), sorted.end(),
            [](const DecaySample& a, const DecaySample& b) { return a.dt < b.dt; });
  std::vector<double> times;
  times.reserve(sorted.size());
  for (const auto& s : sorted) times.push_back(s.dt);
  std::vector<double> d = model.DecayAt(times);
  CompensatedSum loss;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = std::clamp(d[i], 1e-300, 1.0 - 1e-16);
    loss.Add(sorted[i].positive ? -std::log(p) : -std::log1p(-p));
  }
  return loss.value() / static_cast<double>(sorted.size());
}

TrainingResult TrainOde(const std::vector<DecaySample>& samples,
                        const TrainingConfig& config, OdeDecayModel init) {
  Require(std::any_of(samples.begin(), samples.end(),
                      [](const DecaySample& s) { return s.positive; }),
          "training needs at least one positive pair");
  Require(config.epochs >= 0, "epochs must be >= 0");
  Require(config.lr >= 0, "learning rate must be >= 0");
  BinnedSamples bins = BinnedSamples::FromSamples(samples, config.step);

  TrainingResult result{std::move(init), 0, 0, {}};
  OdeDecayModel& model = result.model;
  Eigen::VectorXd theta = model.weights().Flatten();
  Eigen::VectorXd m = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd v = Eigen::VectorXd::Zero(theta.size());
  Eigen::VectorXd grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss;
    try {
      loss = GridLoss(model, bins, &grad);
    } catch (const NumericError& e) {
      throw TrainingError(std::string("training diverged: ") + e.what());
    }
    if (!std::isfinite(loss) || !grad.allFinite()) {
      throw TrainingError("non-finite training loss at epoch " +
                          std::to_string(epoch));
    }
    if (epoch == 0) result.initial_loss = loss;
    result.loss_history.push_back(loss);
    m = config.beta1 * m + (1 - config.beta1) * grad;
    v = config.beta2 * v + (1 - config.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1 - std::pow(config.beta1, epoch + 1);
    const double c2 = 1 - std::pow(config.beta2, epoch + 1);
    theta -= config.lr *
             ((m / c1).array() / ((v / c2).array().sqrt() + config.adam_eps))
                 .matrix();
    model.weights().Unflatten(theta);
  }
  result.final_loss = GridLoss(model, bins);
  if (!std::isfinite(result.final_loss)) {
    throw TrainingError("non-finite training loss after the last epoch");
  }
  if (config.epochs == 0) result.initial_loss = result.final_loss;
  return result;
}

}  // namespace chronos::decay
