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

#include "chronos/decay/ode_model.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"

namespace chronos::decay {
namespace {

constexpr char kCheckpointHeader[] = "chronos-decay-checkpoint v1";

void CheckFinite(const Eigen::VectorXd& h) {
  if (!h.allFinite()) throw NumericError("ODE state became non-finite");
}

}  // namespace

int MlpWeights::parameter_count() const {
  return static_cast<int>(w1.size() + w2.size() + w3.size() + b1.size() +
                          b2.size() + b3.size());
}

Eigen::VectorXd MlpWeights::Flatten() const {
  Eigen::VectorXd theta(parameter_count());
  Eigen::Index pos = 0;
  auto put = [&](const auto& m) {
    theta.segment(pos, m.size()) =
        Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
    pos += m.size();
  };
  put(w1);
  put(b1);
  put(w2);
  put(b2);
  put(w3);
  put(b3);
  return theta;
}

void MlpWeights::Unflatten(const Eigen::VectorXd& theta) {
  Require(theta.size() == parameter_count(), "parameter vector size mismatch");
  Eigen::Index pos = 0;
  auto take = [&](auto& m) {
    Eigen::Map<Eigen::VectorXd>(m.data(), m.size()) =
        theta.segment(pos, m.size());
    pos += m.size();
  };
  take(w1);
  take(b1);
  take(w2);
  take(b2);
  take(w3);
  take(b3);
}

MlpWeights MlpWeights::Zero(int s, int h) {
  MlpWeights w;
  w.w1 = Eigen::MatrixXd::Zero(h, s + 1);
  w.b1 = Eigen::VectorXd::Zero(h);
  w.w2 = Eigen::MatrixXd::Zero(h, h);
  w.b2 = Eigen::VectorXd::Zero(h);
  w.w3 = Eigen::MatrixXd::Zero(s, h);
  w.b3 = Eigen::VectorXd::Zero(s);
  return w;
}

OdeDecayModel::OdeDecayModel(int state_dim, int hidden_dim, double time_scale,
                             Activation activation)
    : weights_(MlpWeights::Zero(state_dim, hidden_dim)),
      time_scale_(time_scale),
      activation_(activation) {
  Require(state_dim >= 1 && hidden_dim >= 1, "model dimensions must be >= 1");
  Require(time_scale > 0, "time_scale must be > 0");
}

void OdeDecayModel::InitializeRandom(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto fill = [&](Eigen::MatrixXd& m, double scale) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = scale * g(rng);
  };
  fill(weights_.w1, 1.0 / std::sqrt(static_cast<double>(weights_.w1.cols())));
  fill(weights_.w2, 1.0 / std::sqrt(static_cast<double>(weights_.w2.cols())));
  fill(weights_.w3,
       0.1 / std::sqrt(static_cast<double>(weights_.w3.cols())));
  weights_.b1.setZero();
  weights_.b2.setZero();
  weights_.b3.setZero();
}

Eigen::VectorXd OdeDecayModel::InitialState() const {
  return Eigen::VectorXd::Ones(state_dim());
}

Eigen::VectorXd OdeDecayModel::Field(const Eigen::VectorXd& h,
                                     double t) const {
  const MlpWeights& w = weights_;
  const int s = state_dim();
  Eigen::VectorXd z1 = w.w1.leftCols(s) * h + w.w1.col(s) * (t / time_scale_) + w.b1;
  if (activation_ == Activation::kSoftplus) z1 = z1.unaryExpr(&Softplus);
  Eigen::VectorXd z2 = w.w2 * z1 + w.b2;
  if (activation_ == Activation::kSoftplus) z2 = z2.unaryExpr(&Softplus);
  return (w.w3 * z2 + w.b3) / time_scale_;
}

Eigen::MatrixXd OdeDecayModel::StateJacobian(const Eigen::VectorXd& h,
                                             double t) const {
  const MlpWeights& w = weights_;
  const int s = state_dim();
  Eigen::VectorXd z1 = w.w1.leftCols(s) * h + w.w1.col(s) * (t / time_scale_) + w.b1;
  Eigen::VectorXd d1 = Eigen::VectorXd::Ones(z1.size());
  Eigen::VectorXd a1 = z1;
  if (activation_ == Activation::kSoftplus) {
    d1 = z1.unaryExpr(&Sigmoid);
    a1 = z1.unaryExpr(&Softplus);
  }
  Eigen::VectorXd z2 = w.w2 * a1 + w.b2;
  Eigen::VectorXd d2 = Eigen::VectorXd::Ones(z2.size());
  if (activation_ == Activation::kSoftplus) d2 = z2.unaryExpr(&Sigmoid);
  return w.w3 * d2.asDiagonal() * w.w2 * d1.asDiagonal() * w.w1.leftCols(s) /
         time_scale_;
}

Eigen::VectorXd OdeDecayModel::Rk4Span(Eigen::VectorXd h, double t0,
                                       double t1, double step) const {
  const double span = t1 - t0;
  if (span <= 0) return h;
  const auto n = static_cast<long>(std::ceil(span / step - 1e-12));
  const double dt = span / static_cast<double>(std::max(1L, n));
  double t = t0;
  for (long i = 0; i < std::max(1L, n); ++i) {
    Eigen::VectorXd k1 = Field(h, t);
    Eigen::VectorXd k2 = Field(h + 0.5 * dt * k1, t + 0.5 * dt);
    Eigen::VectorXd k3 = Field(h + 0.5 * dt * k2, t + 0.5 * dt);
    Eigen::VectorXd k4 = Field(h + dt * k3, t + dt);
    h += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t0 + (i + 1) * dt;
  }
  CheckFinite(h);
  return h;
}

Eigen::VectorXd OdeDecayModel::DopriSpan(Eigen::VectorXd h, double t0,
                                         double t1, double tol) const {
  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  if (t1 <= t0) return h;
  double t = t0;
  double dt = std::min(0.1, t1 - t0);
  Eigen::VectorXd k1 = Field(h, t);
  int guard = 0;
  while (t < t1) {
    if (++guard > 10000000) throw NumericError("adaptive solver stalled");
    dt = std::min(dt, t1 - t);
    Eigen::VectorXd k2 = Field(h + dt * a21 * k1, t + c2 * dt);
    Eigen::VectorXd k3 = Field(h + dt * (a31 * k1 + a32 * k2), t + c3 * dt);
    Eigen::VectorXd k4 =
        Field(h + dt * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * dt);
    Eigen::VectorXd k5 = Field(
        h + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * dt);
    Eigen::VectorXd k6 = Field(
        h + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5),
        t + dt);
    Eigen::VectorXd next =
        h + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    Eigen::VectorXd k7 = Field(next, t + dt);
    Eigen::VectorXd err =
        dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double norm = 0;
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      double sc = tol + tol * std::max(std::abs(h[i]), std::abs(next[i]));
      norm = std::max(norm, std::abs(err[i]) / sc);
    }
    if (!std::isfinite(norm)) throw NumericError("ODE state became non-finite");
    if (norm <= 1.0) {
      t += dt;
      h = next;
      k1 = k7;
    }
    double factor = norm == 0 ? 5.0 : 0.9 * std::pow(norm, -0.2);
    dt *= std::clamp(factor, 0.2, 5.0);
  }
  CheckFinite(h);
  return h;
}

Eigen::VectorXd OdeDecayModel::IntegrateRk4(double dt, double step) const {
  Require(dt >= 0, "dt must be >= 0");
  Require(step > 0, "solver step must be > 0");
  return Rk4Span(InitialState(), 0.0, dt, step);
}

Eigen::VectorXd OdeDecayModel::IntegrateDopri(double dt,
                                              double tolerance) const {
  Require(dt >= 0, "dt must be >= 0");
  Require(tolerance > 0, "tolerance must be > 0");
  return DopriSpan(InitialState(), 0.0, dt, tolerance);
}

Eigen::VectorXd OdeDecayModel::State(double dt) const {
  Require(dt >= 0 && std::isfinite(dt), "dt must be finite and >= 0");
  return solver_.kind == SolverKind::kRk4
             ? IntegrateRk4(dt, solver_.step)
             : IntegrateDopri(dt, solver_.tolerance);
}

double OdeDecayModel::Decay(double dt) const { return Sigmoid(State(dt)[0]); }

Eigen::VectorXd OdeDecayModel::Advance(const Eigen::VectorXd& h, double t0,
                                       double t1) const {
  Require(t1 >= t0, "cannot integrate backwards");
  return solver_.kind == SolverKind::kRk4 ? Rk4Span(h, t0, t1, solver_.step)
                                          : DopriSpan(h, t0, t1, solver_.tolerance);
}

std::vector<double> OdeDecayModel::DecayAt(
    const std::vector<double>& times) const {
  std::vector<double> out;
  out.reserve(times.size());
  Eigen::VectorXd h = InitialState();
  double t = 0;
  for (double target : times) {
    Require(target >= t, "times must be ascending and >= 0");
    h = Advance(h, t, target);
    t = target;
    out.push_back(Sigmoid(h[0]));
  }
  return out;
}

void OdeDecayModel::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path);
  out << kCheckpointHeader << "\n"
      << state_dim() << ' ' << hidden_dim() << ' '
      << (activation_ == Activation::kSoftplus ? "softplus" : "identity")
      << ' ' << std::setprecision(17) << time_scale_ << ' '
      << (solver_.kind == SolverKind::kRk4 ? "rk4" : "dopri5") << ' '
      << solver_.step << ' ' << solver_.tolerance << "\n";
  Eigen::VectorXd theta = weights_.Flatten();
  for (Eigen::Index i = 0; i < theta.size(); ++i) out << theta[i] << "\n";
}

OdeDecayModel OdeDecayModel::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read checkpoint " + path);
  std::string header;
  std::getline(in, header);
  if (header != kCheckpointHeader) throw IoError("bad checkpoint header");
  int s = 0, h = 0;
  std::string act, kind;
  double scale = 0, step = 0, tol = 0;
  if (!(in >> s >> h >> act >> scale >> kind >> step >> tol)) {
    throw IoError("bad checkpoint metadata");
  }
  OdeDecayModel m(s, h, scale,
                  act == "identity" ? Activation::kIdentity
                                    : Activation::kSoftplus);
  m.solver_.kind = kind == "dopri5" ? SolverKind::kDormandPrince : SolverKind::kRk4;
  m.solver_.step = step;
  m.solver_.tolerance = tol;
  Eigen::VectorXd theta(m.weights_.parameter_count());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if (!(in >> theta[i])) throw IoError("truncated checkpoint");
  }
  m.weights_.Unflatten(theta);
  return m;
}

double ExponentialDecay(double rate, double dt) {
  Require(rate > 0, "decay rate must be > 0");
  Require(dt >= 0, "dt must be >= 0");
  return std::exp(-rate * dt);
}

}  // namespace chronos::decay
