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

#include "chronos/decay/envelope.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>

#include "chronos/common/error.h"

namespace chronos::decay {
namespace {

std::vector<double> Grid(double dt, double step) {
  Require(dt >= 0, "dt must be >= 0");
  Require(step > 0, "grid step must be > 0");
  const auto n = static_cast<long>(std::ceil(dt / step - 1e-12));
  std::vector<double> g;
  g.reserve(n + 1);
  for (long i = 0; i <= n; ++i) {
    g.push_back(std::min(dt, i * (n > 0 ? dt / n : 0.0)));
  }
  return g;
}

double SpectralNorm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

double MonotoneEnvelope(const std::function<double(double)>& decay, double dt,
                        double grid_step) {
  double lo = decay(0.0);
  for (double t : Grid(dt, grid_step)) lo = std::min(lo, decay(t));
  return lo;
}

double MonotoneEnvelope(const OdeDecayModel& model, double dt,
                        double grid_step) {
  std::vector<double> d = model.DecayAt(Grid(dt, grid_step));
  return *std::min_element(d.begin(), d.end());
}

double CertifiedValue(double envelope, double dt, double lipschitz,
                      double eps_solver) {
  Require(lipschitz >= 0 && eps_solver >= 0,
          "lipschitz constant and solver tolerance must be >= 0");
  const double margin = eps_solver * std::exp(lipschitz * dt);
  return std::max(0.0, envelope - margin);
}

double CertifiedEnvelope(const OdeDecayModel& model, double dt,
                         double lipschitz, double eps_solver,
                         double grid_step) {
  return CertifiedValue(MonotoneEnvelope(model, dt, grid_step), dt, lipschitz,
                        eps_solver);
}

EnvelopeCertificate EnvelopeCertificate::Build(const OdeDecayModel& model,
                                               double max_dt, double grid_step,
                                               double lipschitz,
                                               double eps_solver) {
  std::vector<double> grid = Grid(max_dt, grid_step);
  std::vector<double> d = model.DecayAt(grid);
  EnvelopeCertificate c;
  c.lipschitz_ = lipschitz;
  c.eps_solver_ = eps_solver;
  c.grid_step_ = grid_step;
  double lo = 1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    lo = std::min(lo, d[i]);
    c.rows_.push_back(
        {grid[i], d[i], lo, CertifiedValue(lo, grid[i], lipschitz, eps_solver)});
  }
  return c;
}

EnvelopeCertificate EnvelopeCertificate::FromFunction(
    const std::function<double(double)>& decay, double max_dt,
    double grid_step, double lipschitz, double eps_solver) {
  EnvelopeCertificate c;
  c.lipschitz_ = lipschitz;
  c.eps_solver_ = eps_solver;
  c.grid_step_ = grid_step;
  double lo = 1.0;
  for (double t : Grid(max_dt, grid_step)) {
    double v = decay(t);
    lo = std::min(lo, v);
    c.rows_.push_back({t, v, lo, CertifiedValue(lo, t, lipschitz, eps_solver)});
  }
  return c;
}

double EnvelopeCertificate::Lookup(double dt, double EnvelopeRow::*field) const {
  Require(!rows_.empty(), "empty envelope table");
  if (dt <= 0) return rows_.front().*field;
  if (dt >= rows_.back().dt) return rows_.back().*field;
  auto it = std::upper_bound(
      rows_.begin(), rows_.end(), dt,
      [](double v, const EnvelopeRow& r) { return v < r.dt; });
  const EnvelopeRow& hi = *it;
  const EnvelopeRow& lo = *(it - 1);
  const double w = (dt - lo.dt) / (hi.dt - lo.dt);
  return (1 - w) * (lo.*field) + w * (hi.*field);
}

double EnvelopeCertificate::Decay(double dt) const {
  return Lookup(dt, &EnvelopeRow::decay);
}
double EnvelopeCertificate::Envelope(double dt) const {
  return Lookup(dt, &EnvelopeRow::envelope);
}
double EnvelopeCertificate::Certified(double dt) const {
  return Lookup(dt, &EnvelopeRow::certified);
}

double EnvelopeCertificate::MonotonicityViolation() const {
  double worst = 0;
  double lo = 1.0;
  for (const EnvelopeRow& r : rows_) {
    if (lo > 0) worst = std::max(worst, r.decay / lo - 1.0);
    lo = std::min(lo, r.decay);
  }
  return worst;
}

double EnvelopeCertificate::MaxSlope() const {
  double k = 0;
  for (std::size_t i = 1; i < rows_.size(); ++i) {
    const double span = rows_[i].dt - rows_[i - 1].dt;
    if (span > 0) {
      k = std::max(k, std::abs(rows_[i].decay - rows_[i - 1].decay) / span);
    }
  }
  return k;
}

void EnvelopeCertificate::WriteCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "dt,envelope,certified\n" << std::setprecision(10);
  for (const EnvelopeRow& r : rows_) {
    out << r.dt << ',' << r.envelope << ',' << r.certified << '\n';
  }
}

LipschitzEstimate EstimateLipschitz(const OdeDecayModel& model,
                                    int sample_count, double max_dt,
                                    uint64_t seed) {
  Require(sample_count >= 2, "sample_count must be >= 2");
  Require(max_dt >= 0, "max_dt must be >= 0");
  const MlpWeights& w = model.weights();
  const int s = model.state_dim();
  LipschitzEstimate out;
  out.certificate = SpectralNorm(w.w1.leftCols(s)) * SpectralNorm(w.w2) *
                    SpectralNorm(w.w3) / model.time_scale();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> when(0.0, max_dt);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> times(sample_count);
  for (double& t : times) t = when(rng);
  std::sort(times.begin(), times.end());
  Eigen::VectorXd h = model.InitialState();
  double t_prev = 0;
  for (double t : times) {
    h = model.Advance(h, t_prev, t);
    t_prev = t;
    Eigen::VectorXd dir(s);
    for (int i = 0; i < s; ++i) dir[i] = g(rng);
    const double scale = 0.1 * std::max(1.0, h.norm() / std::sqrt(double(s)));
    Eigen::VectorXd h2 = h + scale * dir / dir.norm();
    const double q =
        (model.Field(h, t) - model.Field(h2, t)).norm() / (h - h2).norm();
    out.estimate = std::max(out.estimate, q);
    out.estimate = std::max(out.estimate, SpectralNorm(model.StateJacobian(h, t)));
  }
  out.estimate = std::min(out.estimate, out.certificate);
  return out;
}

}  // namespace chronos::decay
