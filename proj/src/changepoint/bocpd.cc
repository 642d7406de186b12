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

#include "chronos/changepoint/bocpd.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "chronos/common/error.h"

namespace chronos::changepoint {
namespace {

double LogStudentT(double x, double dof, double loc, double scale) {
  const double z = (x - loc) / scale;
  return std::lgamma(0.5 * (dof + 1)) - std::lgamma(0.5 * dof) -
         0.5 * std::log(dof * std::numbers::pi) - std::log(scale) -
         0.5 * (dof + 1) * std::log1p(z * z / dof);
}

double LogSumExp(const std::vector<double>& v) {
  const double hi = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(hi)) return hi;
  double s = 0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace

void BocpdConfig::Validate() const {
  Require(hazard > 0 && hazard < 1, "hazard must lie in (0, 1)");
  Require(threshold > 0 && threshold <= 1, "threshold must lie in (0, 1]");
  Require(refractory >= 0, "refractory must be non-negative");
  Require(change_window >= 1, "change_window must be at least 1");
  Require(warmup >= 2, "warmup needs at least two observations");
  Require(kappa0 > 0 && alpha0 > 0, "prior pseudo-counts must be positive");
  Require(min_scale > 0, "min_scale must be positive");
  Require(truncation >= 0 && truncation < 1, "truncation must lie in [0, 1)");
}

EventDeclarer::EventDeclarer(double threshold, int refractory)
    : threshold_(threshold), refractory_(refractory) {
  Require(threshold > 0 && threshold <= 1, "threshold must lie in (0, 1]");
  Require(refractory >= 0, "refractory must be non-negative");
}

std::optional<int> EventDeclarer::Offer(long epoch, double mass) {
  const bool was_above = above_;
  above_ = mass > threshold_;
  if (!above_ || was_above) return std::nullopt;
  if (any_ && epoch - last_epoch_ <= refractory_) return std::nullopt;
  any_ = true;
  last_epoch_ = epoch;
  return next_id_++;
}

Bocpd::Bocpd(std::size_t dims, const BocpdConfig& config)
    : dims_(dims), config_(config), declarer_(config.threshold, config.refractory) {
  Require(dims >= 1, "detector needs at least one dimension");
  config_.Validate();
}

std::optional<int> Bocpd::Update(std::span<const double> x) {
  Require(x.size() == dims_, "observation has the wrong dimension");
  Eigen::VectorXd v(dims_);
  for (std::size_t d = 0; d < dims_; ++d) {
    if (!std::isfinite(x[d])) throw NumericError("non-finite drift observation");
    v[d] = x[d];
  }
  ++t_;
  if (!warm_) {
    buffer_.push_back(v);
    if (buffer_.size() < config_.warmup) return std::nullopt;
    SetPrior();
    warm_ = true;
    for (const auto& b : buffer_) Step(b);
    buffer_.clear();
    return std::nullopt;
  }
  Step(v);
  return declarer_.Offer(static_cast<long>(t_), ChangeMass());
}

void Bocpd::SetPrior() {
  const double n = static_cast<double>(buffer_.size());
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(dims_);
  for (const auto& b : buffer_) mean += b;
  mean /= n;
  Eigen::VectorXd var = Eigen::VectorXd::Zero(dims_);
  for (const auto& b : buffer_) var += (b - mean).cwiseAbs2();
  var /= n - 1;
  var = var.cwiseMax(config_.min_scale * config_.min_scale);

  prior_ = Stats{};
  prior_.count = 0;
  prior_.kappa = config_.kappa0;
  prior_.mu = mean;
  prior_.alpha = config_.alpha0;
  prior_.beta = config_.alpha0 * var;
  prior_.nu = static_cast<double>(dims_) + 2 * config_.alpha0 - 1;
  prior_.psi = (prior_.nu * var).asDiagonal();
}

Bocpd::Stats Bocpd::Absorb(const Stats& s, const Eigen::VectorXd& x) const {
  Stats out = s;
  const Eigen::VectorXd dev = x - s.mu;
  const double k1 = s.kappa + 1;
  out.count = s.count + 1;
  out.kappa = k1;
  out.mu = (s.kappa * s.mu + x) / k1;
  if (config_.model == LikelihoodModel::kIndependent) {
    out.alpha = s.alpha + 0.5;
    out.beta = s.beta + (s.kappa / (2 * k1)) * dev.cwiseAbs2();
  } else {
    out.nu = s.nu + 1;
    out.psi = s.psi + (s.kappa / k1) * dev * dev.transpose();
  }
  return out;
}

double Bocpd::LogPredictive(const Stats& s, const Eigen::VectorXd& x) const {
  if (config_.model == LikelihoodModel::kIndependent) {
    double lp = 0;
    for (std::size_t d = 0; d < dims_; ++d) {
      const double scale = std::sqrt(s.beta[d] * (s.kappa + 1) / (s.alpha * s.kappa));
      lp += LogStudentT(x[d], 2 * s.alpha, s.mu[d], scale);
    }
    return lp;
  }
  const double dim = static_cast<double>(dims_);
  const double dof = s.nu - dim + 1;
  const Eigen::MatrixXd sigma = s.psi * ((s.kappa + 1) / (s.kappa * dof));
  const Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericError("predictive scale is not positive definite");
  const Eigen::VectorXd dev = x - s.mu;
  const double maha = llt.matrixL().solve(dev).squaredNorm();
  const double logdet = 2 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return std::lgamma(0.5 * (dof + dim)) - std::lgamma(0.5 * dof) -
         0.5 * dim * std::log(dof * std::numbers::pi) - 0.5 * logdet -
         0.5 * (dof + dim) * std::log1p(maha / dof);
}

void Bocpd::Step(const Eigen::VectorXd& x) {
  if (entries_.empty()) {
    entries_.push_back({1, 1.0, Absorb(prior_, x)});
    return;
  }
  const double log_h = std::log(config_.hazard);
  const double log_grow = std::log1p(-config_.hazard);
  std::vector<double> logp;
  logp.reserve(entries_.size() + 1);
  // The posterior sums to one, so the change branch is h * prior predictive.
  logp.push_back(log_h + LogPredictive(prior_, x));
  for (const auto& e : entries_) {
    logp.push_back(std::log(e.prob) + log_grow + LogPredictive(e.stats, x));
  }
  const double norm = LogSumExp(logp);
  if (!std::isfinite(norm)) throw NumericError("run-length posterior collapsed");

  std::vector<Entry> next;
  next.reserve(logp.size());
  next.push_back({1, std::exp(logp[0] - norm), Absorb(prior_, x)});
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    next.push_back({entries_[i].run + 1, std::exp(logp[i + 1] - norm),
                    Absorb(entries_[i].stats, x)});
  }
  // Drop negligible run lengths but always keep the most probable one.
  const auto best = std::max_element(next.begin(), next.end(),
                                     [](const Entry& a, const Entry& b) { return a.prob < b.prob; });
  const std::size_t best_run = best->run;
  std::erase_if(next, [&](const Entry& e) {
    return e.prob < config_.truncation && e.run != best_run;
  });
  double total = 0;
  for (const auto& e : next) total += e.prob;
  for (auto& e : next) e.prob /= total;
  entries_ = std::move(next);
}

std::vector<std::size_t> Bocpd::RunLengths() const {
  std::vector<std::size_t> out;
  for (const auto& e : entries_) out.push_back(e.run);
  return out;
}

std::vector<double> Bocpd::Posterior() const {
  std::vector<double> out;
  for (const auto& e : entries_) out.push_back(e.prob);
  return out;
}

double Bocpd::ProbabilityOf(std::size_t run_length) const {
  for (const auto& e : entries_) {
    if (e.run == run_length) return e.prob;
  }
  return 0;
}

std::size_t Bocpd::MapRunLength() const {
  if (entries_.empty()) return 0;
  return std::max_element(entries_.begin(), entries_.end(),
                          [](const Entry& a, const Entry& b) { return a.prob < b.prob; })
      ->run;
}

double Bocpd::ChangeMass() const {
  double mass = 0;
  for (const auto& e : entries_) {
    if (e.run <= static_cast<std::size_t>(config_.change_window)) mass += e.prob;
  }
  return mass;
}

bool Bocpd::StatsConsistent() const {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const Entry& e) { return e.stats.count == e.run; });
}

void WriteEventLogCsv(const std::string& path, std::span<const EventRecord> events) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(10);
  out << "epoch,event_id,posterior_mass,stream\n";
  for (const auto& e : events) {
    out << e.epoch << ',' << e.event_id << ',' << e.posterior_mass << ',' << e.stream << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace chronos::changepoint
