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

#ifndef CHRONOS_CHANGEPOINT_BOCPD_H_
#define CHRONOS_CHANGEPOINT_BOCPD_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace chronos::changepoint {

enum class LikelihoodModel {
  kIndependent,  // Normal-Inverse-Gamma per dimension
  kJoint,        // Normal-Inverse-Wishart over the whole vector
};

struct BocpdConfig {
  double hazard = 1.0 / 250;
  double threshold = 0.85;
  int refractory = 3;  // epochs blocked after a declaration
  // The declaration statistic is the posterior mass on segments that began
  // within the last `change_window` observations; 1 is P(segment starts now).
  int change_window = 6;
  // Observations used to set the prior; they are replayed afterwards.
  std::size_t warmup = 20;
  double kappa0 = 1;
  double alpha0 = 1;           // NIG shape; NIW uses nu0 = dims + 2*alpha0 - 1
  double min_scale = 1e-6;     // floor on the warm-up standard deviation
  double truncation = 1e-6;    // run lengths below this mass are dropped
  LikelihoodModel model = LikelihoodModel::kIndependent;

  void Validate() const;
};

// Refractory threshold rule on a per-epoch change mass.
class EventDeclarer {
 public:
  EventDeclarer(double threshold, int refractory);
  // Returns a new event id when `mass` crosses the threshold from below and
  // no event was declared in the previous `refractory` epochs.
  std::optional<int> Offer(long epoch, double mass);
  int events() const { return next_id_; }

 private:
  double threshold_;
  int refractory_;
  long last_epoch_ = -1;
  bool any_ = false;
  bool above_ = false;
  int next_id_ = 0;
};

// Bayesian online changepoint detector. Run length r counts the observations
// in the current segment, so r = 1 means the latest observation opened it.
class Bocpd {
 public:
  Bocpd(std::size_t dims, const BocpdConfig& config = {});

  // Feeds one observation. Returns an event id when one is declared. Throws
  // NumericError for non-finite entries, ParameterError for a size mismatch.
  std::optional<int> Update(std::span<const double> x);
  std::optional<int> Update(double x) { return Update(std::span<const double>(&x, 1)); }

  std::size_t dims() const { return dims_; }
  std::size_t observations() const { return t_; }
  bool warmed_up() const { return warm_; }
  const BocpdConfig& config() const { return config_; }

  std::vector<std::size_t> RunLengths() const;
  std::vector<double> Posterior() const;
  double ProbabilityOf(std::size_t run_length) const;
  std::size_t MapRunLength() const;
  // Mass on run lengths 1..change_window.
  double ChangeMass() const;
  int events() const { return declarer_.events(); }
  // True when every entry's sufficient-statistic count equals its run length.
  bool StatsConsistent() const;

 private:
  struct Stats {
    std::size_t count = 0;
    double kappa = 0;
    Eigen::VectorXd mu;
    // Independent mode.
    double alpha = 0;
    Eigen::VectorXd beta;
    // Joint mode.
    double nu = 0;
    Eigen::MatrixXd psi;
  };
  struct Entry {
    std::size_t run;
    double prob;
    Stats stats;
  };

  void SetPrior();
  void Step(const Eigen::VectorXd& x);
  double LogPredictive(const Stats& s, const Eigen::VectorXd& x) const;
  Stats Absorb(const Stats& s, const Eigen::VectorXd& x) const;

  std::size_t dims_;
  BocpdConfig config_;
  bool warm_ = false;
  std::size_t t_ = 0;
  std::vector<Eigen::VectorXd> buffer_;
  Stats prior_;
  std::vector<Entry> entries_;  // ascending run length
  EventDeclarer declarer_;
};

struct EventRecord {
  long epoch = 0;
  int event_id = 0;
  double posterior_mass = 0;
  std::string stream;
};

void WriteEventLogCsv(const std::string& path, std::span<const EventRecord> events);

}  // namespace chronos::changepoint

#endif  // CHRONOS_CHANGEPOINT_BOCPD_H_
