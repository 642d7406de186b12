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

#ifndef CHRONOS_PRIVACY_ACCOUNTANT_H_
#define CHRONOS_PRIVACY_ACCOUNTANT_H_

#include <string>
#include <string_view>
#include <vector>

namespace chronos::privacy {

enum class Mechanism { kIndexStats, kValuation, kAffinity };

std::string_view MechanismName(Mechanism m);
Mechanism ParseMechanism(std::string_view name);

struct ReleaseRecord {
  Mechanism mechanism = Mechanism::kValuation;
  int epoch = 0;
  double sigma = 1;        // noise multiplier, dimensionless
  double sensitivity = 1;  // in mechanism units
  double rho = 0.5;        // 1 / (2 sigma^2)

  // Record for one Gaussian release. Throws ParameterError for sigma <= 0.
  static ReleaseRecord Gaussian(Mechanism m, int epoch, double sigma,
                                double sensitivity);
};

// rho + 2 sqrt(rho ln(1/delta)).
double ZcdpToEpsilon(double rho, double delta);
// alpha / (2 sigma^2).
double RdpMoment(double alpha, double sigma);
// delta(eps) of mu-GDP: Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2).
double GdpDelta(double mu, double eps);
// Smallest eps with GdpDelta(mu, eps) <= delta, by bisection on [0, 100].
// Throws NumericError if even eps = 100 is not enough.
double GdpToEpsilon(double mu, double delta);

// The alpha grid used by the RDP optimiser.
const std::vector<double>& RdpAlphaGrid();

enum class RemainingMode {
  kZcdpDifference,  // eps_total - zCDP(consumed), floored at 0
  kPrintedMinAlpha  // min_a (eps_total - sum mu_s(a) + a ln(1/delta)) / a
};

// Append-only ledger of Gaussian releases.
class PrivacyAccountant {
 public:
  PrivacyAccountant() = default;
  PrivacyAccountant(double eps_total, double delta);

  void Add(const ReleaseRecord& record);
  const std::vector<ReleaseRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  double eps_total() const { return eps_total_; }
  double delta() const { return delta_; }

  // Order-independent compensated sum of per-record rho.
  double RhoTotal() const;
  double RhoFor(Mechanism m) const;
  // Total GDP parameter sqrt(sum 1 / sigma_i^2).
  double GdpMu() const;

  double ZcdpEpsilon(double delta) const;
  // min over the alpha grid of sum mu_i(alpha) + ln(1/delta)/(alpha - 1).
  double RdpEpsilon(double delta) const;
  double GdpEpsilon(double delta) const;
  double ZcdpEpsilon() const { return ZcdpEpsilon(delta_); }

  double EpsRemaining(RemainingMode mode = RemainingMode::kZcdpDifference) const;

  // Epsilon after adding a hypothetical record; used for budget checks.
  double EpsilonIfAdded(double extra_rho) const;

  // CSV `epoch,mechanism,sigma_t,sensitivity,rho_i,cum_rho,cum_eps`.
  void WriteTranscript(const std::string& path) const;
  // Rebuilds a ledger from a transcript, recomputing rho from sigma_t.
  // Throws IoError on malformed rows or when a stored rho_i disagrees.
  static PrivacyAccountant ReadTranscript(const std::string& path,
                                          double eps_total, double delta);

 private:
  double eps_total_ = 4.25;
  double delta_ = 1e-6;
  std::vector<ReleaseRecord> records_;
};

}  // namespace chronos::privacy

#endif  // CHRONOS_PRIVACY_ACCOUNTANT_H_
