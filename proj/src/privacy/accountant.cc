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

#include "chronos/privacy/accountant.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"

namespace chronos::privacy {

std::string_view MechanismName(Mechanism m) {
  switch (m) {
    case Mechanism::kIndexStats:
      return "index-stats";
    case Mechanism::kValuation:
      return "valuation";
    case Mechanism::kAffinity:
      return "affinity";
  }
  return "unknown";
}

Mechanism ParseMechanism(std::string_view name) {
  if (name == "index-stats") return Mechanism::kIndexStats;
  if (name == "valuation") return Mechanism::kValuation;
  if (name == "affinity") return Mechanism::kAffinity;
  throw ParameterError("unknown mechanism: " + std::string(name));
}

ReleaseRecord ReleaseRecord::Gaussian(Mechanism m, int epoch, double sigma,
                                      double sensitivity) {
  Require(sigma > 0 && std::isfinite(sigma), "noise multiplier must be > 0");
  Require(sensitivity >= 0, "sensitivity must be >= 0");
  return {m, epoch, sigma, sensitivity, 1.0 / (2.0 * sigma * sigma)};
}

double ZcdpToEpsilon(double rho, double delta) {
  Require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
  Require(rho >= 0, "rho must be >= 0");
  return rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta));
}

double RdpMoment(double alpha, double sigma) {
  Require(alpha > 1, "alpha must be > 1");
  Require(sigma > 0, "sigma must be > 0");
  return alpha / (2.0 * sigma * sigma);
}

double GdpDelta(double mu, double eps) {
  if (mu <= 0) return 0.0;
  const double a = NormalCdf(-eps / mu + mu / 2);
  // e^eps * Phi(x) computed in log space so large eps does not overflow.
  const double x = -eps / mu - mu / 2;
  const double tail = 0.5 * std::erfc(-x / std::sqrt(2.0));
  const double b = tail > 0 ? std::exp(eps + std::log(tail)) : 0.0;
  return a - b;
}

double GdpToEpsilon(double mu, double delta) {
  Require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
  Require(mu >= 0, "mu must be >= 0");
  if (mu == 0 || GdpDelta(mu, 0) <= delta) return 0.0;
  double lo = 0, hi = 100;
  if (GdpDelta(mu, hi) > delta) {
    throw NumericError("GDP conversion does not bracket on [0, 100]");
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (GdpDelta(mu, mid) > delta ? lo : hi) = mid;
  }
  return hi;
}

const std::vector<double>& RdpAlphaGrid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g = {1.25, 1.5, 1.75};
    for (int a = 2; a <= 64; ++a) g.push_back(a);
    g.push_back(128);
    g.push_back(256);
    return g;
  }();
  return grid;
}

PrivacyAccountant::PrivacyAccountant(double eps_total, double delta)
    : eps_total_(eps_total), delta_(delta) {
  Require(eps_total > 0, "epsilon budget must be > 0");
  Require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
}

void PrivacyAccountant::Add(const ReleaseRecord& record) {
  Require(record.sigma > 0, "noise multiplier must be > 0");
  records_.push_back(record);
}

double PrivacyAccountant::RhoTotal() const {
  // Sorting makes the compensated sum independent of insertion order.
  std::vector<double> rhos;
  rhos.reserve(records_.size());
  for (const auto& r : records_) rhos.push_back(r.rho);
  std::sort(rhos.begin(), rhos.end());
  CompensatedSum s;
  for (double r : rhos) s.Add(r);
  return s.value();
}

double PrivacyAccountant::RhoFor(Mechanism m) const {
  CompensatedSum s;
  for (const auto& r : records_) {
    if (r.mechanism == m) s.Add(r.rho);
  }
  return s.value();
}

double PrivacyAccountant::GdpMu() const {
  // Each release at multiplier sigma is (1/sigma)-GDP; 2 rho = 1/sigma^2.
  return std::sqrt(2.0 * RhoTotal());
}

double PrivacyAccountant::ZcdpEpsilon(double delta) const {
  return ZcdpToEpsilon(RhoTotal(), delta);
}

double PrivacyAccountant::RdpEpsilon(double delta) const {
  Require(delta > 0 && delta < 1, "delta must lie in (0, 1)");
  const double rho = RhoTotal();
  if (rho == 0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double a : RdpAlphaGrid()) {
    best = std::min(best, a * rho + std::log(1.0 / delta) / (a - 1.0));
  }
  return best;
}

double PrivacyAccountant::GdpEpsilon(double delta) const {
  return GdpToEpsilon(GdpMu(), delta);
}

double PrivacyAccountant::EpsRemaining(RemainingMode mode) const {
  if (mode == RemainingMode::kZcdpDifference) {
    return std::max(0.0, eps_total_ - ZcdpEpsilon(delta_));
  }
  const double rho = RhoTotal();
  double best = std::numeric_limits<double>::infinity();
  for (double a : RdpAlphaGrid()) {
    if (a > 64) continue;
    best = std::min(best, (eps_total_ - a * rho + a * std::log(1.0 / delta_)) / a);
  }
  return best;
}

double PrivacyAccountant::EpsilonIfAdded(double extra_rho) const {
  return ZcdpToEpsilon(RhoTotal() + extra_rho, delta_);
}

void PrivacyAccountant::WriteTranscript(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "epoch,mechanism,sigma_t,sensitivity,rho_i,cum_rho,cum_eps\n"
      << std::setprecision(17);
  CompensatedSum cum;
  for (const auto& r : records_) {
    cum.Add(r.rho);
    out << r.epoch << ',' << MechanismName(r.mechanism) << ',' << r.sigma << ','
        << r.sensitivity << ',' << r.rho << ',' << cum.value() << ','
        << ZcdpToEpsilon(cum.value(), delta_) << '\n';
  }
}

PrivacyAccountant PrivacyAccountant::ReadTranscript(const std::string& path,
                                                    double eps_total,
                                                    double delta) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("epoch,mechanism,sigma_t", 0) != 0) {
    throw IoError("bad transcript header");
  }
  PrivacyAccountant acc(eps_total, delta);
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 5) throw IoError("short transcript row " + std::to_string(row));
    ReleaseRecord r = ReleaseRecord::Gaussian(ParseMechanism(cells[1]),
                                              std::stoi(cells[0]),
                                              std::stod(cells[2]),
                                              std::stod(cells[3]));
    const double stored = std::stod(cells[4]);
    if (std::abs(stored - r.rho) > 1e-12 * std::max(1.0, r.rho)) {
      throw IoError("rho_i does not match sigma_t at row " + std::to_string(row));
    }
    acc.Add(r);
  }
  return acc;
}

}  // namespace chronos::privacy
