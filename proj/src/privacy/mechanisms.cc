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

#include "chronos/privacy/mechanisms.h"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <random>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"

namespace chronos::privacy {

double ValuationSensitivity(double bound, int n) {
  Require(bound > 0, "value bound must be > 0");
  Require(n >= 1, "seller count must be >= 1");
  return 4.0 * bound / n;
}

double IndexStatsSensitivity(int n) {
  Require(n >= 1, "seller count must be >= 1");
  return 1.5 / n;
}

double AffinitySensitivity(double kappa_active, double eta) {
  Require(kappa_active >= 0, "kappa must be >= 0");
  Require(eta >= 1, "overlap factor must be >= 1");
  return eta * std::sqrt(kappa_active);
}

double AdaptiveSigma(int t, int t_active, double sigma0) {
  Require(t >= 1, "active-epoch counter starts at 1");
  Require(t <= t_active, "t must not exceed T_active");
  Require(sigma0 > 0, "sigma0 must be > 0");
  return sigma0 * std::sqrt(static_cast<double>(t_active) / t);
}

Rng NoiseRng(uint64_t seed, int epoch, Mechanism m) {
  return MakeRng(seed, MechanismName(m), static_cast<uint64_t>(epoch));
}

ScalarRelease ReleaseScalar(double value, double sensitivity, double sigma,
                            Rng& rng, Mechanism m, int epoch) {
  Require(sensitivity > 0, "sensitivity must be > 0");
  ReleaseRecord rec = ReleaseRecord::Gaussian(m, epoch, sigma, sensitivity);
  std::normal_distribution<double> noise(0.0, sigma * sensitivity);
  return {value + noise(rng), rec};
}

VectorRelease ReleaseVector(const std::vector<double>& values,
                            double sensitivity, double sigma, Rng& rng,
                            Mechanism m, int epoch) {
  Require(sensitivity > 0, "sensitivity must be > 0");
  ReleaseRecord rec = ReleaseRecord::Gaussian(m, epoch, sigma, sensitivity);
  std::normal_distribution<double> noise(0.0, sigma * sensitivity);
  VectorRelease out{values, rec};
  for (double& v : out.values) v += noise(rng);
  return out;
}

AffinityRelease ReleaseAffinity(const Eigen::MatrixXd& a, int rows, int cols,
                                double delta2, double sigma, Rng& rng,
                                int epoch) {
  Require(a.rows() == rows && a.cols() == cols,
          "affinity matrix does not match the index neighbourhood layout");
  Require(delta2 >= 0, "sensitivity must be >= 0");
  Require((a.array() >= 0).all() && (a.array() <= 1).all(),
          "affinity entries must lie in [0, 1]");
  AffinityRelease out;
  out.record = ReleaseRecord::Gaussian(Mechanism::kAffinity, epoch, sigma, delta2);
  out.affinity.epoch = epoch;
  out.affinity.delta2 = delta2;
  out.affinity.sigma_entry = sigma * delta2;
  out.affinity.values = a;
  if (out.affinity.sigma_entry > 0) {
    std::normal_distribution<double> noise(0.0, out.affinity.sigma_entry);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      double& v = out.affinity.values.data()[i];
      v = Clamp01(v + noise(rng));
    }
  }
  return out;
}

double DeliveredRho(double sigma_entry, double delta2) {
  Require(sigma_entry > 0, "noise std must be > 0");
  return delta2 * delta2 / (2.0 * sigma_entry * sigma_entry);
}

double RankFlipProbability(double s_i, double s_j, double beta,
                           double sigma_entry) {
  Require(s_i >= s_j, "expects s_i >= s_j");
  Require(beta >= 0 && beta <= 1, "beta must lie in [0, 1]");
  Require(sigma_entry > 0, "sigma_entry must be > 0");
  if (beta == 0) return s_i > s_j ? 0.0 : 0.5;
  return NormalCdf(-(s_i - s_j) / (beta * sigma_entry * std::sqrt(2.0)));
}

double SettlementSnr(double window, double phi_coal, int n, int n_coal,
                     double bound, double sigma) {
  Require(window > 0 && phi_coal > 0 && n > 0 && n_coal > 0 && bound > 0 &&
              sigma > 0,
          "settlement inputs must be positive");
  return window * phi_coal * n / (4.0 * bound * n_coal * sigma);
}

Nonce MakeNonce() {
  Nonce n(16);
  if (RAND_bytes(n.data(), static_cast<int>(n.size())) != 1) {
    throw NumericError("system CSPRNG unavailable");
  }
  return n;
}

Digest EscrowCommit(double value, const Nonce& nonce) {
  Require(nonce.size() >= 16, "nonce must carry at least 128 bits");
  // Canonical encoding: tag, IEEE-754 bits little-endian, nonce length, nonce.
  std::vector<uint8_t> msg = {'c', 'h', 'r', 'o', 'n', 'o', 's', '-', 'e',
                              's', 'c', 'r', 'o', 'w', '-', '1'};
  const auto bits = std::bit_cast<uint64_t>(value == 0.0 ? 0.0 : value);
  for (int i = 0; i < 8; ++i) msg.push_back(static_cast<uint8_t>(bits >> (8 * i)));
  const auto len = static_cast<uint32_t>(nonce.size());
  for (int i = 0; i < 4; ++i) msg.push_back(static_cast<uint8_t>(len >> (8 * i)));
  msg.insert(msg.end(), nonce.begin(), nonce.end());
  Digest d{};
  unsigned int out_len = 0;
  if (EVP_Digest(msg.data(), msg.size(), d.data(), &out_len, EVP_sha256(),
                 nullptr) != 1 ||
      out_len != d.size()) {
    throw NumericError("SHA-256 failed");
  }
  return d;
}

bool EscrowVerify(const Digest& digest, double value, const Nonce& nonce) {
  return EscrowCommit(value, nonce) == digest;
}

std::string ToHex(const Digest& d) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s;
  for (uint8_t b : d) {
    s.push_back(kHex[b >> 4]);
    s.push_back(kHex[b & 15]);
  }
  return s;
}

ExpMechanismTradeoff CompareExpMechanism(int k, int ef,
                                         double queries_per_epoch,
                                         double eps_per_query, int epochs,
                                         double sigma, double delta) {
  Require(k >= 1 && ef >= 1 && epochs >= 0, "sizes must be positive");
  Require(queries_per_epoch >= 0 && eps_per_query >= 0,
          "query rate and per-query epsilon must be >= 0");
  ExpMechanismTradeoff t;
  t.composed_eps = queries_per_epoch * eps_per_query * epochs;
  t.epoch_release_eps =
      ZcdpToEpsilon(epochs / (2.0 * sigma * sigma), delta);
  const double d = ef;
  t.sampling_ops = d * k * std::log(std::max(2, k)) + d * std::log(d);
  t.per_query_competitive =
      queries_per_epoch > 0 && queries_per_epoch <= 1.0 && 4 * k <= ef;
  return t;
}

}  // namespace chronos::privacy
