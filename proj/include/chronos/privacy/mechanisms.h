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

#ifndef CHRONOS_PRIVACY_MECHANISMS_H_
#define CHRONOS_PRIVACY_MECHANISMS_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chronos/common/random.h"
#include "chronos/privacy/accountant.h"

namespace chronos::privacy {

// Seller-level sensitivities.
double ValuationSensitivity(double bound, int n);        // 4B / n
double IndexStatsSensitivity(int n);                     // 1.5 / n
double AffinitySensitivity(double kappa_active, double eta);  // eta sqrt(kappa)

// sigma0 sqrt(T_active / t) for 1 <= t <= T_active.
double AdaptiveSigma(int t, int t_active, double sigma0);

// Noise stream for one (epoch, mechanism) pair.
Rng NoiseRng(uint64_t seed, int epoch, Mechanism m);

struct ScalarRelease {
  double value = 0;
  ReleaseRecord record;
};

// value + N(0, (sigma * S)^2).
ScalarRelease ReleaseScalar(double value, double sensitivity, double sigma,
                            Rng& rng, Mechanism m = Mechanism::kValuation,
                            int epoch = 0);

struct VectorRelease {
  std::vector<double> values;
  ReleaseRecord record;
};

// One vector Gaussian release: every coordinate gets N(0, (sigma * S)^2)
// where S is the l2 sensitivity of the whole vector; one record.
VectorRelease ReleaseVector(const std::vector<double>& values,
                            double sensitivity, double sigma, Rng& rng,
                            Mechanism m, int epoch);

struct NoisyAffinity {
  Eigen::MatrixXd values;  // |V_active| x ef, entries in [0, 1]
  int epoch = 0;
  double delta2 = 0;
  double sigma_entry = 0;
};

struct AffinityRelease {
  NoisyAffinity affinity;
  ReleaseRecord record;
};

// Adds iid N(0, (sigma * delta2)^2) to every entry and clips to [0, 1].
// One record with rho = 1/(2 sigma^2) whatever the matrix size. Throws
// ParameterError when the shape differs from (rows, cols) or when an input
// entry lies outside [0, 1].
AffinityRelease ReleaseAffinity(const Eigen::MatrixXd& a, int rows, int cols,
                                double delta2, double sigma, Rng& rng,
                                int epoch);

// Privacy actually delivered when each entry of a matrix with l2
// sensitivity delta2 receives noise of std sigma_entry: delta2^2 /
// (2 sigma_entry^2). Calibrating sigma_entry = sigma * delta2 / sqrt(m)
// (the global-variance mistake) makes this m times the nominal rho.
double DeliveredRho(double sigma_entry, double delta2);

// Phi(-(s_i - s_j) / (beta sigma_entry sqrt 2)); beta = 0 is the noise-free
// limit (0 for a strict gap, 0.5 for a tie).
double RankFlipProbability(double s_i, double s_j, double beta,
                           double sigma_entry);

// W phi n / (4 B n_coal sigma), evaluated exactly as printed.
double SettlementSnr(double window, double phi_coal, int n, int n_coal,
                     double bound, double sigma);

// Hash commitment SHA-256(encode(value) || nonce).
using Digest = std::array<uint8_t, 32>;
using Nonce = std::vector<uint8_t>;

// 16 bytes from the system CSPRNG.
Nonce MakeNonce();
// Throws ParameterError for nonces shorter than 128 bits.
Digest EscrowCommit(double value, const Nonce& nonce);
bool EscrowVerify(const Digest& digest, double value, const Nonce& nonce);
std::string ToHex(const Digest& d);

struct ExpMechanismTradeoff {
  double composed_eps = 0;       // basic composition of per-query releases
  double epoch_release_eps = 0;  // one matrix release per epoch (zCDP)
  double sampling_ops = 0;       // d k log k + d log d with d = ef
  bool per_query_competitive = false;
};

// Arithmetic comparison of per-query exponential-mechanism selection vs the
// epoch-level matrix release over `epochs` epochs.
ExpMechanismTradeoff CompareExpMechanism(int k, int ef,
                                         double queries_per_epoch,
                                         double eps_per_query, int epochs,
                                         double sigma, double delta);

}  // namespace chronos::privacy

#endif  // CHRONOS_PRIVACY_MECHANISMS_H_
