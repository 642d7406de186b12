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

#ifndef CHRONOS_VALUATION_SHAPLEY_H_
#define CHRONOS_VALUATION_SHAPLEY_H_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "chronos/valuation/game.h"
#include "chronos/valuation/mrr_value.h"

namespace chronos::valuation {

inline constexpr double kDefaultClip = 0.2;
inline constexpr double kNoClip = std::numeric_limits<double>::infinity();

struct MpvScores {
  std::vector<double> phi;
  std::vector<double> stderr_;
  std::size_t m = 0;
  int event = 0;
  double clip_fraction = 0;  // share of marginals with |marginal| > B
  // Control-variate diagnostics; zero for the plain estimator.
  std::vector<double> rho_cv;
  double variance_ratio = 1;  // summed variance, adjusted over plain

  double Sum() const;
  double MeanRho() const;
};

// Plain permutation sampling: m seeded permutations, marginals clipped to
// [-clip, clip]. Throws ParameterError for m < 1 or no players.
MpvScores ShapleyPermutation(const CoalitionValueFn& game, std::size_t m,
                             uint64_t seed, double clip = kDefaultClip);

// Permutation sampling with a control variate: on each permutation the
// proxy's clipped marginals are recorded alongside the game's, and the
// estimate subtracts c_i (proxy marginal - proxy Shapley value) with the
// variance-minimizing c_i. The proxy Shapley value is computed exactly when
// the proxy has at most 15 players and from a 10m-permutation pilot
// otherwise. A proxy marginal with zero variance leaves that seller on the
// plain estimate with rho_cv = 0.
MpvScores VrdsShapley(const CoalitionValueFn& game,
                      const CoalitionValueFn& proxy, std::size_t m,
                      uint64_t seed, double clip = kDefaultClip);

// Proxy built as the same game on a 10% query subsample.
MpvScores VrdsShapley(const MrrValueFunction& game, std::size_t m,
                      uint64_t seed, double clip = kDefaultClip,
                      double proxy_fraction = 0.1);

// Exact Shapley values by subset enumeration with factorial weights,
// optionally of the clipped game. Throws ParameterError above 15 players.
std::vector<double> GoldShapley(const CoalitionValueFn& game,
                                double clip = kNoClip);

// Event-conditioned scores: Shapley over the queries of `event` only.
MpvScores EcMpv(const MrrValueFunction& game, int event, std::size_t m,
                uint64_t seed, double clip = kDefaultClip);

// |sum_t sum_i scores[t][i] - sum_t gains[t]| where gains[t] is
// v(full | E_t) - v(public | E_t).
double EfficiencyResidual(const std::vector<std::vector<double>>& scores,
                          const std::vector<double>& gains);

// Standard error of the summed scores, sqrt(sum_t sum_i se^2).
double EfficiencyStderr(const std::vector<MpvScores>& scores);

// Mean-squared-error bound B^2 (1 - rho^2) / m + (sigma * S_val)^2.
double MpvErrorBound(double clip, double rho_cv, std::size_t m, double sigma,
                     double sensitivity);

// CSV with columns seller,event,mpv,stderr,m,clip_frac.
void WriteValuationCsv(const std::string& path,
                       const std::vector<MpvScores>& reports);

}  // namespace chronos::valuation

#endif  // CHRONOS_VALUATION_SHAPLEY_H_
