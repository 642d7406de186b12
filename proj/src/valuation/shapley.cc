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

#include "chronos/valuation/shapley.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"
#include "chronos/common/random.h"

namespace chronos::valuation {
namespace {

// Proxy marginal variance below this is treated as zero (roundoff on
// constant marginals).
constexpr double kDegenerateVariance = 1e-20;

double Clip(double x, double bound) { return std::clamp(x, -bound, bound); }

// Walks m permutations and hands each player's clipped marginal to `sink`.
// Returns the share of marginals that exceeded the clip bound.
template <typename Sink>
double WalkPermutations(const CoalitionValueFn& game, std::size_t m,
                        uint64_t seed, double clip, Sink&& sink) {
  const int n = game.players();
  Rng rng = MakeRng(seed, "shapley-permutations");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Coalition members(n, 0);
  const double empty = game.Value(members);
  std::size_t clipped = 0;
  for (std::size_t r = 0; r < m; ++r) {
    std::shuffle(order.begin(), order.end(), rng);
    std::fill(members.begin(), members.end(), 0);
    double prev = empty;
    for (int i : order) {
      members[i] = 1;
      const double cur = game.Value(members);
      const double marginal = cur - prev;
      if (std::abs(marginal) > clip) ++clipped;
      sink(r, i, Clip(marginal, clip));
      prev = cur;
    }
  }
  return static_cast<double>(clipped) / static_cast<double>(m * n);
}

void RequireGame(const CoalitionValueFn& game, std::size_t m, double clip) {
  Require(game.players() >= 1, "game needs at least one player");
  Require(m >= 1, "need at least one permutation");
  Require(clip > 0, "clip bound must be positive");
}

}  // namespace

double MpvScores::Sum() const {
  CompensatedSum s;
  for (double x : phi) s.Add(x);
  return s.value();
}

double MpvScores::MeanRho() const {
  if (rho_cv.empty()) return 0;
  return std::accumulate(rho_cv.begin(), rho_cv.end(), 0.0) / rho_cv.size();
}

MpvScores ShapleyPermutation(const CoalitionValueFn& game, std::size_t m,
                             uint64_t seed, double clip) {
  RequireGame(game, m, clip);
  const int n = game.players();
  CachedGame cached(game);
  std::vector<double> sum(n, 0), sumsq(n, 0);
  MpvScores out;
  out.m = m;
  out.clip_fraction = WalkPermutations(cached, m, seed, clip, [&](std::size_t, int i, double x) {
    sum[i] += x;
    sumsq[i] += x * x;
  });
  out.phi.resize(n);
  out.stderr_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double mean = sum[i] / m;
    const double var = m > 1 ? std::max(0.0, (sumsq[i] - m * mean * mean) / (m - 1)) : 0.0;
    out.phi[i] = mean;
    out.stderr_[i] = std::sqrt(var / m);
  }
  out.rho_cv.assign(n, 0.0);
  return out;
}

std::vector<double> GoldShapley(const CoalitionValueFn& game, double clip) {
  const int n = game.players();
  Require(n >= 1, "game needs at least one player");
  Require(n <= 15, "exhaustive Shapley is limited to 15 players");
  Require(clip > 0, "clip bound must be positive");
  const uint32_t full = 1u << n;
  std::vector<double> value(full);
  Coalition members(n);
  for (uint32_t mask = 0; mask < full; ++mask) {
    for (int i = 0; i < n; ++i) members[i] = (mask >> i) & 1u;
    value[mask] = game.Value(members);
  }
  // weight[s] = s! (n - s - 1)! / n!
  std::vector<double> weight(n);
  for (int s = 0; s < n; ++s) {
    weight[s] = std::exp(std::lgamma(s + 1.0) + std::lgamma(n - s + 0.0) - std::lgamma(n + 1.0));
  }
  std::vector<double> phi(n);
  for (int i = 0; i < n; ++i) {
    CompensatedSum acc;
    const uint32_t bit = 1u << i;
    for (uint32_t mask = 0; mask < full; ++mask) {
      if (mask & bit) continue;
      const double marginal = value[mask | bit] - value[mask];
      acc.Add(weight[std::popcount(mask)] * (std::isinf(clip) ? marginal : Clip(marginal, clip)));
    }
    phi[i] = acc.value();
  }
  return phi;
}

MpvScores VrdsShapley(const CoalitionValueFn& game,
                      const CoalitionValueFn& proxy, std::size_t m,
                      uint64_t seed, double clip) {
  RequireGame(game, m, clip);
  const int n = game.players();
  Require(proxy.players() == n, "proxy must have the same players");

  std::vector<double> proxy_mean;
  if (n <= 15) {
    proxy_mean = GoldShapley(proxy, clip);
  } else {
    proxy_mean = ShapleyPermutation(proxy, 10 * m, DeriveSeed(seed, "vrds-pilot", 0), clip).phi;
  }

  // Paired game/proxy marginals on the same permutations.
  const CachedGame cached_game(game);
  const CachedGame cached_proxy(proxy);
  std::vector<std::vector<double>> x(n, std::vector<double>(m));
  std::vector<std::vector<double>> y(n, std::vector<double>(m));
  MpvScores out;
  out.m = m;
  out.clip_fraction = WalkPermutations(cached_game, m, seed, clip, [&](std::size_t r, int i, double v) {
    x[i][r] = v;
  });
  // Same seed -> same permutations for the proxy.
  WalkPermutations(cached_proxy, m, seed, clip, [&](std::size_t r, int i, double v) {
    y[i][r] = v;
  });

  out.phi.resize(n);
  out.stderr_.resize(n);
  out.rho_cv.assign(n, 0.0);
  double var_plain_total = 0, var_adj_total = 0;
  for (int i = 0; i < n; ++i) {
    const MeanStd mx = ComputeMeanStd(x[i]);
    const MeanStd my = ComputeMeanStd(y[i]);
    double cov = 0;
    for (std::size_t r = 0; r < m; ++r) cov += (x[i][r] - mx.mean) * (y[i][r] - my.mean);
    cov = m > 1 ? cov / (m - 1) : 0.0;
    const double vx = mx.stddev * mx.stddev;
    const double vy = my.stddev * my.stddev;
    double c = 0;
    if (vy > kDegenerateVariance) {
      c = cov / vy;
      if (vx > 0) out.rho_cv[i] = cov / std::sqrt(vx * vy);
    }
    std::vector<double> z(m);
    for (std::size_t r = 0; r < m; ++r) z[r] = x[i][r] - c * (y[i][r] - proxy_mean[i]);
    const MeanStd mz = ComputeMeanStd(z);
    out.phi[i] = mz.mean;
    out.stderr_[i] = mz.stddev / std::sqrt(static_cast<double>(m));
    var_plain_total += vx;
    var_adj_total += mz.stddev * mz.stddev;
  }
  out.variance_ratio = var_plain_total > 0 ? var_adj_total / var_plain_total : 1.0;
  return out;
}

MpvScores VrdsShapley(const MrrValueFunction& game, std::size_t m,
                      uint64_t seed, double clip, double proxy_fraction) {
  const MrrValueFunction proxy =
      game.Subsample(proxy_fraction, DeriveSeed(seed, "vrds-proxy", 0));
  return VrdsShapley(static_cast<const CoalitionValueFn&>(game), proxy, m, seed, clip);
}

MpvScores EcMpv(const MrrValueFunction& game, int event, std::size_t m,
                uint64_t seed, double clip) {
  const MrrValueFunction segment = game.ForSegment(event);
  MpvScores out = ShapleyPermutation(segment, m, seed, clip);
  out.event = event;
  return out;
}

double EfficiencyResidual(const std::vector<std::vector<double>>& scores,
                          const std::vector<double>& gains) {
  Require(scores.size() == gains.size(), "one gain per epoch is required");
  CompensatedSum total;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    for (double s : scores[t]) total.Add(s);
    total.Add(-gains[t]);
  }
  return std::abs(total.value());
}

double EfficiencyStderr(const std::vector<MpvScores>& scores) {
  double var = 0;
  for (const auto& s : scores) {
    for (double se : s.stderr_) var += se * se;
  }
  return std::sqrt(var);
}

double MpvErrorBound(double clip, double rho_cv, std::size_t m, double sigma,
                     double sensitivity) {
  Require(m >= 1, "m must be at least 1");
  Require(rho_cv >= 0 && rho_cv <= 1, "rho_cv must lie in [0, 1]");
  Require(clip >= 0 && sigma >= 0 && sensitivity >= 0,
          "bound parameters must be non-negative");
  return clip * clip * (1 - rho_cv * rho_cv) / static_cast<double>(m) +
         (sigma * sensitivity) * (sigma * sensitivity);
}

void WriteValuationCsv(const std::string& path,
                       const std::vector<MpvScores>& reports) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out.precision(10);
  out << "seller,event,mpv,stderr,m,clip_frac\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.phi.size(); ++i) {
      out << i << ',' << r.event << ',' << r.phi[i] << ',' << r.stderr_[i] << ','
          << r.m << ',' << r.clip_fraction << '\n';
    }
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace chronos::valuation
