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

#include "chronos/kg/change_process.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "chronos/common/error.h"
#include "chronos/common/random.h"

namespace chronos::kg {
namespace {

void AppendPoisson(uint32_t unit, double rate, double t0, double t1, Rng& rng,
                   ChangeLog& out) {
  std::exponential_distribution<double> gap(rate);
  for (double t = t0 + gap(rng); t < t1; t += gap(rng)) out.push_back({unit, t});
}

// Ogata thinning. Between events the intensity only decays, so the
// intensity at the current time bounds it until the next candidate.
void AppendHawkes(uint32_t unit, double mu, double alpha, double beta,
                  double t0, double t1, Rng& rng, ChangeLog& out) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double t = t0;
  double excitation = 0;
  while (true) {
    double bound = mu + excitation;
    std::exponential_distribution<double> gap(bound);
    double w = gap(rng);
    t += w;
    if (t >= t1) break;
    excitation *= std::exp(-beta * w);
    if (unif(rng) * bound <= mu + excitation) {
      out.push_back({unit, t});
      excitation += alpha;
    }
  }
}

template <typename RateFn>
void AppendThinned(uint32_t unit, RateFn rate_at, double bound, double t0,
                   double t1, Rng& rng, ChangeLog& out) {
  std::exponential_distribution<double> gap(bound);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double t = t0 + gap(rng); t < t1; t += gap(rng)) {
    if (unif(rng) * bound <= rate_at(t)) out.push_back({unit, t});
  }
}

}  // namespace

ChangeProcess ChangeProcess::Poisson(double rate) {
  ChangeProcess p;
  p.kind = ProcessKind::kPoisson;
  p.rate = rate;
  return p;
}

ChangeProcess ChangeProcess::Hawkes(double mu, double alpha, double beta) {
  ChangeProcess p;
  p.kind = ProcessKind::kHawkes;
  p.hawkes_mu = mu;
  p.hawkes_alpha = alpha;
  p.hawkes_beta = beta;
  p.rate = mu / (1.0 - alpha / beta);
  return p;
}

ChangeProcess ChangeProcess::Sinusoidal(double rate, double period_days) {
  ChangeProcess p;
  p.kind = ProcessKind::kSinusoidal;
  p.rate = rate;
  p.period_days = period_days;
  return p;
}

ChangeProcess ChangeProcess::Blocks(std::vector<double> rates,
                                    double block_days) {
  ChangeProcess p;
  p.kind = ProcessKind::kBlockHomogeneous;
  p.block_rates = std::move(rates);
  p.block_days = block_days;
  if (!p.block_rates.empty()) {
    p.rate = std::accumulate(p.block_rates.begin(), p.block_rates.end(), 0.0) /
             static_cast<double>(p.block_rates.size());
  }
  return p;
}

double ChangeProcess::MeanRate() const {
  switch (kind) {
    case ProcessKind::kHawkes:
      return hawkes_mu / (1.0 - BranchingRatio());
    case ProcessKind::kBlockHomogeneous:
      return std::accumulate(block_rates.begin(), block_rates.end(), 0.0) /
             static_cast<double>(block_rates.size());
    default:
      return rate;
  }
}

void ChangeProcess::Validate() const {
  switch (kind) {
    case ProcessKind::kPoisson:
      Require(rate > 0, "change rate must be > 0");
      break;
    case ProcessKind::kSinusoidal:
      Require(rate > 0, "change rate must be > 0");
      Require(period_days > 0, "period must be > 0");
      break;
    case ProcessKind::kHawkes:
      Require(hawkes_mu > 0 && hawkes_alpha >= 0 && hawkes_beta > 0,
              "hawkes parameters must be positive");
      if (BranchingRatio() >= 1.0) {
        throw StabilityError("hawkes branching ratio must be < 1");
      }
      break;
    case ProcessKind::kBlockHomogeneous:
      Require(!block_rates.empty(), "block rates must be non-empty");
      Require(block_days > 0, "block length must be > 0");
      for (double r : block_rates) Require(r > 0, "block rates must be > 0");
      break;
  }
}

ChangeLog SimulateUnitChanges(std::span<const uint32_t> units,
                              const ChangeProcess& p, double t_begin,
                              double t_end, uint64_t seed,
                              std::span<const double> rate_scale) {
  p.Validate();
  Require(t_end > t_begin, "horizon must be > 0");
  Require(rate_scale.empty() || rate_scale.size() == units.size(),
          "rate_scale must match units");
  ChangeLog out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const uint32_t unit = units[i];
    const double scale = rate_scale.empty() ? 1.0 : rate_scale[i];
    if (scale <= 0) continue;
    Rng rng(DeriveSeed(seed, "unit-change", unit));
    switch (p.kind) {
      case ProcessKind::kPoisson:
        AppendPoisson(unit, p.rate * scale, t_begin, t_end, rng, out);
        break;
      case ProcessKind::kHawkes:
        AppendHawkes(unit, p.hawkes_mu * scale, p.hawkes_alpha, p.hawkes_beta,
                     t_begin, t_end, rng, out);
        break;
      case ProcessKind::kSinusoidal: {
        const double base = p.rate * scale;
        const double w = 2.0 * std::numbers::pi / p.period_days;
        AppendThinned(
            unit, [&](double t) { return base * (1.0 + 0.5 * std::sin(w * t)); },
            1.5 * base, t_begin, t_end, rng, out);
        break;
      }
      case ProcessKind::kBlockHomogeneous: {
        const double peak =
            *std::max_element(p.block_rates.begin(), p.block_rates.end()) * scale;
        const auto& rates = p.block_rates;
        const double len = p.block_days;
        AppendThinned(
            unit,
            [&](double t) {
              auto b = static_cast<std::size_t>(std::floor(t / len));
              return rates[b % rates.size()] * scale;
            },
            peak, t_begin, t_end, rng, out);
        break;
      }
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ChangeEvent& a, const ChangeEvent& b) {
                     return a.time < b.time;
                   });
  return out;
}

ChangeLog SimulateChanges(const TemporalKG& kg, const ChangeProcess& process,
                          double horizon_days, uint64_t seed) {
  Require(horizon_days > 0, "horizon must be > 0");
  std::vector<uint32_t> units(kg.edge_count());
  std::iota(units.begin(), units.end(), 0u);
  return SimulateUnitChanges(units, process, 0.0, horizon_days, seed);
}

}  // namespace chronos::kg
