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

#include "chronos/index/recall.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "chronos/common/error.h"
#include "chronos/common/random.h"

namespace chronos::index {

std::vector<Query> SampleQueries(const PublicView& view, std::size_t count,
                                 double noise, uint64_t seed) {
  Require(view.size() > 0, "cannot sample queries from an empty view");
  Require(noise >= 0, "query noise must be non-negative");
  Rng rng = MakeRng(seed, "queries");
  std::uniform_int_distribution<uint32_t> pick(0, static_cast<uint32_t>(view.size() - 1));
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto dim = view.unit_embeddings.cols();
  const double sd = noise / std::sqrt(static_cast<double>(dim));
  std::vector<Query> out(count);
  for (auto& q : out) {
    q.anchor = static_cast<int>(pick(rng));
    q.vector = view.unit_embeddings.row(q.anchor).transpose();
    for (Eigen::Index i = 0; i < dim; ++i) q.vector[i] += sd * normal(rng);
  }
  return out;
}

std::vector<uint32_t> ExactTopK(const kg::EmbeddingMatrix& unit_embeddings,
                                const Eigen::VectorXd& query, int k) {
  Require(k >= 1, "k must be positive");
  const Eigen::VectorXd scores = unit_embeddings * query;
  std::vector<uint32_t> ids(scores.size());
  std::iota(ids.begin(), ids.end(), 0u);
  const std::size_t kk = std::min<std::size_t>(k, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + kk, ids.end(), [&](uint32_t a, uint32_t b) {
    return scores[a] != scores[b] ? scores[a] > scores[b] : a < b;
  });
  ids.resize(kk);
  return ids;
}

Oracle BuildOracle(const PublicView& view, const std::vector<Query>& queries,
                   int k) {
  Oracle out;
  out.reserve(queries.size());
  for (const auto& q : queries) out.push_back(ExactTopK(view.unit_embeddings, q.vector, k));
  return out;
}

double RecallAtK(const std::vector<SearchResult>& results,
                 const std::vector<uint32_t>& truth) {
  if (truth.empty()) return 1.0;
  std::size_t hit = 0;
  for (const auto& r : results) {
    if (std::find(truth.begin(), truth.end(), r.node) != truth.end()) ++hit;
  }
  return static_cast<double>(hit) / truth.size();
}

RecallMeasurement MeasureRecall(const HybridIndex& index,
                                const std::vector<Query>& queries,
                                const Oracle& oracle, int k,
                                const std::vector<uint8_t>* broken,
                                const std::vector<uint8_t>* misleading) {
  Require(!queries.empty(), "recall needs at least one query");
  Require(oracle.size() == queries.size(), "oracle size must match queries");
  RecallMeasurement m;
  m.per_query.reserve(queries.size());
  SearchOptions opt;
  opt.k = k;
  opt.broken = broken;
  opt.misleading = misleading;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    m.per_query.push_back(RecallAtK(index.Search(queries[i].vector, opt), oracle[i]));
  }
  m.mean = std::accumulate(m.per_query.begin(), m.per_query.end(), 0.0) /
           static_cast<double>(queries.size());
  return m;
}

double ImpactCalibration::TotalPath() const {
  return std::accumulate(path_size.begin(), path_size.end(), 0.0);
}

double ImpactCalibration::PooledDeltaR() const {
  const double total = TotalPath();
  if (total == 0) return 0;
  double sum = 0;
  for (std::size_t l = 0; l < delta_r.size(); ++l) sum += path_size[l] * delta_r[l];
  return sum / total;
}

ImpactCalibration CalibrateImpact(const HybridIndex& index,
                                  const std::vector<Query>& queries,
                                  const Oracle& oracle, int k,
                                  StaleEffect effect) {
  Require(!queries.empty(), "calibration needs at least one query");
  Require(oracle.size() == queries.size(), "oracle size must match queries");
  const std::size_t levels = static_cast<std::size_t>(index.top_level()) + 1;
  ImpactCalibration cal;
  cal.delta_r.assign(levels, 0);
  cal.max_per_query.assign(levels, 0);
  cal.max_drop.assign(levels, 0);
  cal.path_size.assign(levels, 0);
  cal.queries = queries.size();
  std::vector<std::size_t> removals(levels, 0);
  std::vector<uint8_t> mask(index.shortcut_slots(), 0);

  for (std::size_t qi = 0; qi < queries.size(); ++qi) {
    PathTrace trace;
    SearchOptions opt;
    opt.k = k;
    opt.trace = &trace;
    const double base = RecallAtK(index.Search(queries[qi].vector, opt), oracle[qi]);
    cal.fresh_recall += base;
    cal.max_path = std::max(cal.max_path, trace.shortcuts.size());
    std::vector<double> worst(levels, 0);
    opt.trace = nullptr;
    if (effect == StaleEffect::kBroken) {
      opt.broken = &mask;
    } else {
      opt.misleading = &mask;
    }
    for (std::size_t i = 0; i < trace.shortcuts.size(); ++i) {
      const int l = trace.levels[i];
      cal.path_size[l] += 1;
      mask[trace.shortcuts[i]] = 1;
      const double r = RecallAtK(index.Search(queries[qi].vector, opt), oracle[qi]);
      mask[trace.shortcuts[i]] = 0;
      const double drop = std::max(0.0, base - r);
      worst[l] = std::max(worst[l], drop);
      cal.delta_r[l] += drop;
      cal.max_drop[l] = std::max(cal.max_drop[l], drop);
      ++removals[l];
      ++cal.removals;
    }
    for (std::size_t l = 0; l < levels; ++l) cal.max_per_query[l] += worst[l];
  }
  const double nq = static_cast<double>(queries.size());
  cal.fresh_recall /= nq;
  for (std::size_t l = 0; l < levels; ++l) {
    cal.max_per_query[l] /= nq;
    cal.path_size[l] /= nq;
    if (removals[l] > 0) cal.delta_r[l] /= static_cast<double>(removals[l]);
  }
  return cal;
}

namespace {

void RequireNonNegative(double path_size, double delta_r, double dt, double r_star) {
  Require(path_size >= 0 && delta_r >= 0 && dt >= 0 && r_star >= 0,
          "bound parameters must be non-negative");
}

}  // namespace

double RecallBoundConservative(double path_size, double delta_r, double lambda,
                               double dt, double r_star) {
  RequireNonNegative(path_size, delta_r, dt, r_star);
  Require(lambda >= 0, "lambda must be non-negative");
  return r_star - path_size * delta_r * -std::expm1(-lambda * dt);
}

double RecallBoundTight(double path_size, double delta_r, double lambda,
                        double dt, double r_star, double certified_envelope) {
  Require(certified_envelope >= 0 && certified_envelope <= 1,
          "certified envelope must lie in [0, 1]");
  const double loss = r_star - RecallBoundConservative(path_size, delta_r, lambda, dt, r_star);
  return r_star - certified_envelope * loss;
}

HawkesRecallBound RecallBoundHawkes(double path_size, double delta_r,
                                    double mu, double xi, double dt,
                                    double r_star, double envelope,
                                    double delta_conf) {
  RequireNonNegative(path_size, delta_r, dt, r_star);
  Require(mu >= 0, "baseline intensity must be non-negative");
  Require(xi >= 0, "branching ratio must be non-negative");
  if (xi >= 1) throw StabilityError("Hawkes branching ratio must be below 1");
  Require(envelope >= 0 && envelope <= 1, "envelope must lie in [0, 1]");
  Require(delta_conf > 0 && delta_conf <= 1, "confidence level must lie in (0, 1]");
  const double amplification = 1.0 / (1.0 - xi);
  const double mean_loss = path_size * delta_r * mu * dt * envelope * amplification;
  const double hp_extra =
      delta_r * std::sqrt(2.0 * path_size * std::log(1.0 / delta_conf)) * amplification;
  return {r_star - mean_loss, r_star - mean_loss - hp_extra};
}

}  // namespace chronos::index
