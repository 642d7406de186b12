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

#include "chronos/harness/simulation.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"
#include "chronos/common/random.h"
#include "chronos/decay/samples.h"
#include "chronos/harness/workload.h"
#include "chronos/index/recall.h"
#include "chronos/index/staleness.h"
#include "chronos/kg/clipping.h"
#include "chronos/kg/generator.h"
#include "chronos/kg/sellers.h"
#include "chronos/privacy/mechanisms.h"
#include "chronos/valuation/mrr_value.h"

namespace chronos::harness {
namespace {

using coordinator::Action;
using coordinator::OverrideKind;
using privacy::Mechanism;

// Smoothing weight for the released recall estimate (post-processing).
constexpr double kRecallSmoothing = 0.1;
// Query noise for recall probes.
constexpr double kProbeNoise = 0.3;
// Probes behind the released recall statistic; the metric uses all of them.
constexpr std::size_t kStatsProbes = 25;

double UnitHash(uint64_t seed, uint64_t slot, double time) {
  uint64_t bits;
  std::memcpy(&bits, &time, sizeof bits);
  const uint64_t h = Mix64(Mix64(seed ^ slot) + bits);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// A stale link misleads the router when it is trusted. Decay-aware builds
// trust a link with probability decay(age since repair); unweighted builds
// trust every link.
std::vector<uint8_t> MisleadingMask(const index::StalenessState& state,
                                    const decay::SurvivalCurve& curve, bool decay_aware,
                                    double t_now, uint64_t seed) {
  const auto& stale = state.stale();
  std::vector<uint8_t> mask(stale.size(), 0);
  for (std::size_t i = 0; i < stale.size(); ++i) {
    if (!stale[i]) continue;
    if (!decay_aware) {
      mask[i] = 1;
      continue;
    }
    const double repaired = state.last_repair(static_cast<index::ShortcutId>(i));
    mask[i] = UnitHash(seed, i, repaired) < curve(t_now - repaired);
  }
  return mask;
}

struct SellerEdge {
  uint32_t other;
  double t_created;
};

class Simulation {
 public:
  explicit Simulation(const SimulationConfig& config);
  RunResult Run();

 private:
  double Sigma();
  double RhoFor(double sigma) const { return 1 / (2 * sigma * sigma); }
  bool Fits(double rho) const;
  void ServeEpoch(std::size_t epoch, std::size_t count);
  void IndexUpdate(std::size_t epoch);
  void Revalue(std::size_t epoch);
  void ReleaseAffinity(std::size_t epoch, double sigma);
  void DailyDrift(std::size_t epoch);
  double MeasureRecall();

  SimulationConfig cfg_;
  RunResult out_;
  decay::SurvivalCurve curve_;
  index::DecayFn decay_fn_;
  kg::TemporalKG kg_;
  kg::SellerPartition sellers_;
  std::vector<kg::EdgeKey> keys_;
  int64_t c_max_ = 0;
  std::shared_ptr<const index::PublicView> view_;
  index::HybridIndex index_;
  index::StalenessState staleness_;
  std::vector<index::Query> probes_;
  index::Oracle oracle_;
  std::vector<index::Query> stats_probes_;
  index::Oracle stats_oracle_;
  std::vector<double> public_degree_;
  std::vector<std::vector<SellerEdge>> seller_edges_;
  QueryWorkload workload_;
  coordinator::Coordinator coordinator_;
  coordinator::QpsNormalizer qps_;
  changepoint::Bocpd bocpd_;

  double t_now_ = 0;
  std::size_t active_count_ = 0;  // active epochs so far, for the schedule
  std::vector<uint64_t> frequency_;
  std::vector<uint32_t> last_epoch_queries_;
  std::vector<uint32_t> scope_;
  std::vector<uint8_t> misleading_;
  index::AffinityLayout layout_;
  Eigen::MatrixXd released_affinity_;
  bool have_affinity_ = false;
  std::vector<valuation::ValuationQuery> valuation_log_;
  Eigen::VectorXd day_sum_;
  std::size_t day_count_ = 0;
  int segment_ = 0;
  std::size_t n_pending_ = 0;
  bool event_active_ = false;
  double recall_hat_ = 1;
  double recall_smoothed_ = 1;  // unclamped running estimate
  double lambda_hat_ = 0;
  std::size_t changes_since_stats_ = 0;
  double last_stats_time_ = 0;
  double true_recall_ = 1;
  Rng sim_rng_;
};

Simulation::Simulation(const SimulationConfig& config)
    : cfg_(config),
      decay_fn_([c = decay::SurvivalCurve{}](double dt) { return c(dt); }),
      kg_([&] {
        kg::SyntheticKgConfig k = config.kg;
        k.seed = DeriveSeed(config.seed, "kg");
        k.n_sellers = config.n_sellers;
        return kg::GenerateSyntheticKg(k);
      }()),
      workload_(config.kg.n_nodes, config.zipf_exponent, config.workload_shifts,
                DeriveSeed(config.seed, "workload")),
      coordinator_({config.horizon == 0 ? 1 : config.horizon, config.recall_floor, {}},
                   DeriveSeed(config.seed, "coordinator")),
      bocpd_(config.kg.dim, config.bocpd),
      sim_rng_(MakeRng(config.seed, "simulation")) {
  out_.config = cfg_;
  out_.accountant = privacy::PrivacyAccountant(cfg_.eps_total, cfg_.delta);

  keys_ = kg_.Keys();
  const kg::SellerPartition raw =
      kg::PartitionSellers(kg_, cfg_.n_sellers, cfg_.seller_skew, DeriveSeed(cfg_.seed, "sellers"));
  sellers_ = kg::ClipStage1(raw, keys_, kg_.edge_count());
  c_max_ = kg::EdgeCap(kg_.edge_count(), cfg_.n_sellers);

  // Curator-side lookup for the valuation workload.
  seller_edges_.resize(kg_.node_count());
  const auto edges = kg_.edges();
  std::vector<uint8_t> admitted(edges.size(), 0);
  for (const auto& ds : sellers_.datasets) {
    for (kg::EdgeId id : ds) admitted[id] = 1;
  }
  for (std::size_t id = 0; id < edges.size(); ++id) {
    if (!admitted[id] || edges[id].u == edges[id].v) continue;
    seller_edges_[edges[id].u].push_back({edges[id].v, edges[id].t_created});
    seller_edges_[edges[id].v].push_back({edges[id].u, edges[id].t_created});
  }

  const kg::TemporalKG pub = kg_.PublicSubgraph();
  view_ = index::PublicView::FromKg(pub, DeriveSeed(cfg_.seed, "view"));
  public_degree_.resize(view_->size());
  for (std::size_t v = 0; v < view_->size(); ++v) {
    public_degree_[v] = static_cast<double>(view_->neighbours[v].size());
  }
  t_now_ = kg_.launch_time();
  index::IndexParams p;
  p.m = cfg_.m;
  p.ef = cfg_.ef;
  p.beta = cfg_.beta;
  p.seed = DeriveSeed(cfg_.seed, "index");
  index_ = index::HybridIndex::Build(view_, decay_fn_, t_now_, p);
  staleness_ = index::StalenessState(index_, t_now_);
  probes_ = index::SampleQueries(*view_, cfg_.recall_queries, kProbeNoise,
                                 DeriveSeed(cfg_.seed, "probes"));
  oracle_ = index::BuildOracle(*view_, probes_, cfg_.k);
  const std::size_t n_stats = std::min(kStatsProbes, probes_.size());
  stats_probes_.assign(probes_.begin(), probes_.begin() + n_stats);
  stats_oracle_.assign(oracle_.begin(), oracle_.begin() + n_stats);
  frequency_.assign(kg_.node_count(), 0);
  day_sum_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kg_.dim()));
  last_stats_time_ = t_now_;
}

double Simulation::Sigma() {
  if (cfg_.schedule == NoiseSchedule::kFixed) return cfg_.sigma0;
  const std::size_t t = std::clamp<std::size_t>(active_count_, 1, cfg_.t_active_plan);
  return privacy::AdaptiveSigma(static_cast<int>(t), static_cast<int>(cfg_.t_active_plan),
                                cfg_.sigma0);
}

bool Simulation::Fits(double rho) const {
  if (!cfg_.enforce_budget || cfg_.force_all_active) return true;
  return coordinator::ProjectedEpsilon(out_.accountant, rho) <=
         out_.accountant.EpsRemaining();
}

double Simulation::MeasureRecall() {
  return index::MeasureRecall(index_, probes_, oracle_, cfg_.k, nullptr, &misleading_).mean;
}

void Simulation::ServeEpoch(std::size_t epoch, std::size_t count) {
  last_epoch_queries_.clear();
  ServingView sv;
  sv.index = &index_;
  sv.misleading = &misleading_;
  sv.affinity = have_affinity_ ? &released_affinity_ : nullptr;
  sv.layout = &layout_;
  sv.beta = cfg_.beta;
  sv.k = cfg_.k;
  sv.ef = cfg_.ef;
  for (std::size_t q = 0; q < count; ++q) {
    const uint32_t anchor = workload_.SampleAnchor(epoch, sim_rng_);
    const Eigen::VectorXd vec = view_->unit_embeddings.row(anchor).transpose();
    ServeQuery(sv, vec, static_cast<int>(anchor));
    last_epoch_queries_.push_back(anchor);
    ++frequency_[anchor];
    day_sum_ += vec;
    ++day_count_;

    // Curator side: a query whose anchor has a live seller link becomes a
    // valuation query with that link's other endpoint as the target.
    const auto& links = seller_edges_[anchor];
    std::vector<uint32_t> live;
    for (const auto& l : links) {
      if (l.t_created <= t_now_) live.push_back(l.other);
    }
    if (!live.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
      valuation_log_.push_back({anchor, live[pick(sim_rng_)], t_now_, segment_});
      ++n_pending_;
    }
  }
}

void Simulation::IndexUpdate(std::size_t epoch) {
  index::Maintain(index_, staleness_, scope_, t_now_);
  misleading_ = MisleadingMask(staleness_, curve_, cfg_.beta > 0, t_now_, cfg_.seed);
  const double recall =
      index::MeasureRecall(index_, stats_probes_, stats_oracle_, cfg_.k, nullptr, &misleading_)
          .mean;
  const double days = std::max(t_now_ - last_stats_time_, 1.0 / cfg_.epochs_per_day);
  const double live = std::max<double>(1, static_cast<double>(staleness_.LiveCount()));
  const double lambda_obs = static_cast<double>(changes_since_stats_) / (live * days);
  Rng rng = privacy::NoiseRng(cfg_.seed, static_cast<int>(epoch), Mechanism::kIndexStats);
  const auto rel = privacy::ReleaseVector({recall, lambda_obs}, cfg_.IndexStatsSensitivity(),
                                          Sigma(), rng, Mechanism::kIndexStats,
                                          static_cast<int>(epoch));
  out_.accountant.Add(rel.record);
  recall_smoothed_ += kRecallSmoothing * (rel.values[0] - recall_smoothed_);
  recall_hat_ = recall_smoothed_;  // unclamped; the reward clamps it
  lambda_hat_ = std::max(0.0, rel.values[1]);
  changes_since_stats_ = 0;
  last_stats_time_ = t_now_;
}

void Simulation::Revalue(std::size_t epoch) {
  if (valuation_log_.empty()) return;
  // Latest queries of the newest segment that has any.
  const int seg = valuation_log_.back().segment;
  std::vector<valuation::ValuationQuery> window;
  for (auto it = valuation_log_.rbegin();
       it != valuation_log_.rend() && window.size() < cfg_.valuation_window; ++it) {
    if (it->segment == seg) window.push_back(*it);
  }
  std::reverse(window.begin(), window.end());
  valuation::MrrConfig mc;
  mc.beta = cfg_.beta;
  mc.decay = decay_fn_;
  const valuation::MrrValueFunction game(kg_, sellers_, window, mc);
  if (game.active_queries() == 0) return;
  valuation::MpvScores scores =
      valuation::EcMpv(game, seg, cfg_.valuation_permutations,
                       DeriveSeed(cfg_.seed, "revalue", epoch), cfg_.clip_bound);
  Rng rng = privacy::NoiseRng(cfg_.seed, static_cast<int>(epoch), Mechanism::kValuation);
  const auto rel = privacy::ReleaseVector(
      scores.phi, privacy::ValuationSensitivity(cfg_.clip_bound, cfg_.n_sellers), Sigma(), rng,
      Mechanism::kValuation, static_cast<int>(epoch));
  out_.accountant.Add(rel.record);
  scores.phi = rel.values;
  out_.valuations.push_back(std::move(scores));
  n_pending_ = 0;
  event_active_ = false;
}

void Simulation::ReleaseAffinity(std::size_t epoch, double sigma) {
  std::vector<uint32_t> next_scope =
      BuildActiveScope(last_epoch_queries_, frequency_, public_degree_, cfg_.reserve,
                       cfg_.active_cap);
  std::vector<bool> mask(kg_.node_count(), false);
  for (uint32_t v : next_scope) mask[v] = true;
  std::size_t e_active = 0;
  for (const auto& e : view_->edges) e_active += mask[e.u] && mask[e.v];
  const kg::Stage2Result clipped =
      kg::ClipStage2(sellers_, keys_, mask, e_active, cfg_.n_sellers, c_max_);
  if (clipped.kappa_active <= 0) return;
  std::vector<kg::EdgeId> admitted;
  for (const auto& ds : clipped.partition.datasets) {
    admitted.insert(admitted.end(), ds.begin(), ds.end());
  }
  std::sort(admitted.begin(), admitted.end());
  admitted.erase(std::unique(admitted.begin(), admitted.end()), admitted.end());
  index::AffinityLayout layout = index::AffinityLayout::Make(index_, next_scope);
  const Eigen::MatrixXd a =
      index::ComputeAffinity(kg_, admitted, index_, layout, decay_fn_, t_now_);
  const double delta2 =
      privacy::AffinitySensitivity(static_cast<double>(clipped.kappa_active), cfg_.affinity_eta);
  Rng rng = privacy::NoiseRng(cfg_.seed, static_cast<int>(epoch), Mechanism::kAffinity);
  auto rel = privacy::ReleaseAffinity(a, layout.rows(), layout.cols, delta2, sigma, rng,
                                      static_cast<int>(epoch));
  out_.accountant.Add(rel.record);
  released_affinity_ = std::move(rel.affinity.values);
  layout_ = std::move(layout);
  have_affinity_ = true;
}

void Simulation::DailyDrift(std::size_t epoch) {
  if (day_count_ == 0) return;
  const Eigen::VectorXd mean = day_sum_ / static_cast<double>(day_count_);
  day_sum_.setZero();
  day_count_ = 0;
  if (bocpd_.Update(std::span<const double>(mean.data(), static_cast<std::size_t>(mean.size())))) {
    ++segment_;
    event_active_ = true;
    out_.events.push_back({static_cast<long>(epoch), bocpd_.events(), bocpd_.ChangeMass(),
                           "query-drift"});
  }
}

RunResult Simulation::Run() {
  const std::size_t epd = static_cast<std::size_t>(cfg_.epochs_per_day);
  const double dt = 1.0 / cfg_.epochs_per_day;
  misleading_ = MisleadingMask(staleness_, curve_, cfg_.beta > 0, t_now_, cfg_.seed);
  true_recall_ = cfg_.horizon ? MeasureRecall() : 1.0;
  int rr_next = 0;
  bool exhausted = false;
  std::size_t skipped_affinity = 0;

  for (std::size_t e = 0; e < cfg_.horizon; ++e) {
    t_now_ = kg_.launch_time() + static_cast<double>(e) * dt;
    const std::size_t records_before = out_.accountant.size();

    // KG changes reach random shortcut slots.
    const double expected = cfg_.change_rate * dt * static_cast<double>(index_.shortcut_slots());
    const std::size_t changes = std::poisson_distribution<std::size_t>(expected)(sim_rng_);
    std::uniform_int_distribution<std::size_t> slot(0, index_.shortcut_slots() - 1);
    for (std::size_t c = 0; c < changes; ++c) {
      staleness_.Touch(static_cast<index::ShortcutId>(slot(sim_rng_)), t_now_);
    }
    changes_since_stats_ += changes;
    misleading_ = MisleadingMask(staleness_, curve_, cfg_.beta > 0, t_now_, cfg_.seed);

    // Scope for this epoch from the previous epoch's queries.
    scope_ = BuildActiveScope(last_epoch_queries_, frequency_, public_degree_, cfg_.reserve,
                              cfg_.active_cap);

    // Queries, served on the current public state.
    const double hours = static_cast<double>(e % epd) * 24.0 / static_cast<double>(epd);
    const double rate = cfg_.diurnal ? DiurnalRate(cfg_.query_rate, hours) : cfg_.query_rate;
    const std::size_t queries = std::poisson_distribution<std::size_t>(rate)(sim_rng_);
    ServeEpoch(e, queries);

    // Decision.
    const double sigma = Sigma();
    const double rho = RhoFor(sigma);
    coordinator::CoordinatorState state;
    state.lambda_hat = lambda_hat_;
    state.recall_hat = recall_hat_;
    state.eps_rem = out_.accountant.EpsRemaining();
    state.n_pending = static_cast<double>(n_pending_);
    state.event_active = event_active_;
    const double proj = coordinator::ProjectedEpsilon(out_.accountant, rho);
    const std::array<double, coordinator::kActionCount> projected = {proj, proj, 0.0};

    Action action = Action::kNull;
    OverrideKind override_kind = OverrideKind::kNone;
    if (cfg_.force_all_active) {
      action = Action::kIndexUpdate;
    } else if (cfg_.policy == PolicyKind::kCoordinator) {
      const auto d = coordinator_.Decide(static_cast<int>(e), state, projected);
      action = d.action;
      override_kind = d.override_kind;
    } else {
      action = static_cast<Action>(rr_next);
      rr_next = (rr_next + 1) % coordinator::kActionCount;
      if (cfg_.enforce_budget) {
        const auto d = coordinator::ApplyOverrides(action, state, projected, cfg_.recall_floor);
        action = d.action;
        override_kind = d.kind;
      }
    }
    if (override_kind == OverrideKind::kBudget) exhausted = true;

    const bool active = ClassifyEpoch(action, queries) == EpochKind::kActive ||
                        cfg_.force_all_active;
    if (active) ++active_count_;
    const double eps_before = out_.accountant.ZcdpEpsilon();
    const double release_sigma = Sigma();

    // Execute.
    if (cfg_.force_all_active) {
      IndexUpdate(e);
      Revalue(e);
      if (out_.accountant.size() == records_before + 1) {
        // Nothing to value yet; the ledger still carries the worst case.
        out_.accountant.Add(privacy::ReleaseRecord::Gaussian(
            Mechanism::kValuation, static_cast<int>(e), release_sigma,
            privacy::ValuationSensitivity(cfg_.clip_bound, cfg_.n_sellers)));
      }
    } else if (action == Action::kIndexUpdate) {
      IndexUpdate(e);
    } else if (action == Action::kRevalue) {
      Revalue(e);
    }
    const double eps_action = out_.accountant.ZcdpEpsilon() - eps_before;

    if (queries >= 1 || cfg_.force_all_active) {
      if (Fits(RhoFor(release_sigma))) {
        const std::size_t n_before = out_.accountant.size();
        ReleaseAffinity(e, release_sigma);
        if (cfg_.force_all_active && out_.accountant.size() == n_before) {
          out_.accountant.Add(privacy::ReleaseRecord::Gaussian(
              Mechanism::kAffinity, static_cast<int>(e), release_sigma, 1.0));
        }
      } else {
        ++skipped_affinity;
        exhausted = true;
      }
    }
    if (!active && out_.accountant.size() != records_before) {
      throw ContractViolation("null epoch appended a release");
    }

    if ((e + 1) % epd == 0) DailyDrift(e);

    if (cfg_.policy == PolicyKind::kCoordinator && !cfg_.force_all_active) {
      const double qps = qps_.Normalize(static_cast<double>(queries));
      state.recall_hat = recall_hat_;
      coordinator_.Feedback(coordinator::Reward(state, action, qps, eps_action, {}));
    }

    MetricsRecord rec;
    rec.epoch = e;
    rec.recall_measured = e % static_cast<std::size_t>(cfg_.recall_every) == 0;
    if (rec.recall_measured) true_recall_ = MeasureRecall();
    rec.recall = true_recall_;
    rec.queries = queries;
    rec.rho_cum = out_.accountant.RhoTotal();
    rec.eps_cum = out_.accountant.ZcdpEpsilon();
    rec.stale_fraction = staleness_.StaleFraction();
    rec.action = action;
    rec.override_kind = override_kind;
    rec.active = active;
    rec.sigma = release_sigma;
    rec.events = bocpd_.events();
    rec.mpv_snapshot = action == Action::kRevalue || cfg_.force_all_active
                           ? static_cast<int>(out_.valuations.size()) - 1
                           : -1;
    out_.metrics.push_back(rec);
  }

  out_.decisions = coordinator_.log();
  out_.summary = Summarize(out_.metrics);
  out_.summary.releases = out_.accountant.size();
  out_.summary.final_rho = out_.accountant.RhoTotal();
  out_.summary.final_eps = out_.accountant.ZcdpEpsilon();
  out_.summary.skipped_affinity = skipped_affinity;
  out_.summary.budget_exhausted = exhausted || out_.summary.budget_exhausted;
  return std::move(out_);
}

std::string FormatDouble(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

std::vector<index::SearchResult> ServeQuery(const ServingView& view,
                                            const Eigen::VectorXd& query, int anchor) {
  Require(view.index != nullptr, "serving needs an index");
  index::SearchOptions opt;
  opt.k = view.k;
  opt.ef = view.ef;
  opt.misleading = view.misleading;
  std::vector<double> row;
  if (view.affinity != nullptr && view.layout != nullptr && view.beta > 0) {
    row = index::AffinityRow(*view.affinity, *view.layout, anchor);
  }
  if (!row.empty()) {
    opt.beta = view.beta;
    opt.affinity_row = row.data();
    opt.anchor = anchor;
  }
  return view.index->Search(query, opt);
}

RunResult RunSimulation(const SimulationConfig& config) {
  config.Validate();
  return Simulation(config).Run();
}

RunSummary Summarize(const std::vector<MetricsRecord>& metrics) {
  RunSummary s;
  s.epochs = metrics.size();
  CompensatedSum recall;
  std::size_t measured = 0;
  for (const auto& m : metrics) {
    s.active_epochs += m.active;
    if (m.recall_measured) {
      recall.Add(m.recall);
      ++measured;
    }
    s.index_updates += m.action == Action::kIndexUpdate;
    s.revalues += m.action == Action::kRevalue;
    s.budget_overrides += m.override_kind == OverrideKind::kBudget;
    s.recall_overrides += m.override_kind == OverrideKind::kRecall;
  }
  if (!metrics.empty()) {
    s.final_rho = metrics.back().rho_cum;
    s.final_eps = metrics.back().eps_cum;
    s.final_recall = metrics.back().recall;
    s.events = metrics.back().events;
  }
  s.mean_recall = measured ? recall.value() / static_cast<double>(measured) : 0.0;
  s.budget_exhausted = s.budget_overrides > 0;
  return s;
}

void WriteMetricsCsv(const std::string& path, const std::vector<MetricsRecord>& metrics) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << kMetricsSchema << '\n'
      << "epoch,recall,recall_measured,queries,eps_cum,rho_cum,stale_fraction,action,"
         "override,active,sigma,events,mpv_snapshot\n";
  for (const auto& m : metrics) {
    out << m.epoch << ',' << FormatDouble(m.recall) << ',' << m.recall_measured << ','
        << m.queries << ',' << FormatDouble(m.eps_cum) << ',' << FormatDouble(m.rho_cum) << ','
        << FormatDouble(m.stale_fraction) << ',' << coordinator::ActionName(m.action) << ','
        << coordinator::OverrideName(m.override_kind) << ',' << m.active << ','
        << FormatDouble(m.sigma) << ',' << m.events << ',' << m.mpv_snapshot << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<MetricsRecord> ReadMetricsCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMetricsSchema) {
    throw IoError("missing schema header in " + path);
  }
  if (!std::getline(in, line)) throw IoError("missing column header in " + path);
  const auto action_of = [&](const std::string& s) {
    for (int a = 0; a < coordinator::kActionCount; ++a) {
      if (coordinator::ActionName(static_cast<Action>(a)) == s) return static_cast<Action>(a);
    }
    throw IoError("unknown action '" + s + "' in " + path);
  };
  const auto override_of = [&](const std::string& s) {
    for (auto k : {OverrideKind::kNone, OverrideKind::kBudget, OverrideKind::kRecall}) {
      if (coordinator::OverrideName(k) == s) return k;
    }
    throw IoError("unknown override '" + s + "' in " + path);
  };
  std::vector<MetricsRecord> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 13) throw IoError("malformed metrics row in " + path);
    try {
      MetricsRecord m;
      m.epoch = std::stoull(f[0]);
      m.recall = std::stod(f[1]);
      m.recall_measured = f[2] == "1";
      m.queries = std::stoull(f[3]);
      m.eps_cum = std::stod(f[4]);
      m.rho_cum = std::stod(f[5]);
      m.stale_fraction = std::stod(f[6]);
      m.action = action_of(f[7]);
      m.override_kind = override_of(f[8]);
      m.active = f[9] == "1";
      m.sigma = std::stod(f[10]);
      m.events = std::stoi(f[11]);
      m.mpv_snapshot = std::stoi(f[12]);
      rows.push_back(m);
    } catch (const std::logic_error&) {
      throw IoError("unparsable metrics row in " + path);
    }
  }
  return rows;
}

void WriteSummaryJson(const std::string& path, const RunSummary& s) {
  nlohmann::ordered_json j;
  j["schema"] = "chronos-summary v1";
  j["epochs"] = s.epochs;
  j["active_epochs"] = s.active_epochs;
  j["releases"] = s.releases;
  j["final_rho"] = s.final_rho;
  j["final_eps"] = s.final_eps;
  j["mean_recall"] = s.mean_recall;
  j["final_recall"] = s.final_recall;
  j["index_updates"] = s.index_updates;
  j["revalues"] = s.revalues;
  j["budget_overrides"] = s.budget_overrides;
  j["recall_overrides"] = s.recall_overrides;
  j["skipped_affinity"] = s.skipped_affinity;
  j["events"] = s.events;
  j["budget_exhausted"] = s.budget_exhausted;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + path);
}

RunSummary ReadSummaryJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("schema") != "chronos-summary v1") throw IoError("unknown schema in " + path);
    RunSummary s;
    s.epochs = j.at("epochs");
    s.active_epochs = j.at("active_epochs");
    s.releases = j.at("releases");
    s.final_rho = j.at("final_rho");
    s.final_eps = j.at("final_eps");
    s.mean_recall = j.at("mean_recall");
    s.final_recall = j.at("final_recall");
    s.index_updates = j.at("index_updates");
    s.revalues = j.at("revalues");
    s.budget_overrides = j.at("budget_overrides");
    s.recall_overrides = j.at("recall_overrides");
    s.skipped_affinity = j.at("skipped_affinity");
    s.events = j.at("events");
    s.budget_exhausted = j.at("budget_exhausted");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad summary " + path + ": " + e.what());
  }
}

void ExportRun(const RunResult& run, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  const std::filesystem::path d(dir);
  WriteMetricsCsv((d / "metrics.csv").string(), run.metrics);
  run.accountant.WriteTranscript((d / "transcript.csv").string());
  coordinator::WriteDecisionLogCsv((d / "decisions.csv").string(), run.decisions);
  valuation::WriteValuationCsv((d / "valuation.csv").string(), run.valuations);
  changepoint::WriteEventLogCsv((d / "events.csv").string(), run.events);
  WriteSummaryJson((d / "summary.json").string(), run.summary);
}

}  // namespace chronos::harness
