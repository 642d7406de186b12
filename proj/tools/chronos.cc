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
//
// Command-line driver. Every option can also be set from a key = value
// config file passed with --config; `chronos --write-config FILE` writes
// the defaults.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "chronos/common/error.h"
#include "chronos/common/numeric.h"
#include "chronos/common/random.h"
#include "chronos/decay/envelope.h"
#include "chronos/decay/samples.h"
#include "chronos/decay/training.h"
#include "chronos/harness/report.h"
#include "chronos/harness/simulation.h"
#include "chronos/index/hybrid_index.h"
#include "chronos/index/recall.h"
#include "chronos/kg/change_process.h"
#include "chronos/kg/generator.h"
#include "chronos/kg/io.h"
#include "chronos/kg/sellers.h"
#include "chronos/privacy/accountant.h"
#include "chronos/valuation/mrr_value.h"
#include "chronos/valuation/shapley.h"
#include "json.hpp"

namespace chronos::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string out_dir = "out";
  std::string kg_dir;  // defaults to out_dir
  uint64_t seed = 42;

  // Knowledge graph.
  std::size_t nodes = 2000;
  std::size_t edges = 20000;
  std::size_t dim = 16;
  std::size_t communities = 10;
  double window_days = 180;
  double launch_quantile = 0.5;
  int sellers = 10;
  double seller_skew = 0.3;

  // Change process.
  std::string change_process = "poisson";
  double change_rate = 0.05;
  double hawkes_mu = 0.05;
  double hawkes_alpha = 0.7;
  double hawkes_beta = 1.0;

  // Decay model.
  std::string decay_source = "curve";
  std::size_t decay_samples = 4000;
  int decay_epochs = 400;
  double decay_lr = 1e-3;
  int decay_state_dim = 32;
  int decay_hidden = 32;

  // Index.
  int m = 16;
  int ef = 128;
  int ef_construction = 200;
  double beta = 0.3;
  int k = 10;
  std::size_t queries = 1000;

  // Simulation.
  std::size_t horizon = 2160;
  int epochs_per_day = 24;
  double sigma0 = 50;
  std::string schedule = "adaptive";
  std::string policy = "coordinator";
  double eps_total = 4.25;
  double delta = 1e-6;
  double query_rate = 0.45;
  double recall_floor = 0.9;
  bool enforce_budget = true;
  bool force_all_active = false;
  std::size_t valuation_permutations = 200;
  std::size_t reserve = 500;
  std::size_t active_cap = 1500;
  std::size_t recall_queries = 100;

  // Accounting.
  std::string transcript;
  std::vector<int> releases = {423, 287, 710};
  double sigma = 50;

  // Valuation bench.
  std::size_t permutations = 1000;
  int trials = 10;

  std::string run_dir;
};

fs::path OutDir(const Options& o) {
  fs::create_directories(o.out_dir);
  return o.out_dir;
}

fs::path KgDir(const Options& o) { return o.kg_dir.empty() ? o.out_dir : o.kg_dir; }

kg::SyntheticKgConfig KgConfig(const Options& o) {
  kg::SyntheticKgConfig c = harness::DefaultKgConfig();
  c.n_nodes = o.nodes;
  c.n_edges = o.edges;
  c.dim = o.dim;
  c.n_communities = o.communities;
  c.window_days = o.window_days;
  c.launch_quantile = o.launch_quantile;
  c.n_sellers = o.sellers;
  c.seed = o.seed;
  return c;
}

kg::ChangeProcess Process(const Options& o) {
  if (o.change_process == "poisson") return kg::ChangeProcess::Poisson(o.change_rate);
  if (o.change_process == "hawkes") {
    return kg::ChangeProcess::Hawkes(o.hawkes_mu, o.hawkes_alpha, o.hawkes_beta);
  }
  throw ParameterError("unknown change process '" + o.change_process + "'");
}

// KG from `kg_dir` when gen-kg wrote one there, otherwise generated.
kg::TemporalKG LoadOrGenerateKg(const Options& o) {
  const fs::path d = KgDir(o);
  if (fs::exists(d / "edges.tsv") && fs::exists(d / "embeddings.tsv")) {
    return kg::ReadKg((d / "edges.tsv").string(), (d / "embeddings.tsv").string());
  }
  kg::TemporalKG g = kg::GenerateSyntheticKg(KgConfig(o));
  kg::ApplyPartition(kg::PartitionSellers(g, o.sellers, o.seller_skew, o.seed), g);
  return g;
}

// Trained decay model when train-decay wrote one, else the planted curve.
// The model is tabulated once on a 0.1-day grid and interpolated.
index::DecayFn LoadDecay(const Options& o) {
  const fs::path p = KgDir(o) / "decay_model.txt";
  if (!fs::exists(p)) return decay::SurvivalCurve{};
  const decay::OdeDecayModel model = decay::OdeDecayModel::Load(p.string());
  const double step = 0.1, span = 2 * o.window_days;
  std::vector<double> grid;
  for (double t = 0; t <= span + 1e-9; t += step) grid.push_back(t);
  auto table = std::make_shared<std::vector<double>>(model.DecayAt(grid));
  return [table, step](double dt) {
    const double x = std::clamp(dt / step, 0.0, static_cast<double>(table->size() - 1));
    const std::size_t i = std::min(static_cast<std::size_t>(x), table->size() - 2);
    return (*table)[i] + (x - i) * ((*table)[i + 1] - (*table)[i]);
  };
}

index::IndexParams IndexParamsFrom(const Options& o) {
  index::IndexParams p;
  p.m = o.m;
  p.ef = o.ef;
  p.ef_construction = o.ef_construction;
  p.beta = o.beta;
  p.seed = o.seed;
  return p;
}

void GenKg(const Options& o) {
  const fs::path d = OutDir(o);
  kg::TemporalKG g = kg::GenerateSyntheticKg(KgConfig(o));
  const kg::SellerPartition part = kg::PartitionSellers(g, o.sellers, o.seller_skew, o.seed);
  kg::ApplyPartition(part, g);
  kg::WriteKg(g, (d / "edges.tsv").string(), (d / "embeddings.tsv").string());
  const kg::ChangeLog log =
      kg::SimulateChanges(g, Process(o), o.window_days - g.launch_time(), o.seed);
  kg::WriteChangeLog(log, (d / "changes.csv").string());
  std::printf("nodes %zu, edges %zu (%zu public), launch day %.1f, %zu change events\n",
              g.node_count(), g.edge_count(), g.public_edge_count(), g.launch_time(),
              log.size());
  std::printf("wrote %s\n", d.string().c_str());
}

void TrainDecay(const Options& o) {
  const fs::path d = OutDir(o);
  std::vector<decay::DecaySample> samples;
  if (o.decay_source == "curve") {
    const decay::SurvivalCurve curve;
    samples = decay::SampleFromCurve(curve, o.decay_samples, curve.WindowForPositiveRate(0.25),
                                     o.seed);
  } else if (o.decay_source == "kg") {
    const fs::path kd = KgDir(o);
    const kg::TemporalKG g =
        kg::ReadKg((kd / "edges.tsv").string(), (kd / "embeddings.tsv").string());
    const kg::ChangeLog log = kg::ReadChangeLog((kd / "changes.csv").string());
    decay::PairSamplingConfig pc;
    pc.split_begin = g.launch_time();
    pc.split_end = o.window_days;
    pc.seed = o.seed;
    samples = decay::BuildTrainingPairs(g, log, pc);
  } else {
    throw ParameterError("decay-source must be 'curve' or 'kg'");
  }
  decay::OdeDecayModel init(o.decay_state_dim, o.decay_hidden);
  init.InitializeRandom(o.seed);
  decay::TrainingConfig tc;
  tc.epochs = o.decay_epochs;
  tc.lr = o.decay_lr;
  const auto result = decay::TrainOde(samples, tc, init);
  result.model.Save((d / "decay_model.txt").string());
  {
    std::ofstream f(d / "training_loss.csv");
    f << "epoch,loss\n";
    for (std::size_t i = 0; i < result.loss_history.size(); ++i) {
      f << i << "," << result.loss_history[i] << "\n";
    }
  }
  const auto lip = decay::EstimateLipschitz(result.model, 100, 90, o.seed);
  const auto cert = decay::EnvelopeCertificate::Build(result.model, 90, 0.1, lip.estimate,
                                                      result.model.solver().tolerance);
  cert.WriteCsv((d / "envelope.csv").string());
  std::printf("%zu samples, loss %.4f -> %.4f, Lipschitz estimate %.3g (certificate %.3g)\n",
              samples.size(), result.initial_loss, result.final_loss, lip.estimate,
              lip.certificate);
  std::printf("decay at 1, 7, 30 days: %.3f %.3f %.3f\n", result.model.Decay(1),
              result.model.Decay(7), result.model.Decay(30));
}

void BuildIndex(const Options& o) {
  const fs::path d = OutDir(o);
  const kg::TemporalKG g = LoadOrGenerateKg(o);
  const auto view = index::PublicView::FromKg(g.PublicSubgraph(), o.seed);
  const auto idx = index::HybridIndex::Build(view, LoadDecay(o), g.launch_time(),
                                             IndexParamsFrom(o));
  idx.Save((d / "index.txt").string());
  const auto qs = index::SampleQueries(*view, o.queries, 0.3, o.seed);
  const auto oracle = index::BuildOracle(*view, qs, o.k);
  const double r = index::MeasureRecall(idx, qs, oracle, o.k).mean;
  std::printf("index over %zu nodes, %zu shortcut slots, recall@%d %.4f on %zu queries\n",
              view->size(), idx.shortcut_slots(), o.k, r, o.queries);
}

harness::SimulationConfig SimConfig(const Options& o) {
  harness::SimulationConfig c;
  c.seed = o.seed;
  c.kg = KgConfig(o);
  c.n_sellers = o.sellers;
  c.seller_skew = o.seller_skew;
  c.beta = o.beta;
  c.ef = o.ef;
  c.k = o.k;
  c.m = o.m;
  c.horizon = o.horizon;
  c.t_active_plan = o.horizon;
  c.epochs_per_day = o.epochs_per_day;
  c.sigma0 = o.sigma0;
  c.schedule = harness::ParseSchedule(o.schedule);
  c.policy = harness::ParsePolicy(o.policy);
  c.eps_total = o.eps_total;
  c.delta = o.delta;
  c.query_rate = o.query_rate;
  c.recall_floor = o.recall_floor;
  c.enforce_budget = o.enforce_budget;
  c.force_all_active = o.force_all_active;
  c.valuation_permutations = o.valuation_permutations;
  c.change_rate = o.change_rate;
  c.reserve = o.reserve;
  c.active_cap = o.active_cap;
  c.recall_queries = o.recall_queries;
  c.Validate();
  return c;
}

void Simulate(const Options& o) {
  const auto run = harness::RunSimulation(SimConfig(o));
  harness::ExportRun(run, OutDir(o).string());
  const auto& s = run.summary;
  std::printf("epochs %zu (active %zu), releases %zu, rho %.4f, eps %.4f\n", s.epochs,
              s.active_epochs, s.releases, s.final_rho, s.final_eps);
  std::printf("mean recall %.4f, final recall %.4f, index updates %zu, revalues %zu, "
              "events %d\n",
              s.mean_recall, s.final_recall, s.index_updates, s.revalues, s.events);
  std::printf("overrides: budget %zu, recall %zu%s\n", s.budget_overrides, s.recall_overrides,
              s.budget_exhausted ? "; budget exhausted" : "");
}

void Account(const Options& o) {
  privacy::PrivacyAccountant acc(o.eps_total, o.delta);
  if (!o.transcript.empty()) {
    acc = privacy::PrivacyAccountant::ReadTranscript(o.transcript, o.eps_total, o.delta);
  } else {
    const privacy::Mechanism mech[] = {privacy::Mechanism::kIndexStats,
                                       privacy::Mechanism::kValuation,
                                       privacy::Mechanism::kAffinity};
    if (o.releases.size() != 3) throw ParameterError("releases needs three counts");
    for (int i = 0; i < 3; ++i) {
      for (int e = 0; e < o.releases[i]; ++e) {
        acc.Add(privacy::ReleaseRecord::Gaussian(mech[i], e, o.sigma, 1));
      }
    }
  }
  nlohmann::ordered_json j;
  j["releases"] = acc.size();
  j["rho"] = acc.RhoTotal();
  j["eps_zcdp"] = acc.ZcdpEpsilon();
  j["eps_rdp"] = acc.RdpEpsilon(o.delta);
  j["gdp_mu"] = acc.GdpMu();
  j["eps_gdp"] = acc.GdpEpsilon(o.delta);
  j["eps_remaining"] = acc.EpsRemaining();
  j["eps_remaining_printed_formula"] =
      acc.EpsRemaining(privacy::RemainingMode::kPrintedMinAlpha);
  for (auto m : {privacy::Mechanism::kIndexStats, privacy::Mechanism::kValuation,
                 privacy::Mechanism::kAffinity}) {
    j["rho_by_mechanism"][std::string(privacy::MechanismName(m))] = acc.RhoFor(m);
  }
  std::ofstream(OutDir(o) / "account.json") << j.dump(2) << "\n";
  std::printf("%s\n", j.dump(2).c_str());
}

void BenchRecall(const Options& o) {
  const kg::TemporalKG g = LoadOrGenerateKg(o);
  const auto view = index::PublicView::FromKg(g.PublicSubgraph(), o.seed);
  const index::DecayFn dec = LoadDecay(o);
  const auto idx = index::HybridIndex::Build(view, dec, g.launch_time(), IndexParamsFrom(o));
  const auto qs = index::SampleQueries(*view, o.queries, 0.3, o.seed);
  const auto oracle = index::BuildOracle(*view, qs, o.k);
  const auto calib_q = index::SampleQueries(*view, std::min<std::size_t>(o.queries, 50), 0.3,
                                            DeriveSeed(o.seed, "calibration"));
  const auto cal = index::CalibrateImpact(idx, calib_q, index::BuildOracle(*view, calib_q, o.k),
                                          o.k);
  const double fresh = index::MeasureRecall(idx, qs, oracle, o.k).mean;
  const double path = cal.TotalPath(), dr = cal.PooledDeltaR();
  std::printf("fresh recall@%d %.4f (ef %d, m %d, beta %.2f), P_q %.1f, dr %.4g\n", o.k, fresh,
              o.ef, o.m, o.beta, path, dr);
  std::ofstream f(OutDir(o) / "bench_recall.csv");
  f << "lambda,dt,observed,conservative,tight\n";
  const std::size_t slots = idx.shortcut_slots();
  for (double lambda : {0.05, 0.5, 2.0}) {
    for (double dt : {1.0, 3.0, 7.0, 14.0, 30.0}) {
      Rng rng = MakeRng(o.seed, "bench-recall", static_cast<uint64_t>(lambda * 100 + dt));
      std::exponential_distribution<double> first(lambda);
      std::uniform_real_distribution<double> u(0, 1);
      const double trust = dec(dt);
      std::vector<uint8_t> misleading(slots);
      for (auto& x : misleading) x = first(rng) <= dt && u(rng) < trust;
      const double r = index::MeasureRecall(idx, qs, oracle, o.k, nullptr, &misleading).mean;
      const double cons = index::RecallBoundConservative(path, dr, lambda, dt, fresh);
      const double tight = index::RecallBoundTight(path, dr, lambda, dt, fresh,
                                                   decay::MonotoneEnvelope(dec, dt));
      f << lambda << "," << dt << "," << r << "," << cons << "," << tight << "\n";
      std::printf("lambda %.2f dt %4.0f: recall %.4f, conservative bound %.4f, tight %.4f\n",
                  lambda, dt, r, cons, tight);
    }
  }
}

void BenchValuation(const Options& o) {
  if (o.sellers > 15) throw ParameterError("exhaustive gold needs at most 15 sellers");
  std::ofstream f(OutDir(o) / "bench_valuation.csv");
  f << "trial,seller,gold,permutation,permutation_se,vrds,vrds_se\n";
  double worst = 0, ratio = 0;
  for (int t = 0; t < o.trials; ++t) {
    const uint64_t seed = DeriveSeed(o.seed, "market", t);
    kg::SyntheticKgConfig c = KgConfig(o);
    c.seed = seed;
    const kg::TemporalKG g = kg::GenerateSyntheticKg(c);
    const auto sellers = kg::PartitionSellers(g, o.sellers, o.seller_skew, seed);
    const auto workload = valuation::SampleWorkload(g, sellers, o.queries, 5.0, seed);
    const valuation::MrrValueFunction v(g, sellers, workload, {o.beta, decay::SurvivalCurve{}});
    const auto gold = valuation::GoldShapley(v, valuation::kDefaultClip);
    const auto perm = valuation::ShapleyPermutation(v, o.permutations, seed);
    const auto vrds = valuation::VrdsShapley(v, o.permutations, seed);
    for (int i = 0; i < o.sellers; ++i) {
      f << t << "," << i << "," << gold[i] << "," << perm.phi[i] << "," << perm.stderr_[i] << ","
        << vrds.phi[i] << "," << vrds.stderr_[i] << "\n";
      worst = std::max(worst, std::abs(perm.phi[i] - gold[i]));
    }
    ratio += vrds.variance_ratio / o.trials;
  }
  std::printf("%d markets, %d sellers, m=%zu: max |permutation - gold| %.4g, mean VRDS variance "
              "ratio %.3f\n",
              o.trials, o.sellers, o.permutations, worst, ratio);
}

void Report(const Options& o) {
  const auto checks = harness::ArithmeticChecks();
  std::printf("%-28s %9s %9s  %s\n", "item", "printed", "formula", "inputs");
  for (const auto& c : checks) {
    std::printf("%-28s %9.4f %9.4f  %s%s\n", c.name.c_str(), c.printed, c.formula,
                c.inputs.c_str(), c.Discrepant() ? "" : " (consistent)");
  }
  std::unique_ptr<harness::RunSummary> summary;
  if (!o.run_dir.empty()) {
    summary = std::make_unique<harness::RunSummary>(
        harness::ReadSummaryJson((fs::path(o.run_dir) / "summary.json").string()));
    std::printf("run %s: eps %.4f, mean recall %.4f, releases %zu\n", o.run_dir.c_str(),
                summary->final_eps, summary->mean_recall, summary->releases);
  }
  const fs::path p = OutDir(o) / "report.json";
  harness::WriteReportJson(p.string(), checks, summary.get());
  std::printf("wrote %s\n", p.string().c_str());
}

void AddOptions(CLI::App& app, Options& o) {
  app.add_option("--out-dir", o.out_dir, "Output directory")->capture_default_str();
  app.add_option("--kg-dir", o.kg_dir, "Directory with gen-kg/train-decay output")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();

  const auto opt = [&](const char* name, auto& field, const char* help) {
    app.add_option(name, field, help)->capture_default_str()->group("Model");
  };
  opt("--nodes", o.nodes, "KG node count");
  opt("--edges", o.edges, "KG edge count");
  opt("--dim", o.dim, "Embedding dimension");
  opt("--communities", o.communities, "Planted communities");
  opt("--window-days", o.window_days, "Timestamp window in days");
  opt("--launch-quantile", o.launch_quantile, "Marketplace launch as a window fraction");
  opt("--sellers", o.sellers, "Number of sellers");
  opt("--seller-skew", o.seller_skew, "Seller size skew");
  opt("--change-process", o.change_process, "poisson or hawkes");
  opt("--change-rate", o.change_rate, "Poisson changes per unit per day");
  opt("--hawkes-mu", o.hawkes_mu, "Hawkes baseline rate per day");
  opt("--hawkes-alpha", o.hawkes_alpha, "Hawkes jump size");
  opt("--hawkes-beta", o.hawkes_beta, "Hawkes kernel decay per day");
  opt("--decay-source", o.decay_source, "curve (planted) or kg (gen-kg output)");
  opt("--decay-samples", o.decay_samples, "Samples drawn from the planted curve");
  opt("--decay-epochs", o.decay_epochs, "Training epochs");
  opt("--decay-lr", o.decay_lr, "Adam learning rate");
  opt("--decay-state-dim", o.decay_state_dim, "ODE state dimension");
  opt("--decay-hidden", o.decay_hidden, "ODE field hidden width");
  opt("--m", o.m, "Index degree per layer");
  opt("--ef", o.ef, "Search beam width");
  opt("--ef-construction", o.ef_construction, "Construction beam width");
  opt("--beta", o.beta, "KG weight in the hybrid score");
  opt("--k", o.k, "Results per query");
  opt("--queries", o.queries, "Benchmark queries");
  opt("--horizon", o.horizon, "Simulated epochs");
  opt("--epochs-per-day", o.epochs_per_day, "Epochs per simulated day");
  opt("--sigma0", o.sigma0, "Base noise multiplier");
  opt("--schedule", o.schedule, "adaptive or fixed");
  opt("--policy", o.policy, "coordinator or round-robin");
  opt("--eps-total", o.eps_total, "Privacy budget");
  opt("--delta", o.delta, "Privacy delta");
  opt("--query-rate", o.query_rate, "Mean buyer queries per epoch");
  opt("--recall-floor", o.recall_floor, "Recall floor for overrides");
  opt("--enforce-budget", o.enforce_budget, "Apply budget and recall overrides");
  opt("--force-all-active", o.force_all_active, "Release all mechanisms every epoch");
  opt("--valuation-permutations", o.valuation_permutations, "Permutations per revaluation");
  opt("--reserve", o.reserve, "Most-queried entities always in the active scope");
  opt("--active-cap", o.active_cap, "Active scope size cap");
  opt("--recall-queries", o.recall_queries, "Probe queries per recall measurement");
  opt("--transcript", o.transcript, "account: read this transcript instead of counts");
  opt("--releases", o.releases, "account: index-stats, valuation, affinity release counts");
  opt("--sigma", o.sigma, "account: noise multiplier for the counted releases");
  opt("--permutations", o.permutations, "bench-valuation: permutations per estimate");
  opt("--trials", o.trials, "bench-valuation: synthetic markets");
  opt("--run-dir", o.run_dir, "report: simulate output to summarise");
}

int Main(int argc, char** argv) {
  CLI::App app{"Temporal knowledge-graph marketplace simulator"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Options o;
  app.set_config("--config", "", "key = value config file");
  AddOptions(app, o);
  std::string write_config;
  app.add_option("--write-config", write_config, "Write the current settings and exit")
      ->configurable(false);

  struct Cmd {
    const char* name;
    const char* help;
    void (*run)(const Options&);
  };
  const Cmd cmds[] = {
      {"gen-kg", "Generate a synthetic temporal KG, sellers and change log", GenKg},
      {"train-decay", "Train the neural ODE decay model and its envelope", TrainDecay},
      {"build-index", "Build the hybrid index and report recall", BuildIndex},
      {"simulate", "Run the epoch simulation and export its logs", Simulate},
      {"account", "Privacy ledger for release counts or a transcript", Account},
      {"bench-recall", "Recall under staleness against the recall bounds", BenchRecall},
      {"bench-valuation", "Permutation and VRDS Shapley against exhaustive gold",
       BenchValuation},
      {"report", "Arithmetic checks and run summary as JSON", Report},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const auto& c : cmds) subs.emplace_back(app.add_subcommand(c.name, c.help), &c);

  CLI11_PARSE(app, argc, argv);
  if (!write_config.empty()) {
    std::ofstream(write_config) << app.config_to_str(true, true);
    return 0;
  }
  for (const auto& [sub, cmd] : subs) {
    if (sub->parsed()) {
      cmd->run(o);
      return 0;
    }
  }
  std::printf("%s", app.help().c_str());
  return 1;
}

}  // namespace
}  // namespace chronos::cli

int main(int argc, char** argv) {
  try {
    return chronos::cli::Main(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
