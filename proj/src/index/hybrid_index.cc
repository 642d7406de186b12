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

#include "chronos/index/hybrid_index.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

#include "chronos/common/error.h"
#include "chronos/common/numeric.h"
#include "chronos/common/random.h"

namespace chronos::index {
namespace {

constexpr ShortcutId kNoSlot = std::numeric_limits<ShortcutId>::max();

uint64_t PairKey(uint32_t u, uint32_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<uint64_t>(u) << 32) | v;
}

}  // namespace

void IndexParams::Validate() const {
  Require(m >= 2, "m must be at least 2");
  Require(ef_construction >= m, "ef_construction must be >= m");
  Require(ef >= 1, "ef must be positive");
  Require(max_levels >= 1, "max_levels must be positive");
  Require(level_mult >= 0, "level_mult must be non-negative");
  Require(rho_div > 0, "rho_div must be positive");
  Require(beta >= 0 && beta <= 1, "beta must lie in [0, 1]");
  Require(gamma_community >= 0 && gamma_community <= 1,
          "gamma_community must lie in [0, 1]");
  Require(hub_quantile >= 0 && hub_quantile <= 1,
          "hub_quantile must lie in [0, 1]");
}

std::shared_ptr<const PublicView> PublicView::FromKg(const kg::TemporalKG& kg,
                                                     uint64_t seed) {
  if (!kg.IsPublicOnly()) {
    throw ContractViolation("index build accepts the public subgraph only");
  }
  Require(kg.node_count() > 0, "index needs at least one node");
  auto view = std::make_shared<PublicView>();
  view->unit_embeddings = kg.embeddings();
  for (Eigen::Index r = 0; r < view->unit_embeddings.rows(); ++r) {
    const double norm = view->unit_embeddings.row(r).norm();
    if (norm > 0) view->unit_embeddings.row(r) /= norm;
  }
  view->neighbours = kg::PublicNeighbours(kg);
  view->partition =
      Louvain(WeightedGraph::FromNeighbourLists(view->neighbours), seed);
  const auto edges = kg.edges();
  for (std::size_t id = 0; id < edges.size(); ++id) {
    const auto& e = edges[id];
    if (e.u != e.v) {
      view->edges.push_back({static_cast<uint32_t>(id), e.u, e.v, e.t_created});
    }
  }
  return view;
}

double StaticAffinity(const PublicView& view, uint32_t u, uint32_t v,
                      double gamma) {
  const auto& a = view.neighbours[u];
  const auto& b = view.neighbours[v];
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < a.size() && j < b.size();) {
    if (a[i] == b[j]) {
      ++common, ++i, ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  const double jaccard = uni == 0 ? 0.0 : static_cast<double>(common) / uni;
  const double same = view.partition.Same(u, v) ? 1.0 : 0.0;
  return gamma * same + (1 - gamma) * jaccard;
}

PairWeights::PairWeights(const PublicView& view, const DecayFn& decay,
                         double t_now, double gamma) {
  for (const auto& e : view.edges) {
    if (e.t_created > t_now) continue;
    const double w =
        Clamp01(decay(t_now - e.t_created)) * StaticAffinity(view, e.u, e.v, gamma);
    double& slot = w_[PairKey(e.u, e.v)];
    slot = std::max(slot, w);
  }
}

double PairWeights::operator()(uint32_t u, uint32_t v) const {
  auto it = w_.find(PairKey(u, v));
  return it == w_.end() ? 0.0 : it->second;
}

double HybridIndex::Sim(uint32_t a, uint32_t b) const {
  return view_->unit_embeddings.row(a).dot(view_->unit_embeddings.row(b));
}

double HybridIndex::Sim(const Eigen::VectorXd& q, uint32_t b) const {
  return view_->unit_embeddings.row(b).dot(q);
}

double HybridIndex::HybridScore(uint32_t v, uint32_t u) const {
  return (1 - params_.beta) * Sim(v, u) + params_.beta * weights_(v, u);
}

const std::vector<uint32_t>& HybridIndex::links(int level, uint32_t node) const {
  return links_.at(level).at(node);
}

HybridIndex HybridIndex::Build(std::shared_ptr<const PublicView> view,
                               const DecayFn& decay, double t_now,
                               const IndexParams& params) {
  params.Validate();
  Require(view != nullptr && view->size() > 0, "index needs a public view");
  HybridIndex index;
  index.view_ = std::move(view);
  index.decay_ = decay;
  index.params_ = params;
  index.t_built_ = t_now;
  index.weights_ =
      PairWeights(*index.view_, decay, t_now, params.gamma_community);

  const std::size_t n = index.view_->size();
  std::vector<std::size_t> degree(n);
  for (std::size_t v = 0; v < n; ++v) degree[v] = index.view_->neighbours[v].size();

  // Levels: geometric with normalization 1/ln m, hubs promoted by one.
  const double ml = params.level_mult > 0
                        ? params.level_mult
                        : 1.0 / std::log(static_cast<double>(params.m));
  Rng rng = MakeRng(params.seed, "index-levels");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> deg_d(degree.begin(), degree.end());
  const double hub_cut = Quantile(deg_d, params.hub_quantile);
  index.level_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double u = 1.0 - unif(rng);  // (0, 1]
    int l = static_cast<int>(std::floor(-std::log(u) * ml));
    if (deg_d[v] > hub_cut) ++l;
    index.level_[v] = std::min(l, params.max_levels - 1);
  }
  const int levels = *std::max_element(index.level_.begin(), index.level_.end()) + 1;
  index.links_.assign(levels, std::vector<std::vector<uint32_t>>(n));
  index.n_idx_.assign(n, {});

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  const auto& comm = index.view_->partition.community;
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    if (comm[a] != comm[b]) return comm[a] < comm[b];
    if (degree[a] != degree[b]) return degree[a] > degree[b];
    return a < b;
  });
  for (uint32_t v : order) index.Insert(v);
  index.AssignSlots();
  return index;
}

std::vector<uint32_t> HybridIndex::SelectNeighbours(
    uint32_t v, const std::vector<uint32_t>& pool, int max_count) const {
  std::vector<std::pair<double, uint32_t>> ranked;
  ranked.reserve(pool.size());
  for (uint32_t u : pool) {
    if (u != v) ranked.push_back({HybridScore(v, u), u});
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<uint32_t> kept;
  for (const auto& [score, c] : ranked) {
    if (static_cast<int>(kept.size()) >= max_count) break;
    const double sim_new = Sim(c, v);
    bool diverse = true;
    for (uint32_t k : kept) {
      const double sim_kept = Sim(c, k);
      const bool occluded =
          params_.diversity == DiversityRule::kDistance
              ? 1 - sim_kept < params_.rho_div * (1 - sim_new)
              : sim_kept > params_.rho_div * sim_new;
      if (occluded) {
        diverse = false;
        break;
      }
    }
    if (diverse) kept.push_back(c);
  }
  return kept;
}

std::vector<HybridIndex::Candidate> HybridIndex::SearchLayer(
    const Eigen::VectorXd& q, const std::vector<uint32_t>& entries, int ef,
    int level, const std::vector<uint8_t>* broken,
    std::vector<ShortcutId>* parent_slot,
    std::vector<uint32_t>* parent_node) const {
  auto worse = [](const Candidate& a, const Candidate& b) { return a.sim > b.sim; };
  auto better = [](const Candidate& a, const Candidate& b) { return a.sim < b.sim; };
  // Frontier pops the best; results keep the worst on top for eviction.
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(better)> frontier(better);
  std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> results(worse);
  std::vector<uint8_t> visited(level_.size(), 0);
  for (uint32_t e : entries) {
    if (visited[e]) continue;
    visited[e] = 1;
    const Candidate c{Sim(q, e), e};
    frontier.push(c);
    results.push(c);
    if (static_cast<int>(results.size()) > ef) results.pop();
  }
  const bool use_slots = !slot_base_.empty();
  while (!frontier.empty()) {
    const Candidate cur = frontier.top();
    frontier.pop();
    if (static_cast<int>(results.size()) >= ef && cur.sim < results.top().sim) break;
    const auto& list = links_[level][cur.node];
    const ShortcutId base = use_slots ? slot_base_[level][cur.node] : kNoSlot;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const uint32_t nb = list[i];
      if (visited[nb]) continue;
      if (broken != nullptr && use_slots && (*broken)[base + i]) continue;
      visited[nb] = 1;
      const double s = Sim(q, nb);
      if (static_cast<int>(results.size()) < ef || s > results.top().sim) {
        frontier.push({s, nb});
        results.push({s, nb});
        if (parent_slot != nullptr && use_slots) {
          (*parent_slot)[nb] = base + static_cast<ShortcutId>(i);
          (*parent_node)[nb] = cur.node;
        }
        if (static_cast<int>(results.size()) > ef) results.pop();
      }
    }
  }
  std::vector<Candidate> out;
  out.reserve(results.size());
  while (!results.empty()) {
    out.push_back(results.top());
    results.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

uint32_t HybridIndex::GreedyDescend(const Eigen::VectorXd& q, uint32_t start,
                                    int from_level, int to_level,
                                    const std::vector<uint8_t>* broken,
                                    std::vector<ShortcutId>* hops,
                                    std::vector<int>* hop_levels) const {
  uint32_t cur = start;
  double best = Sim(q, cur);
  const bool use_slots = !slot_base_.empty();
  for (int l = from_level; l >= to_level; --l) {
    bool moved = true;
    while (moved) {
      moved = false;
      const auto& list = links_[l][cur];
      const ShortcutId base = use_slots ? slot_base_[l][cur] : kNoSlot;
      ShortcutId hop = kNoSlot;
      uint32_t next = cur;
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (broken != nullptr && use_slots && (*broken)[base + i]) continue;
        const double s = Sim(q, list[i]);
        if (s > best) {
          best = s;
          next = list[i];
          hop = use_slots ? base + static_cast<ShortcutId>(i) : kNoSlot;
        }
      }
      if (next != cur) {
        cur = next;
        moved = true;
        if (hops != nullptr && hop != kNoSlot) {
          hops->push_back(hop);
          hop_levels->push_back(l);
        }
      }
    }
  }
  return cur;
}

void HybridIndex::AddReverseLink(uint32_t from, uint32_t to, int level,
                                 std::vector<uint32_t>* changed) {
  auto& list = links_[level][from];
  if (std::find(list.begin(), list.end(), to) != list.end()) return;
  list.push_back(to);
  if (static_cast<int>(list.size()) > capacity(level)) {
    list = SelectNeighbours(from, list, capacity(level));
  }
  if (changed != nullptr) changed->push_back(from);
}

void HybridIndex::Insert(uint32_t v) {
  const int lv = level_[v];
  if (top_level_ < 0) {
    entry_ = v;
    top_level_ = lv;
    return;
  }
  const Eigen::VectorXd q = view_->unit_embeddings.row(v).transpose();
  uint32_t ep = entry_;
  if (lv < top_level_) ep = GreedyDescend(q, entry_, top_level_, lv + 1, nullptr, nullptr, nullptr);
  std::vector<uint32_t> entries{ep};
  std::vector<uint32_t> chosen;
  for (int l = std::min(lv, top_level_); l >= 0; --l) {
    const auto w = SearchLayer(q, entries, params_.ef_construction, l, nullptr, nullptr, nullptr);
    std::vector<uint32_t> pool;
    pool.reserve(w.size());
    for (const auto& c : w) pool.push_back(c.node);
    auto sel = SelectNeighbours(v, pool, params_.m);
    links_[l][v] = sel;
    for (uint32_t u : sel) AddReverseLink(u, v, l, nullptr);
    chosen.insert(chosen.end(), sel.begin(), sel.end());
    entries = std::move(pool);
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  std::stable_sort(chosen.begin(), chosen.end(), [&](uint32_t a, uint32_t b) {
    return HybridScore(v, a) > HybridScore(v, b);
  });
  if (static_cast<int>(chosen.size()) > params_.ef) chosen.resize(params_.ef);
  n_idx_[v] = std::move(chosen);
  if (lv > top_level_) {
    top_level_ = lv;
    entry_ = v;
  }
}

void HybridIndex::AssignSlots() {
  slot_base_.assign(links_.size(), std::vector<ShortcutId>(level_.size(), kNoSlot));
  blocks_.clear();
  std::size_t next = 0;
  for (std::size_t l = 0; l < links_.size(); ++l) {
    for (std::size_t v = 0; v < level_.size(); ++v) {
      if (level_[v] >= static_cast<int>(l)) {
        slot_base_[l][v] = static_cast<ShortcutId>(next);
        blocks_.push_back({static_cast<ShortcutId>(next), static_cast<int>(l),
                           static_cast<uint32_t>(v)});
        next += capacity(static_cast<int>(l));
      }
    }
  }
  Require(next < kNoSlot, "too many shortcut slots");
  slot_count_ = next;
}

ShortcutId HybridIndex::SlotBase(int level, uint32_t node) const {
  return slot_base_.at(level).at(node);
}

HybridIndex::SlotRef HybridIndex::Decode(ShortcutId id) const {
  Require(id < slot_count_, "shortcut id out of range");
  auto it = std::upper_bound(
      blocks_.begin(), blocks_.end(), id,
      [](ShortcutId x, const SlotBlock& b) { return x < b.base; });
  const SlotBlock& b = *(it - 1);
  return {b.level, b.node, static_cast<int>(id - b.base)};
}

bool HybridIndex::SlotLive(ShortcutId id) const {
  const SlotRef r = Decode(id);
  return r.position < static_cast<int>(links_[r.level][r.node].size());
}

uint32_t HybridIndex::SlotTarget(ShortcutId id) const {
  const SlotRef r = Decode(id);
  const auto& list = links_[r.level][r.node];
  Require(r.position < static_cast<int>(list.size()), "shortcut slot is empty");
  return list[r.position];
}

std::size_t HybridIndex::LiveShortcutCount() const {
  std::size_t count = 0;
  for (const auto& level : links_) {
    for (const auto& list : level) count += list.size();
  }
  return count;
}

std::vector<SearchResult> HybridIndex::Search(const Eigen::VectorXd& query,
                                              const SearchOptions& options) const {
  Require(top_level_ >= 0, "index is empty");
  Require(query.size() == view_->unit_embeddings.cols(), "query dimension mismatch");
  Require(options.k >= 1, "k must be positive");
  if (options.broken != nullptr) {
    Require(options.broken->size() == slot_count_, "broken mask size mismatch");
  }
  if (options.misleading != nullptr) {
    Require(options.misleading->size() == slot_count_, "misleading mask size mismatch");
  }
  const double norm = query.norm();
  Require(norm > 0 && std::isfinite(norm), "query must be a finite nonzero vector");
  const Eigen::VectorXd q = query / norm;
  const int ef = options.ef > 0 ? options.ef : params_.ef;
  Require(options.k <= ef, "k must not exceed ef");

  const bool track = options.trace != nullptr || options.misleading != nullptr;
  std::vector<ShortcutId> hops;
  std::vector<int> hop_levels;
  const uint32_t ep = GreedyDescend(q, entry_, top_level_, 1, options.broken,
                                    track ? &hops : nullptr,
                                    track ? &hop_levels : nullptr);
  std::vector<ShortcutId> parent_slot;
  std::vector<uint32_t> parent_node;
  if (track) {
    parent_slot.assign(level_.size(), kNoSlot);
    parent_node.assign(level_.size(), 0);
  }
  auto beam = SearchLayer(q, {ep}, ef, 0, options.broken,
                          track ? &parent_slot : nullptr,
                          track ? &parent_node : nullptr);
  if (track) {
    // Walk each beam node's discovery chain back to the layer-0 entry.
    std::vector<uint8_t> on_path(slot_count_, 0);
    std::vector<int8_t> poisoned(level_.size(), -1);
    bool descent_poisoned = false;
    for (std::size_t i = 0; i < hops.size(); ++i) {
      if (options.misleading != nullptr && (*options.misleading)[hops[i]]) {
        descent_poisoned = true;
      }
      if (options.trace != nullptr && !on_path[hops[i]]) {
        on_path[hops[i]] = 1;
        options.trace->shortcuts.push_back(hops[i]);
        options.trace->levels.push_back(hop_levels[i]);
      }
    }
    poisoned[ep] = descent_poisoned ? 1 : 0;
    std::vector<uint32_t> chain;
    for (const auto& c : beam) {
      chain.clear();
      uint32_t x = c.node;
      while (poisoned[x] < 0) {
        chain.push_back(x);
        x = parent_node[x];
      }
      bool bad = poisoned[x] == 1;
      for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const ShortcutId s = parent_slot[*it];
        if (options.misleading != nullptr && (*options.misleading)[s]) bad = true;
        poisoned[*it] = bad ? 1 : 0;
        if (options.trace != nullptr && !on_path[s]) {
          on_path[s] = 1;
          options.trace->shortcuts.push_back(s);
          options.trace->levels.push_back(0);
        }
      }
    }
    if (options.misleading != nullptr) {
      std::erase_if(beam, [&](const Candidate& c) { return poisoned[c.node] == 1; });
    }
  }

  std::vector<SearchResult> out;
  out.reserve(beam.size());
  const bool rescore = options.affinity_row != nullptr && options.anchor >= 0;
  const std::vector<uint32_t>* order =
      rescore ? &n_idx_.at(options.anchor) : nullptr;
  for (const auto& c : beam) {
    double score = c.sim;
    if (rescore) {
      double a = 0;
      auto it = std::find(order->begin(), order->end(), c.node);
      if (it != order->end()) a = options.affinity_row[it - order->begin()];
      score = (1 - options.beta) * c.sim + options.beta * a;
    }
    out.push_back({c.node, score});
  }
  std::stable_sort(out.begin(), out.end(), [](const SearchResult& a, const SearchResult& b) {
    return a.score > b.score;
  });
  if (static_cast<int>(out.size()) > options.k) out.resize(options.k);
  return out;
}

std::vector<uint32_t> HybridIndex::Reconnect(uint32_t node, int level,
                                             const std::vector<uint8_t>* broken) {
  Require(level >= 0 && level <= level_[node], "node is absent from that level");
  const Eigen::VectorXd q = view_->unit_embeddings.row(node).transpose();
  std::vector<uint32_t> entries;
  const auto& current = links_[level][node];
  const ShortcutId base = slot_base_[level][node];
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (broken == nullptr || !(*broken)[base + i]) entries.push_back(current[i]);
  }
  if (level <= top_level_) {
    entries.push_back(
        GreedyDescend(q, entry_, top_level_, level + 1, broken, nullptr, nullptr));
  }
  const auto w = SearchLayer(q, entries, params_.ef_construction, level, broken, nullptr, nullptr);
  std::vector<uint32_t> pool;
  for (const auto& c : w) pool.push_back(c.node);
  std::vector<uint32_t> changed{node};
  links_[level][node] = SelectNeighbours(node, pool, params_.m);
  for (uint32_t u : links_[level][node]) AddReverseLink(u, node, level, &changed);
  return changed;
}

void HybridIndex::Save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write index snapshot " + path);
  out.precision(17);
  out << "chronos-index v1\n";
  out << "params " << params_.m << ' ' << params_.ef_construction << ' ' << params_.ef
      << ' ' << params_.max_levels << ' ' << params_.level_mult << ' ' << params_.rho_div << ' '
      << static_cast<int>(params_.diversity) << ' ' << params_.beta
      << ' ' << params_.gamma_community << ' ' << params_.hub_quantile << ' '
      << params_.seed << ' ' << t_built_ << '\n';
  out << "nodes " << level_.size() << ' ' << top_level_ << ' ' << entry_ << '\n';
  out << "levels";
  for (int l : level_) out << ' ' << l;
  out << '\n';
  for (std::size_t l = 0; l < links_.size(); ++l) {
    for (std::size_t v = 0; v < level_.size(); ++v) {
      if (level_[v] < static_cast<int>(l)) continue;
      out << "L " << l << ' ' << v;
      for (uint32_t u : links_[l][v]) out << ' ' << u;
      out << '\n';
    }
  }
  for (std::size_t v = 0; v < n_idx_.size(); ++v) {
    out << "N " << v;
    for (uint32_t u : n_idx_[v]) out << ' ' << u;
    out << '\n';
  }
  if (!out) throw IoError("failed writing index snapshot " + path);
}

HybridIndex HybridIndex::Load(const std::string& path,
                              std::shared_ptr<const PublicView> view,
                              const DecayFn& decay) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read index snapshot " + path);
  std::string line, tag;
  std::getline(in, line);
  if (line != "chronos-index v1") throw IoError("bad index snapshot header");
  HybridIndex index;
  IndexParams& p = index.params_;
  int rule = 0;
  {
    std::getline(in, line);
    std::istringstream ss(line);
    ss >> tag >> p.m >> p.ef_construction >> p.ef >> p.max_levels >> p.level_mult >> p.rho_div >> rule >>
        p.beta >> p.gamma_community >> p.hub_quantile >> p.seed >> index.t_built_;
    if (!ss || tag != "params") throw IoError("bad params line in snapshot");
  }
  p.diversity = static_cast<DiversityRule>(rule);
  std::size_t n = 0;
  {
    std::getline(in, line);
    std::istringstream ss(line);
    ss >> tag >> n >> index.top_level_ >> index.entry_;
    if (!ss || tag != "nodes") throw IoError("bad nodes line in snapshot");
  }
  Require(view != nullptr && view->size() == n, "snapshot does not match the view");
  index.level_.resize(n);
  {
    std::getline(in, line);
    std::istringstream ss(line);
    ss >> tag;
    for (auto& l : index.level_) ss >> l;
    if (!ss || tag != "levels") throw IoError("bad levels line in snapshot");
  }
  index.links_.assign(index.top_level_ + 1, std::vector<std::vector<uint32_t>>(n));
  index.n_idx_.assign(n, {});
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    ss >> tag;
    if (tag == "L") {
      std::size_t l, v;
      ss >> l >> v;
      if (!ss || l >= index.links_.size() || v >= n) throw IoError("bad link line");
      uint32_t u;
      while (ss >> u) index.links_[l][v].push_back(u);
    } else if (tag == "N") {
      std::size_t v;
      ss >> v;
      if (!ss || v >= n) throw IoError("bad neighbour-order line");
      uint32_t u;
      while (ss >> u) index.n_idx_[v].push_back(u);
    } else {
      throw IoError("unknown snapshot record: " + tag);
    }
  }
  index.view_ = std::move(view);
  index.decay_ = decay;
  index.weights_ = PairWeights(*index.view_, decay, index.t_built_, p.gamma_community);
  index.AssignSlots();
  return index;
}

void HybridIndex::WriteNeighbourOrderCsv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "node,j,candidate\n";
  for (std::size_t v = 0; v < n_idx_.size(); ++v) {
    for (std::size_t j = 0; j < n_idx_[v].size(); ++j) {
      out << v << ',' << j << ',' << n_idx_[v][j] << '\n';
    }
  }
}

}  // namespace chronos::index
