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

#include "chronos/index/staleness.h"

#include <algorithm>
#include <limits>
#include <unordered_set>

#include "chronos/common/error.h"

namespace chronos::index {
namespace {

constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();

uint64_t PairKey(uint32_t u, uint32_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<uint64_t>(u) << 32) | v;
}

}  // namespace

StalenessState::StalenessState(const HybridIndex& index, double t_now)
    : stale_(index.shortcut_slots(), 0),
      last_repair_(index.shortcut_slots(), t_now),
      target_(index.shortcut_slots(), kNone) {
  for (int l = 0; l <= index.top_level(); ++l) {
    for (uint32_t v = 0; v < index.node_count(); ++v) {
      if (index.level_of(v) < l) continue;
      const auto& list = index.links(l, v);
      const ShortcutId base = index.SlotBase(l, v);
      for (std::size_t i = 0; i < list.size(); ++i) target_[base + i] = list[i];
      live_count_ += list.size();
    }
  }
}

double StalenessState::StaleFraction() const {
  return live_count_ == 0 ? 0.0
                          : static_cast<double>(StaleCount()) / live_count_;
}

std::size_t StalenessState::StaleCount() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < stale_.size(); ++i) {
    if (stale_[i] && target_[i] != kNone) ++count;
  }
  return count;
}

void StalenessState::Touch(ShortcutId id, double time) {
  Require(id < stale_.size(), "shortcut id out of range");
  if (target_[id] != kNone && time > last_repair_[id]) stale_[id] = 1;
}

void StalenessState::SyncNodes(const HybridIndex& index, double t_now,
                               int level, std::span<const uint32_t> nodes,
                               uint32_t repaired) {
  const int cap = index.capacity(level);
  struct Old {
    uint32_t target;
    uint8_t stale;
    double last_repair;
  };
  std::vector<Old> old;
  for (uint32_t v : nodes) {
    const ShortcutId base = index.SlotBase(level, v);
    old.clear();
    for (int i = 0; i < cap; ++i) {
      if (target_[base + i] != kNone) {
        old.push_back({target_[base + i], stale_[base + i], last_repair_[base + i]});
        --live_count_;
      }
    }
    const auto& list = index.links(level, v);
    for (int i = 0; i < cap; ++i) {
      const ShortcutId s = base + i;
      if (i >= static_cast<int>(list.size())) {
        target_[s] = kNone;
        stale_[s] = 0;
        continue;
      }
      target_[s] = list[i];
      ++live_count_;
      auto it = std::find_if(old.begin(), old.end(),
                             [&](const Old& o) { return o.target == list[i]; });
      if (v != repaired && it != old.end()) {
        stale_[s] = it->stale;
        last_repair_[s] = it->last_repair;
      } else {
        stale_[s] = 0;
        last_repair_[s] = t_now;
      }
    }
  }
}

std::size_t MarkStale(StalenessState& state, const kg::ChangeLog& log,
                      double t_now) {
  const std::size_t before = state.StaleCount();
  for (const auto& e : log) {
    if (e.time <= t_now) state.Touch(e.unit, e.time);
  }
  return state.StaleCount() - before;
}

std::size_t MarkStale(StalenessState& state, const kg::ChangeLog& log,
                      double t_now, const DependencyMap& dependencies) {
  const std::size_t before = state.StaleCount();
  for (const auto& e : log) {
    if (e.time > t_now) continue;
    auto it = dependencies.find(e.unit);
    if (it == dependencies.end()) continue;
    for (ShortcutId s : it->second) state.Touch(s, e.time);
  }
  return state.StaleCount() - before;
}

DependencyMap BuildDependencyMap(const HybridIndex& index) {
  std::unordered_map<uint64_t, std::vector<ShortcutId>> by_pair;
  for (int l = 0; l <= index.top_level(); ++l) {
    for (uint32_t v = 0; v < index.node_count(); ++v) {
      if (index.level_of(v) < l) continue;
      const auto& list = index.links(l, v);
      const ShortcutId base = index.SlotBase(l, v);
      for (std::size_t i = 0; i < list.size(); ++i) {
        by_pair[PairKey(v, list[i])].push_back(base + static_cast<ShortcutId>(i));
      }
    }
  }
  DependencyMap out;
  for (const auto& e : index.view().edges) {
    auto it = by_pair.find(PairKey(e.u, e.v));
    if (it == by_pair.end()) continue;
    auto& slots = out[e.id];
    slots.insert(slots.end(), it->second.begin(), it->second.end());
  }
  return out;
}

const char* MaintenanceModeName(MaintenanceMode mode) {
  switch (mode) {
    case MaintenanceMode::kNone:
      return "none";
    case MaintenanceMode::kIncremental:
      return "incremental";
    case MaintenanceMode::kFullRebuild:
      return "rebuild";
  }
  return "unknown";
}

MaintenanceReport Maintain(HybridIndex& index, StalenessState& state,
                           std::span<const uint32_t> active, double t_now,
                           const MaintenanceConfig& config) {
  Require(config.rebuild_threshold > 0 && config.rebuild_threshold <= 1,
          "rebuild threshold must lie in (0, 1]");
  MaintenanceReport report;
  report.stale_fraction = state.StaleFraction();
  if (report.stale_fraction == 0) return report;

  const std::size_t n = index.node_count();
  if (report.stale_fraction >= config.rebuild_threshold) {
    index = HybridIndex::Build(index.shared_view(), index.decay(), t_now,
                               index.params());
    state = StalenessState(index, t_now);
    report.mode = MaintenanceMode::kFullRebuild;
    report.touched_nodes = n;
    report.cost_units = 1.0;
    return report;
  }

  report.mode = MaintenanceMode::kIncremental;
  std::vector<uint8_t> touched(n, 0);
  std::unordered_set<uint32_t> seen;
  for (uint32_t v : active) {
    Require(v < n, "active node out of range");
    if (!seen.insert(v).second) continue;
    for (int l = 0; l <= index.level_of(v); ++l) {
      const ShortcutId base = index.SlotBase(l, v);
      const std::size_t len = index.links(l, v).size();
      bool has_stale = false;
      for (std::size_t i = 0; i < len && !has_stale; ++i) {
        has_stale = state.IsStale(base + static_cast<ShortcutId>(i));
      }
      if (!has_stale) continue;
      auto changed = index.Reconnect(v, l, &state.stale());
      std::sort(changed.begin(), changed.end());
      changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
      state.SyncNodes(index, t_now, l, changed, v);
      for (uint32_t c : changed) touched[c] = 1;
    }
  }
  report.touched_nodes =
      static_cast<std::size_t>(std::count(touched.begin(), touched.end(), 1));
  report.cost_units = static_cast<double>(report.touched_nodes) / n;
  return report;
}

}  // namespace chronos::index
