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

#ifndef CHRONOS_INDEX_STALENESS_H_
#define CHRONOS_INDEX_STALENESS_H_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "chronos/index/hybrid_index.h"
#include "chronos/kg/change_process.h"

namespace chronos::index {

// Per-slot staleness for one index. A slot whose link changes is repaired
// (fresh) from that moment on.
class StalenessState {
 public:
  StalenessState() = default;
  StalenessState(const HybridIndex& index, double t_now);

  const std::vector<uint8_t>& stale() const { return stale_; }
  bool IsStale(ShortcutId id) const { return stale_[id] != 0; }
  double last_repair(ShortcutId id) const { return last_repair_[id]; }
  // Stale live shortcuts over live shortcuts; 0 for an empty index.
  double StaleFraction() const;
  std::size_t StaleCount() const;
  std::size_t LiveCount() const { return live_count_; }

  // Marks `id` stale if the event postdates its last repair.
  void Touch(ShortcutId id, double time);
  // Resynchronizes the slots of `nodes` on `level` after their lists
  // changed. Links that survived keep their flag and repair time; new links
  // are fresh as of `t_now`. Every slot of `repaired` is cleared.
  void SyncNodes(const HybridIndex& index, double t_now, int level,
                 std::span<const uint32_t> nodes, uint32_t repaired);

 private:
  std::vector<uint8_t> stale_;
  std::vector<double> last_repair_;
  std::vector<uint32_t> target_;  // link target per slot, kNone if empty
  std::size_t live_count_ = 0;
};

// Marks shortcuts stale from a change log whose units are shortcut ids.
// Events after `t_now` are ignored. Returns the number of newly stale slots.
std::size_t MarkStale(StalenessState& state, const kg::ChangeLog& log,
                      double t_now);

// Same, with units that are KG edge ids mapped to dependent shortcuts.
using DependencyMap = std::unordered_map<uint32_t, std::vector<ShortcutId>>;
std::size_t MarkStale(StalenessState& state, const kg::ChangeLog& log,
                      double t_now, const DependencyMap& dependencies);

// Shortcut slots whose link joins the endpoints of a public KG edge, keyed
// by the edge id recorded in the public view.
DependencyMap BuildDependencyMap(const HybridIndex& index);

enum class MaintenanceMode { kNone, kIncremental, kFullRebuild };

const char* MaintenanceModeName(MaintenanceMode mode);

struct MaintenanceConfig {
  double rebuild_threshold = 0.40;
};

struct MaintenanceReport {
  MaintenanceMode mode = MaintenanceMode::kNone;
  double stale_fraction = 0;
  std::size_t touched_nodes = 0;
  double cost_units = 0;  // touched-node fraction; 1 for a rebuild
};

// Repairs the index. Below the threshold only nodes in `active` with stale
// links are re-linked; otherwise the index is rebuilt from its public view
// with decay weights evaluated at `t_now`.
MaintenanceReport Maintain(HybridIndex& index, StalenessState& state,
                           std::span<const uint32_t> active, double t_now,
                           const MaintenanceConfig& config = {});

}  // namespace chronos::index

#endif  // CHRONOS_INDEX_STALENESS_H_
