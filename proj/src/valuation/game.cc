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

#include "chronos/valuation/game.h"

#include "chronos/common/error.h"

namespace chronos::valuation {

uint32_t CoalitionMask(const Coalition& members) {
  Require(members.size() <= 32, "coalition too large for a bitmask");
  uint32_t mask = 0;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i]) mask |= 1u << i;
  }
  return mask;
}

double AdditiveGame::Value(const Coalition& members) const {
  Require(members.size() == c_.size(), "coalition size mismatch");
  double v = base_;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (members[i]) v += c_[i];
  }
  return v;
}

double CachedGame::Value(const Coalition& members) const {
  if (members.size() > 24) {
    ++evaluations_;
    return inner_.Value(members);
  }
  const uint32_t key = CoalitionMask(members);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  ++evaluations_;
  const double v = inner_.Value(members);
  cache_.emplace(key, v);
  return v;
}

}  // namespace chronos::valuation
