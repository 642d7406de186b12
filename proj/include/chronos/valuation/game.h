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

#ifndef CHRONOS_VALUATION_GAME_H_
#define CHRONOS_VALUATION_GAME_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <unordered_map>
#include <vector>

namespace chronos::valuation {

// Membership flags, one per seller.
using Coalition = std::vector<uint8_t>;

// Characteristic function of a seller game. v(empty) is the public-only
// value.
class CoalitionValueFn {
 public:
  virtual ~CoalitionValueFn() = default;
  virtual int players() const = 0;
  virtual double Value(const Coalition& members) const = 0;
};

class FunctionGame : public CoalitionValueFn {
 public:
  FunctionGame(int players, std::function<double(const Coalition&)> fn)
      : players_(players), fn_(std::move(fn)) {}
  int players() const override { return players_; }
  double Value(const Coalition& members) const override { return fn_(members); }

 private:
  int players_;
  std::function<double(const Coalition&)> fn_;
};

// v(S) = base + sum of per-player contributions.
class AdditiveGame : public CoalitionValueFn {
 public:
  AdditiveGame(std::vector<double> contributions, double base = 0)
      : c_(std::move(contributions)), base_(base) {}
  int players() const override { return static_cast<int>(c_.size()); }
  double Value(const Coalition& members) const override;

 private:
  std::vector<double> c_;
  double base_;
};

// Memoizes another game by coalition bitmask (players <= 24 only; larger
// games pass through). Not thread safe.
class CachedGame : public CoalitionValueFn {
 public:
  explicit CachedGame(const CoalitionValueFn& inner) : inner_(inner) {}
  int players() const override { return inner_.players(); }
  double Value(const Coalition& members) const override;
  std::size_t evaluations() const { return evaluations_; }

 private:
  const CoalitionValueFn& inner_;
  mutable std::unordered_map<uint32_t, double> cache_;
  mutable std::size_t evaluations_ = 0;
};

uint32_t CoalitionMask(const Coalition& members);

}  // namespace chronos::valuation

#endif  // CHRONOS_VALUATION_GAME_H_
