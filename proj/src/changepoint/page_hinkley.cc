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

#include "chronos/changepoint/page_hinkley.h"

#include <algorithm>

#include "chronos/common/error.h"

namespace chronos::changepoint {

std::vector<std::size_t> PageHinkley(std::span<const double> stream,
                                     double delta, double lambda) {
  Require(delta > 0 && lambda > 0, "Page-Hinkley needs delta > 0 and lambda > 0");
  std::vector<std::size_t> events;
  double mean = 0, up = 0, down = 0, up_min = 0, down_min = 0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const double x = stream[t];
    ++n;
    mean += (x - mean) / static_cast<double>(n);
    up += x - mean - delta;
    down += mean - x - delta;
    up_min = std::min(up_min, up);
    down_min = std::min(down_min, down);
    if (up - up_min > lambda || down - down_min > lambda) {
      events.push_back(t);
      mean = up = down = up_min = down_min = 0;
      n = 0;
    }
  }
  return events;
}

}  // namespace chronos::changepoint
