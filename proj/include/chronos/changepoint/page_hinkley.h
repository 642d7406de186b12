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

#ifndef CHRONOS_CHANGEPOINT_PAGE_HINKLEY_H_
#define CHRONOS_CHANGEPOINT_PAGE_HINKLEY_H_

#include <cstddef>
#include <span>
#include <vector>

namespace chronos::changepoint {

// Two-sided Page-Hinkley test. Emits the index of every sample at which the
// cumulative deviation from the running mean exceeds `lambda`, then restarts.
// Throws ParameterError unless delta > 0 and lambda > 0.
std::vector<std::size_t> PageHinkley(std::span<const double> stream,
                                     double delta, double lambda);

}  // namespace chronos::changepoint

#endif  // CHRONOS_CHANGEPOINT_PAGE_HINKLEY_H_
