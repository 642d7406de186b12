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

#ifndef CHRONOS_COMMON_NUMERIC_H_
#define CHRONOS_COMMON_NUMERIC_H_

#include <cmath>
#include <span>
#include <vector>

namespace chronos {

inline double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double Softplus(double x) {
  return x > 30 ? x : std::log1p(std::exp(x));
}

// Standard normal CDF.
inline double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double Clamp01(double x) { return x < 0 ? 0 : (x > 1 ? 1 : x); }

// Neumaier-compensated summation. Results agree to a few ulps regardless of
// the order in which terms arrive.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

struct MeanStd {
  double mean = 0;
  double stddev = 0;  // sample standard deviation (n-1)
  std::size_t count = 0;
};

MeanStd ComputeMeanStd(std::span<const double> values);

// Median of a copy of `values`; NaN when empty.
double Median(std::vector<double> values);

// Linear-interpolated quantile, q in [0,1]; NaN when empty.
double Quantile(std::vector<double> values, double q);

// Least-squares slope of y against x.
double LinearSlope(std::span<const double> x, std::span<const double> y);

}  // namespace chronos

#endif  // CHRONOS_COMMON_NUMERIC_H_
