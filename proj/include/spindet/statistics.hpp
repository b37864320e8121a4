// Copyright 2026 The spindet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>

namespace spindet::stats {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Wilson score interval for a binomial proportion; z = 1.96 gives 95%.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

struct MeanVariance {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
};

MeanVariance mean_variance(std::span<const double> values);

/// Anderson-Darling test of normality with mean and variance estimated from
/// the sample (D'Agostino & Stephens small-sample correction and p-value).
struct AndersonDarling {
  double statistic = 0.0;  // A^2
  double adjusted = 0.0;   // A^2 (1 + 0.75/n + 2.25/n^2)
  double p_value = 0.0;
};

AndersonDarling anderson_darling_normal(std::span<const double> values);

double normal_cdf(double x);

}  // namespace spindet::stats
