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

#include "spindet/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spindet::stats {

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

MeanVariance mean_variance(std::span<const double> values) {
  MeanVariance out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.variance = ss / static_cast<double>(values.size() - 1);
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

AndersonDarling anderson_darling_normal(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 8) throw std::invalid_argument("anderson_darling_normal: need at least 8 values");
  const auto mv = mean_variance(values);
  const double sd = std::sqrt(mv.variance);
  std::vector<double> z(values.begin(), values.end());
  std::sort(z.begin(), z.end());
  for (double& v : z) v = (v - mv.mean) / sd;

  double s = 0.0;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double lower = std::max(normal_cdf(z[i]), 1e-300);
    const double upper = std::max(1.0 - normal_cdf(z[n - 1 - i]), 1e-300);
    s += (2.0 * static_cast<double>(i) + 1.0) * (std::log(lower) + std::log(upper));
  }
  AndersonDarling out;
  out.statistic = -nd - s / nd;
  const double a = out.statistic * (1.0 + 0.75 / nd + 2.25 / (nd * nd));
  out.adjusted = a;
  if (a >= 0.6) {
    out.p_value = std::exp(1.2937 - 5.709 * a + 0.0186 * a * a);
  } else if (a >= 0.34) {
    out.p_value = std::exp(0.9177 - 4.279 * a - 1.38 * a * a);
  } else if (a >= 0.2) {
    out.p_value = 1.0 - std::exp(-8.318 + 42.796 * a - 59.938 * a * a);
  } else {
    out.p_value = 1.0 - std::exp(-13.436 + 101.14 * a - 223.73 * a * a);
  }
  out.p_value = std::clamp(out.p_value, 0.0, 1.0);
  return out;
}

}  // namespace spindet::stats
