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

#include "spindet/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "spindet/errors.hpp"

namespace spindet {

namespace {

constexpr std::size_t kBlockSize = 64;

struct TrialResult {
  bool ok = true;
  std::string error;
  std::vector<double> zeta_spin, zeta_no_spin;
  std::vector<double> p_spin_record, p_no_spin_record;
};

struct TrialPlan {
  const EnsembleConfig& config;
  double dt;
  std::size_t steps;
  std::size_t stride;
  std::size_t samples;
  double no_spin_mean;
};

void run_record(const TrialPlan& plan, Hypothesis hypothesis, std::uint64_t seed,
                std::vector<double>& zeta_out, std::vector<double>& p_out) {
  const auto& cfg = plan.config;
  const auto& p = cfg.params;
  RngStream rng(seed);
  BayesFilter filter(p, plan.dt, cfg.prior_spin, cfg.scheme, cfg.initial);
  const double sqrt_eta = std::sqrt(p.eta);
  zeta_out.resize(plan.samples);
  p_out.resize(plan.samples);

  std::optional<SpinSme> source;
  SpinMatrix rho;
  if (hypothesis == Hypothesis::spin) {
    source.emplace(p, plan.dt, cfg.scheme);
    rho = initial_state(p, cfg.initial);
  }
  double integral = 0.0;
  std::size_t sample = 0;
  for (std::size_t k = 0; k < plan.steps; ++k) {
    const double dW = rng.gaussian_increment(plan.dt);
    const double dY = source ? source->step_with_noise(rho, dW) : plan.no_spin_mean + sqrt_eta * dW;
    integral += dY;
    filter.update(dY);
    if ((k + 1) % plan.stride == 0) {
      const double t = static_cast<double>(k + 1) * plan.dt;
      zeta_out[sample] = integral / std::sqrt(t);
      p_out[sample] = filter.p_spin();
      ++sample;
    }
  }
}

TrialResult run_trial(const TrialPlan& plan, std::size_t index) {
  TrialResult r;
  const auto seed = plan.config.master_seed;
  try {
    run_record(plan, Hypothesis::spin, RngStream::derive_seed(seed, 2 * index), r.zeta_spin,
               r.p_spin_record);
    run_record(plan, Hypothesis::no_spin, RngStream::derive_seed(seed, 2 * index + 1),
               r.zeta_no_spin, r.p_no_spin_record);
  } catch (const NumericalError& e) {
    r.ok = false;
    r.error = fmt::format("trial {}: {}", index, e.what());
  }
  return r;
}

struct Accumulator {
  std::vector<std::size_t> threshold_wrong, bayes_wrong;
  std::vector<double> sum_spin, sumsq_spin, sum_none, sumsq_none;
};

}  // namespace

EnsembleStats run_ensemble(const EnsembleConfig& config, Execution execution) {
  const auto& p = config.params;
  p.validate();
  if (config.trials < 1) throw ConfigError("trials", "must be at least 1");
  if (!(config.duration >= 0.0)) throw ConfigError("duration", "must be non-negative");

  EnsembleStats out;
  out.trials = config.trials;
  out.eta = p.eta;
  out.tau1 = p.tau1();
  out.dt = config.dt > 0.0 ? config.dt : SpinSme::max_dt(p);
  out.sample_stride =
      config.sample_stride > 0 ? config.sample_stride : default_sample_stride(out.tau1, out.dt);
  out.rule = threshold_rule(p);

  const auto steps = static_cast<std::size_t>(std::llround(config.duration / out.dt));
  const std::size_t samples = steps / out.sample_stride;
  const TrialPlan plan{config, out.dt, steps, out.sample_stride, samples,
                       no_spin_mean_rate(p) * out.dt};

  auto& curves = out.errors;
  for (std::size_t s = 0; s < samples; ++s) {
    curves.times.push_back(static_cast<double>((s + 1) * out.sample_stride) * out.dt);
  }
  // Snapshots sit on the nearest sample.
  std::vector<std::size_t> snapshot_index;
  for (double t : config.snapshot_times) {
    if (samples == 0) break;
    const auto k = std::llround(t / (out.dt * static_cast<double>(out.sample_stride)));
    const auto idx = static_cast<std::size_t>(std::clamp<long long>(k, 1, (long long)samples)) - 1;
    snapshot_index.push_back(idx);
    Snapshot snap;
    snap.time = curves.times[idx];
    out.snapshots.push_back(std::move(snap));
  }

  Accumulator acc;
  acc.threshold_wrong.assign(samples, 0);
  acc.bayes_wrong.assign(samples, 0);
  acc.sum_spin.assign(samples, 0.0);
  acc.sumsq_spin.assign(samples, 0.0);
  acc.sum_none.assign(samples, 0.0);
  acc.sumsq_none.assign(samples, 0.0);

  std::vector<double> thresholds(samples), delta_mu(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    thresholds[s] = out.rule.threshold(curves.times[s]);
    delta_mu[s] = out.rule.delta_mu(curves.times[s]);
  }

  std::vector<TrialResult> block(kBlockSize);
  for (std::size_t begin = 0; begin < config.trials; begin += kBlockSize) {
    const std::size_t count = std::min(kBlockSize, config.trials - begin);
    const auto n = static_cast<long long>(count);
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
      for (long long j = 0; j < n; ++j) {
        block[static_cast<std::size_t>(j)] = run_trial(plan, begin + static_cast<std::size_t>(j));
      }
    } else {
      for (long long j = 0; j < n; ++j) {
        block[static_cast<std::size_t>(j)] = run_trial(plan, begin + static_cast<std::size_t>(j));
      }
    }
    // Single-owner reduce in trial order.
    for (std::size_t j = 0; j < count; ++j) {
      const auto& r = block[j];
      if (!r.ok) {
        ++out.excluded;
        out.failures.push_back(r.error);
        continue;
      }
      ++out.completed;
      for (std::size_t s = 0; s < samples; ++s) {
        const double zs = r.zeta_spin[s];
        const double zn = r.zeta_no_spin[s];
        acc.threshold_wrong[s] +=
            (threshold_classify(zs, thresholds[s], delta_mu[s]) != Decision::spin) +
            (threshold_classify(zn, thresholds[s], delta_mu[s]) != Decision::no_spin);
        acc.bayes_wrong[s] += (bayes_decision(r.p_spin_record[s]) != Decision::spin) +
                              (bayes_decision(r.p_no_spin_record[s]) != Decision::no_spin);
        acc.sum_spin[s] += zs;
        acc.sumsq_spin[s] += zs * zs;
        acc.sum_none[s] += zn;
        acc.sumsq_none[s] += zn * zn;
      }
      for (std::size_t q = 0; q < snapshot_index.size(); ++q) {
        const auto s = snapshot_index[q];
        auto& snap = out.snapshots[q];
        snap.zeta_spin.push_back(r.zeta_spin[s]);
        snap.zeta_no_spin.push_back(r.zeta_no_spin[s]);
        snap.p_spin_given_spin.push_back(r.p_spin_record[s]);
        snap.p_spin_given_no_spin.push_back(r.p_no_spin_record[s]);
      }
    }
  }

  if (out.excluded * 100 > config.trials) {
    throw NumericalError(fmt::format("run_ensemble: {} of {} trials failed (> 1%); first: {}",
                                     out.excluded, config.trials, out.failures.front()));
  }

  const std::size_t decisions = 2 * out.completed;
  const double nd = static_cast<double>(out.completed);
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = curves.times[s];
    curves.threshold_analytic.push_back(analytic_error(t, out.tau1, p.eta));
    curves.threshold_wrong.push_back(acc.threshold_wrong[s]);
    curves.bayes_wrong.push_back(acc.bayes_wrong[s]);
    const double denom = decisions > 0 ? static_cast<double>(decisions) : 1.0;
    curves.threshold_empirical.push_back(static_cast<double>(acc.threshold_wrong[s]) / denom);
    curves.bayes_empirical.push_back(static_cast<double>(acc.bayes_wrong[s]) / denom);
    curves.threshold_band.push_back(stats::wilson_interval(acc.threshold_wrong[s], decisions));
    curves.bayes_band.push_back(stats::wilson_interval(acc.bayes_wrong[s], decisions));

    auto finish = [&](double sum, double sumsq) {
      stats::MeanVariance mv;
      if (out.completed == 0) return mv;
      mv.mean = sum / nd;
      mv.variance = out.completed > 1 ? (sumsq - nd * mv.mean * mv.mean) / (nd - 1.0) : 0.0;
      return mv;
    };
    out.zeta_spin.push_back(finish(acc.sum_spin[s], acc.sumsq_spin[s]));
    out.zeta_no_spin.push_back(finish(acc.sum_none[s], acc.sumsq_none[s]));
  }
  return out;
}

double time_to_error(const std::vector<double>& times, const std::vector<double>& errors,
                     double level) {
  for (std::size_t s = 0; s < errors.size(); ++s) {
    if (errors[s] > level) continue;
    if (s == 0 || errors[s] <= 0.0 || errors[s - 1] <= 0.0) return times[s];
    const double l0 = std::log(errors[s - 1]);
    const double l1 = std::log(errors[s]);
    const double target = std::log(level);
    const double f = l0 == l1 ? 1.0 : (l0 - target) / (l0 - l1);
    return times[s - 1] + f * (times[s] - times[s - 1]);
  }
  return -1.0;
}

double bayes_speedup(const EnsembleStats& stats, double level) {
  const double t_bayes = time_to_error(stats.errors.times, stats.errors.bayes_empirical, level);
  if (t_bayes < 0.0) return std::nan("");
  const double t_threshold = analytic_time_to_error(level, stats.tau1, stats.eta);
  return 1.0 - t_bayes / t_threshold;
}

}  // namespace spindet
