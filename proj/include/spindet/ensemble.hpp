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

#include <cstdint>
#include <string>
#include <vector>

#include "spindet/detection.hpp"
#include "spindet/dynamics.hpp"

namespace spindet {

struct EnsembleConfig {
  ModelParams params;
  std::size_t trials = 1000;
  double duration = 0.0;  // s
  double dt = 0.0;        // s; 0 selects SpinSme::max_dt
  std::uint64_t master_seed = 1;
  std::vector<double> snapshot_times;  // s; histograms are kept here
  std::size_t sample_stride = 0;       // 0 selects default_sample_stride
  double prior_spin = 0.5;
  SmeScheme scheme = SmeScheme::kraus;
  InitialState initial = InitialState::steady;
};

enum class Execution { serial, parallel };

/// Empirical and analytic discrimination error on the sample grid.
struct ErrorCurves {
  std::vector<double> times;
  std::vector<double> threshold_analytic;   // epsilon_eta(t) with tau1 of the model
  std::vector<double> threshold_empirical;
  std::vector<double> bayes_empirical;
  std::vector<stats::Interval> threshold_band;  // Wilson 95% on 2 x completed decisions
  std::vector<stats::Interval> bayes_band;
  std::vector<std::size_t> threshold_wrong;
  std::vector<std::size_t> bayes_wrong;
};

struct Snapshot {
  double time = 0.0;
  std::vector<double> zeta_spin;
  std::vector<double> zeta_no_spin;
  std::vector<double> p_spin_given_spin;     // p_spin on spin records
  std::vector<double> p_spin_given_no_spin;  // p_spin on no-spin records
};

struct EnsembleStats {
  std::size_t trials = 0;
  std::size_t completed = 0;
  std::size_t excluded = 0;
  std::vector<std::string> failures;  // one message per excluded trial
  double dt = 0.0;
  std::size_t sample_stride = 0;
  double tau1 = 0.0;
  double eta = 0.0;
  ThresholdRule rule;
  ErrorCurves errors;
  std::vector<stats::MeanVariance> zeta_spin;  // per sample time
  std::vector<stats::MeanVariance> zeta_no_spin;
  std::vector<Snapshot> snapshots;
};

/// Runs `trials` paired spin / no-spin records through both discriminators.
///
/// Trial i uses noise streams RngStream::derive(master_seed, 2i) (spin record)
/// and RngStream::derive(master_seed, 2i + 1) (no-spin record). Trials that
/// raise NumericalError are excluded and listed; more than 1% exclusions
/// throws NumericalError. Serial and parallel execution give bit-identical
/// results.
EnsembleStats run_ensemble(const EnsembleConfig& config, Execution execution = Execution::parallel);

/// First time the curve reaches `level`, interpolating log(error) linearly
/// between samples. Returns a negative value if it never does.
double time_to_error(const std::vector<double>& times, const std::vector<double>& errors,
                     double level);

/// Fractional reduction of the time to reach `level` by the Bayesian filter
/// relative to the analytic threshold curve: 1 - t_bayes / t_threshold.
double bayes_speedup(const EnsembleStats& stats, double level);

}  // namespace spindet
