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

#include "spindet/dynamics.hpp"
#include "spindet/statistics.hpp"

namespace spindet {

/// zeta(t) = (1 / sqrt t) * sum of dY over [0, t].
struct IntegratedSignal {
  std::vector<double> times;
  std::vector<double> zeta;
};

/// Sample times are rounded to the nearest whole step; t = 0 and times past the
/// end of the record are rejected with std::invalid_argument.
IntegratedSignal integrate_signal(const HomodyneRecord& record,
                                  const std::vector<double>& sample_times);

enum class Decision { no_spin, spin };

/// Analytic means of zeta under both hypotheses: mean(t) = rate * sqrt(t).
struct ThresholdRule {
  double rate_no_spin = 0.0;
  double rate_spin = 0.0;

  /// mean_spin(t) - mean_no_spin(t).
  double delta_mu(double t) const;
  /// Midpoint of the two means at time t.
  double threshold(double t) const;
};

/// Steady-state means eta <c_m + c_m^dagger> sqrt(t) with and without the spin.
ThresholdRule threshold_rule(const ModelParams& p);

/// Picks the side of zeta_c that the spin mean lies on (sign of delta_mu).
/// zeta == zeta_c resolves to no_spin.
Decision threshold_classify(double zeta, double zeta_c, double delta_mu);

/// epsilon_eta(t) = 1/2 [1 - erf(sqrt(eta) / (2 sqrt 2) sqrt(t / tau1))].
double analytic_error(double t, double tau1, double eta);

/// Inverse of analytic_error in t for a target error in (0, 1/2].
double analytic_time_to_error(double error, double tau1, double eta);

/// Bayesian posterior along a record.
struct PosteriorTrace {
  std::vector<double> times;
  std::vector<double> p_spin;
  std::vector<double> p_no_spin;
  std::vector<double> log_likelihood_spin;     // up to a hypothesis-independent constant
  std::vector<double> log_likelihood_no_spin;
};

/// Sequential two-hypothesis filter. The spin hypothesis propagates a
/// conditioned state driven by the record; the no-spin hypothesis predicts the
/// constant bare reflection. Increment likelihoods are Gaussian with mean
/// eta <c_m + c_m^dagger> dt and variance eta dt, accumulated as log weights.
class BayesFilter {
 public:
  BayesFilter(const ModelParams& p, double dt, double prior_spin = 0.5,
              SmeScheme scheme = SmeScheme::kraus, InitialState initial = InitialState::steady);

  void update(double dY);

  double p_spin() const;
  double p_no_spin() const;
  double log_odds() const { return log_odds_; }
  double log_likelihood_spin() const { return ll_spin_; }
  double log_likelihood_no_spin() const { return ll_no_spin_; }
  const SpinMatrix& spin_state() const { return rho_; }

 private:
  SpinSme sme_;
  SpinMatrix rho_;
  double no_spin_mean_;
  double inv_two_var_;
  double log_odds_;
  double ll_spin_ = 0.0;
  double ll_no_spin_ = 0.0;
};

/// Runs BayesFilter over a record, sampling every `stride` steps (plus t = 0).
PosteriorTrace bayes_filter(const HomodyneRecord& record, const ModelParams& p,
                            double prior_spin = 0.5, std::size_t stride = 1,
                            SmeScheme scheme = SmeScheme::kraus,
                            InitialState initial = InitialState::steady);

/// Default posterior sampling stride, ceil(tau1 / (100 dt)).
std::size_t default_sample_stride(double tau1, double dt);

/// Bayes decision: spin iff p_spin > 1/2.
inline Decision bayes_decision(double p_spin) {
  return p_spin > 0.5 ? Decision::spin : Decision::no_spin;
}

}  // namespace spindet
