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

#include "spindet/detection.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <fmt/format.h>

#include "spindet/errors.hpp"

namespace spindet {

IntegratedSignal integrate_signal(const HomodyneRecord& record,
                                  const std::vector<double>& sample_times) {
  if (record.increments.empty()) {
    throw std::invalid_argument("integrate_signal: empty record");
  }
  IntegratedSignal out;
  std::vector<std::size_t> steps;
  for (double t : sample_times) {
    const auto k = static_cast<long long>(std::llround(t / record.dt));
    if (k <= 0) throw std::invalid_argument("integrate_signal: t = 0 is singular");
    if (static_cast<std::size_t>(k) > record.increments.size()) {
      throw std::invalid_argument(
          fmt::format("integrate_signal: t = {:.4g} s exceeds the record", t));
    }
    steps.push_back(static_cast<std::size_t>(k));
  }
  // Prefix sums once, then read off each sample.
  std::vector<double> prefix(record.increments.size() + 1, 0.0);
  for (std::size_t k = 0; k < record.increments.size(); ++k) {
    prefix[k + 1] = prefix[k] + record.increments[k];
  }
  for (std::size_t k : steps) {
    const double t = static_cast<double>(k) * record.dt;
    out.times.push_back(t);
    out.zeta.push_back(prefix[k] / std::sqrt(t));
  }
  return out;
}

double ThresholdRule::delta_mu(double t) const { return (rate_spin - rate_no_spin) * std::sqrt(t); }

double ThresholdRule::threshold(double t) const {
  return 0.5 * (rate_spin + rate_no_spin) * std::sqrt(t);
}

ThresholdRule threshold_rule(const ModelParams& p) {
  const Complex lo_phase = std::polar(1.0, -p.theta);
  ThresholdRule rule;
  rule.rate_no_spin = no_spin_mean_rate(p);
  const Complex spin_part = p.reflection_spin_coefficient() * lo_phase * steady_sigma_minus(p);
  rule.rate_spin = rule.rate_no_spin + 2.0 * p.eta * spin_part.real();
  return rule;
}

Decision threshold_classify(double zeta, double zeta_c, double delta_mu) {
  if (zeta == zeta_c) return Decision::no_spin;
  const bool below = zeta < zeta_c;
  return (delta_mu < 0.0) == below ? Decision::spin : Decision::no_spin;
}

double analytic_error(double t, double tau1, double eta) {
  if (t < 0.0) throw std::invalid_argument("analytic_error: t must be non-negative");
  return 0.5 * std::erfc(std::sqrt(eta) / (2.0 * std::sqrt(2.0)) * std::sqrt(t / tau1));
}

double analytic_time_to_error(double error, double tau1, double eta) {
  if (!(error > 0.0 && error <= 0.5)) {
    throw std::invalid_argument("analytic_time_to_error: error must lie in (0, 1/2]");
  }
  const double x = boost::math::erfc_inv(2.0 * error);
  const double root = 2.0 * std::sqrt(2.0) * x / std::sqrt(eta);
  return tau1 * root * root;
}

BayesFilter::BayesFilter(const ModelParams& p, double dt, double prior_spin, SmeScheme scheme,
                         InitialState initial)
    : sme_(p, dt, scheme),
      rho_(initial_state(p, initial)),
      no_spin_mean_(no_spin_mean_rate(p) * dt),
      inv_two_var_(1.0 / (2.0 * p.eta * dt)) {
  if (!(prior_spin > 0.0 && prior_spin < 1.0)) {
    throw ConfigError("prior", "spin prior must lie strictly between 0 and 1");
  }
  log_odds_ = std::log(prior_spin) - std::log1p(-prior_spin);
}

void BayesFilter::update(double dY) {
  const double mean_spin = sme_.mean_increment(rho_);
  const double r_spin = dY - mean_spin;
  const double r_none = dY - no_spin_mean_;
  const double ls = -r_spin * r_spin * inv_two_var_;
  const double ln = -r_none * r_none * inv_two_var_;
  if (!std::isfinite(ls) || !std::isfinite(ln)) {
    throw NumericalError(fmt::format(
        "BayesFilter: non-finite log-likelihood (dY = {:.6g}, spin mean = {:.6g})", dY,
        mean_spin));
  }
  ll_spin_ += ls;
  ll_no_spin_ += ln;
  log_odds_ += ls - ln;
  sme_.step_with_record(rho_, dY);
}

double BayesFilter::p_spin() const { return 1.0 / (1.0 + std::exp(-log_odds_)); }
double BayesFilter::p_no_spin() const { return 1.0 / (1.0 + std::exp(log_odds_)); }

PosteriorTrace bayes_filter(const HomodyneRecord& record, const ModelParams& p, double prior_spin,
                            std::size_t stride, SmeScheme scheme, InitialState initial) {
  stride = std::max<std::size_t>(1, stride);
  BayesFilter filter(p, record.dt, prior_spin, scheme, initial);
  PosteriorTrace trace;
  auto sample = [&](double t) {
    trace.times.push_back(t);
    trace.p_spin.push_back(filter.p_spin());
    trace.p_no_spin.push_back(filter.p_no_spin());
    trace.log_likelihood_spin.push_back(filter.log_likelihood_spin());
    trace.log_likelihood_no_spin.push_back(filter.log_likelihood_no_spin());
  };
  sample(0.0);
  for (std::size_t k = 0; k < record.increments.size(); ++k) {
    filter.update(record.increments[k]);
    if ((k + 1) % stride == 0) sample(static_cast<double>(k + 1) * record.dt);
  }
  return trace;
}

std::size_t default_sample_stride(double tau1, double dt) {
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(tau1 / (100.0 * dt) - 1e-9)));
}

}  // namespace spindet
