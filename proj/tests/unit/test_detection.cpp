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

#include <doctest.h>

#include "approx.hpp"

#include <cmath>

#include "spindet/detection.hpp"
#include "spindet/errors.hpp"

using namespace spindet;

namespace {

ModelParams sim(double eta = 0.5) { return ModelParams::simulation_preset(eta); }

// Misclassification probability of a midpoint threshold between two unit-variance
// Gaussians separated by d, by trapezoid integration of the density tail.
double gaussian_tail(double d) {
  const double a = 0.5 * d;
  const int n = 200000;
  const double hi = a + 40.0;
  const double h = (hi - a) / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double x = a + k * h;
    const double w = (k == 0 || k == n) ? 0.5 : 1.0;
    sum += w * std::exp(-0.5 * x * x);
  }
  return sum * h / std::sqrt(2.0 * M_PI);
}

}  // namespace

TEST_SUITE("detection") {
  TEST_CASE("mean separation grows as eta sqrt(t / tau1)") {
    for (double eta : {0.25, 0.5, 1.0}) {
      const auto p = sim(eta);
      const auto rule = threshold_rule(p);
      const double tau1 = p.tau1();
      CHECK(rule.rate_spin < rule.rate_no_spin);  // absorption dip
      CHECK(std::abs(rule.delta_mu(20 * tau1)) == approx(eta * std::sqrt(20.0)).epsilon(1e-9));
      CHECK(rule.threshold(4 * tau1) ==
            approx(0.5 * (rule.rate_spin + rule.rate_no_spin) * std::sqrt(4 * tau1)));
    }
    // eta = 0.5 at 20 tau1: separation sqrt(5).
    const auto p = sim(0.5);
    CHECK(std::abs(threshold_rule(p).delta_mu(20 * p.tau1())) == approx(std::sqrt(5.0)).epsilon(1e-9));
  }

  TEST_CASE("analytic error against numerical integration") {
    const double tau1 = 2.5e-4;
    CHECK(analytic_error(0.0, tau1, 0.5) == 0.5);
    for (double eta : {0.25, 1.0})
      for (double t : {1.0, 5.0, 20.0, 40.0}) {
        const double d = std::sqrt(eta * t);  // separation over r.m.s. width
        CHECK(analytic_error(t * tau1, tau1, eta) == approx(gaussian_tail(d)).epsilon(1e-7));
      }
    for (double e : {0.3, 1e-2, 1e-4}) {
      const double t = analytic_time_to_error(e, tau1, 0.5);
      CHECK(analytic_error(t, tau1, 0.5) == approx(e).epsilon(1e-10));
    }
    // Error 1e-2 at eta = 0.5 needs about 43 tau1.
    CHECK(analytic_time_to_error(1e-2, tau1, 0.5) / tau1 == approx(43.3).epsilon(0.01));
  }

  TEST_CASE("threshold classification orientation") {
    CHECK(threshold_classify(0.9, 1.0, -0.5) == Decision::spin);
    CHECK(threshold_classify(1.1, 1.0, -0.5) == Decision::no_spin);
    CHECK(threshold_classify(1.1, 1.0, 0.5) == Decision::spin);
    CHECK(threshold_classify(1.0, 1.0, 0.5) == Decision::no_spin);
  }

  TEST_CASE("integrated signal") {
    HomodyneRecord r;
    r.dt = 1e-3;
    r.increments = {1.0, 2.0, 3.0, 4.0};
    const auto s = integrate_signal(r, {1e-3, 3e-3, 4e-3});
    REQUIRE(s.zeta.size() == 3);
    CHECK(s.zeta[0] == approx(1.0 / std::sqrt(1e-3)));
    CHECK(s.zeta[1] == approx(6.0 / std::sqrt(3e-3)));
    CHECK(s.zeta[2] == approx(10.0 / std::sqrt(4e-3)));
    CHECK_THROWS(integrate_signal(r, {0.0}));
    CHECK_THROWS(integrate_signal(r, {5e-3}));
  }

  TEST_CASE("no-spin zeta is Gaussian with variance eta") {
    const auto p = sim(0.5);
    const double dt = SpinSme::max_dt(p);
    const double t = 2 * p.tau1();
    std::vector<double> z;
    for (std::uint64_t s = 0; s < 400; ++s) {
      const auto rec = generate_record(p, t, dt, 1000 + s, Hypothesis::no_spin);
      z.push_back(integrate_signal(rec.record, {rec.record.duration()}).zeta[0]);
    }
    const auto mv = stats::mean_variance(z);
    CHECK(mv.variance == approx(p.eta).epsilon(0.2));
    CHECK(stats::anderson_darling_normal(z).p_value > 1e-3);
  }

  TEST_CASE("Bayes filter starts at the prior and matches a direct likelihood sum") {
    const auto p = sim(0.5);
    const double dt = SpinSme::max_dt(p);
    const auto rec = generate_record(p, 500 * dt, dt, 77, Hypothesis::spin);
    const auto trace = bayes_filter(rec.record, p, 0.3, 100);
    REQUIRE(trace.times.size() == 6);
    CHECK(trace.times[0] == 0.0);
    CHECK(trace.p_spin[0] == approx(0.3).epsilon(1e-14));

    const SpinSme sme(p, dt);
    SpinMatrix rho = initial_state(p, InitialState::steady);
    double ll_spin = 0, ll_none = 0;
    const double var = p.eta * dt;
    const double none = no_spin_mean_rate(p) * dt;
    for (double dy : rec.record.increments) {
      const double m = p.eta * sme.mean_signal(rho) * dt;
      ll_spin += -0.5 * (dy - m) * (dy - m) / var;
      ll_none += -0.5 * (dy - none) * (dy - none) / var;
      sme.step_with_record(rho, dy);
    }
    const double lo = std::log(0.3 / 0.7) + ll_spin - ll_none;
    CHECK(trace.p_spin.back() == approx(1.0 / (1.0 + std::exp(-lo))).epsilon(1e-9));
    CHECK(trace.p_spin.back() + trace.p_no_spin.back() == approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("an uncoupled spin leaves the posterior at the prior") {
    auto p = sim(0.5);
    p.g = 0.0;
    const double dt = 1e-7;
    const auto rec = generate_record(p, 1000 * dt, dt, 3, Hypothesis::no_spin);
    const auto trace = bayes_filter(rec.record, p);
    for (double x : trace.p_spin) CHECK(x == approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("posterior and prior validation") {
    const auto p = sim();
    CHECK_THROWS_AS(BayesFilter(p, SpinSme::max_dt(p), 1.0), ConfigError);
    CHECK(default_sample_stride(1e-3, 1e-6) == 10);
    CHECK(default_sample_stride(1e-3, 1e-3) == 1);
    CHECK(bayes_decision(0.51) == Decision::spin);
    CHECK(bayes_decision(0.5) == Decision::no_spin);
  }
}
