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

#include "spindet/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "spindet/errors.hpp"

namespace spindet {

namespace pauli {
SpinMatrix lowering() {
  SpinMatrix m = SpinMatrix::Zero();
  m(0, 1) = 1.0;
  return m;
}
SpinMatrix raising() { return lowering().adjoint(); }
SpinMatrix z() {
  SpinMatrix m = SpinMatrix::Zero();
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}
SpinMatrix x() { return raising() + lowering(); }
SpinMatrix y() { return Complex(0.0, -1.0) * raising() + Complex(0.0, 1.0) * lowering(); }
}  // namespace pauli

EffectiveGenerator effective_spin_generator(const ModelParams& p) {
  const Complex alpha = p.steady_alpha();
  const SpinMatrix sm = pauli::lowering();
  const SpinMatrix sp = pauli::raising();
  EffectiveGenerator gen;
  gen.hamiltonian = 0.5 * p.delta_s * pauli::z() + p.g * (alpha * sp + std::conj(alpha) * sm) -
                    p.ac_zeeman_shift() * sp * sm;
  gen.jumps = {std::sqrt(p.purcell_rate()) * sm, std::sqrt(p.gamma_dec) * sm,
               std::sqrt(0.5 * p.gamma_phi) * pauli::z()};
  return gen;
}

SpinMatrix effective_lindblad_rhs(const EffectiveGenerator& gen, const SpinMatrix& rho) {
  const Complex minus_i(0.0, -1.0);
  SpinMatrix out = minus_i * (gen.hamiltonian * rho - rho * gen.hamiltonian);
  for (const auto& c : gen.jumps) {
    const SpinMatrix cdc = c.adjoint() * c;
    out += c * rho * c.adjoint() - 0.5 * (cdc * rho + rho * cdc);
  }
  return out;
}

namespace {

struct BlochSteady {
  Complex sigma_minus;
  double sigma_z;
};

BlochSteady bloch_steady(const ModelParams& p) {
  const Complex alpha = p.steady_alpha();
  const double gamma1 = p.gamma1();
  // Decay coefficient of <sigma_-> under H = +(Delta_s - eps_s)/2 sigma_z is
  // gamma2 + i(Delta_s - eps_s), the conjugate of gamma2_complex().
  const Complex gamma2 = p.gamma2_complex();
  const double denom =
      4.0 * p.g * p.g * std::norm(alpha) * gamma2.real() + gamma1 * std::norm(gamma2);
  if (!(denom > 0.0)) return {Complex(0.0, 0.0), -1.0};
  const Complex sm = Complex(0.0, -1.0) * p.g * alpha * gamma1 * gamma2 / denom;
  return {sm, -gamma1 * std::norm(gamma2) / denom};
}

}  // namespace

Complex steady_sigma_minus(const ModelParams& p) { return bloch_steady(p).sigma_minus; }

SpinMatrix effective_steady_state(const ModelParams& p) {
  const auto s = bloch_steady(p);
  SpinMatrix rho;
  rho(0, 0) = 0.5 * (1.0 - s.sigma_z);
  rho(1, 1) = 0.5 * (1.0 + s.sigma_z);
  rho(1, 0) = s.sigma_minus;  // <sigma_-> = Tr(|0><1| rho) = rho_10
  rho(0, 1) = std::conj(s.sigma_minus);
  return rho;
}

double min_eigenvalue(const SpinMatrix& rho) {
  const double a = rho(0, 0).real();
  const double d = rho(1, 1).real();
  const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(rho(0, 1)));
  return 0.5 * (a + d) - half_gap;
}

std::vector<std::string> effective_model_warnings(const ModelParams& p) {
  std::vector<std::string> out;
  if (p.kappa < 5.0 * p.g) {
    out.push_back(fmt::format(
        "kappa / g = {:.3g} < 5: adiabatic elimination of the cavity is questionable",
        p.kappa / p.g));
  }
  return out;
}

double SpinSme::max_dt(const ModelParams& p) {
  const double rate =
      std::max({p.purcell_rate(), p.gamma2(), p.g * std::abs(p.steady_alpha()),
                std::abs(p.delta_s - p.ac_zeeman_shift())});
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return 0.01 / rate;
}

SpinSme::SpinSme(const ModelParams& p, double dt, SmeScheme scheme)
    : dt_(dt), eta_(p.eta), scheme_(scheme), generator_(effective_spin_generator(p)) {
  p.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive and finite");
  const double limit = max_dt(p);
  if (dt > limit * (1.0 + 1e-9)) {
    throw ConfigError("dt", fmt::format("step {:.4g} s exceeds the stability bound {:.4g} s "
                                        "(0.01 / max rate)",
                                        dt, limit));
  }
  const Complex lo_phase = std::polar(1.0, -p.theta);
  offset_signal_ = 2.0 * (p.reflection_offset() * lo_phase).real();
  const Complex spin_coeff = p.reflection_spin_coefficient() * lo_phase;
  measured_ = spin_coeff * pauli::lowering();

  SpinMatrix decay_sum = SpinMatrix::Zero();
  for (const auto& c : generator_.jumps) decay_sum += c.adjoint() * c;
  drift_ = SpinMatrix::Identity() +
           dt * (Complex(0.0, -1.0) * generator_.hamiltonian - 0.5 * decay_sum);

  // Purcell emission that escapes through kappa_L is never detected.
  const double hidden_purcell = std::max(0.0, p.purcell_rate() - std::norm(spin_coeff));
  const double sqrt_dt = std::sqrt(dt);
  for (const auto& c : {SpinMatrix(std::sqrt(hidden_purcell) * pauli::lowering()),
                        generator_.jumps[1], generator_.jumps[2]}) {
    if (c.cwiseAbs().maxCoeff() > 0.0) unmeasured_.push_back(sqrt_dt * c);
  }
  // The (1 - eta) share of the measured channel.
  if (eta_ < 1.0) unmeasured_.push_back(std::sqrt((1.0 - eta_) * dt) * measured_);
}

double SpinSme::mean_signal(const SpinMatrix& rho) const {
  return offset_signal_ + 2.0 * (measured_ * rho).trace().real();
}

double SpinSme::step_with_noise(SpinMatrix& rho, double dW) const {
  const double spin_signal = 2.0 * (measured_ * rho).trace().real();
  const double dY_spin = eta_ * spin_signal * dt_ + std::sqrt(eta_) * dW;
  advance(rho, dY_spin);
  return dY_spin + eta_ * offset_signal_ * dt_;
}

void SpinSme::step_with_record(SpinMatrix& rho, double dY) const {
  advance(rho, dY - eta_ * offset_signal_ * dt_);
}

void SpinSme::advance(SpinMatrix& rho, double dY_spin) const {
  if (scheme_ == SmeScheme::kraus) {
    const SpinMatrix m = drift_ + dY_spin * measured_;
    SpinMatrix next = m * rho * m.adjoint();
    for (const auto& c : unmeasured_) next += c * rho * c.adjoint();
    rho = next;
  } else {
    const SpinMatrix c_rho = measured_ * rho;
    const double spin_signal = 2.0 * c_rho.trace().real();
    const double sqrt_eta_dW = dY_spin - eta_ * spin_signal * dt_;
    const SpinMatrix backaction = c_rho + c_rho.adjoint() - spin_signal * rho;
    rho += dt_ * effective_lindblad_rhs(generator_, rho) + sqrt_eta_dW * backaction;
  }
  finish(rho);
}

void SpinSme::finish(SpinMatrix& rho) const {
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (!std::isfinite(tr) || !(tr > 0.0) || !rho.allFinite()) {
    throw NumericalError("SME step produced a non-finite state; reduce dt");
  }
  rho /= tr;
  const double lowest = min_eigenvalue(rho);
  if (lowest < -1e-8) {
    throw NumericalError(
        fmt::format("SME step lost positivity (min eigenvalue {:.3e}); reduce dt", lowest));
  }
}

double no_spin_mean_rate(const ModelParams& p) {
  return 2.0 * p.eta * (p.reflection_offset() * std::polar(1.0, -p.theta)).real();
}

SpinMatrix initial_state(const ModelParams& p, InitialState which) {
  SpinMatrix rho = SpinMatrix::Zero();
  switch (which) {
    case InitialState::steady:
      return effective_steady_state(p);
    case InitialState::ground:
      rho(0, 0) = 1.0;
      return rho;
    case InitialState::excited:
      rho(1, 1) = 1.0;
      return rho;
  }
  return rho;
}

GeneratedRecord generate_record(const ModelParams& p, double duration, double dt,
                                std::uint64_t seed, Hypothesis hypothesis,
                                const GenerateOptions& options) {
  p.validate();
  if (!(duration >= 0.0)) throw ConfigError("duration", "must be non-negative");
  if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(duration / dt));
  const std::size_t stride = std::max<std::size_t>(1, options.sample_stride);

  GeneratedRecord out;
  out.record.dt = dt;
  out.record.seed = seed;
  out.record.params_hash = p.digest();
  out.record.hypothesis = hypothesis;
  out.record.increments.reserve(steps);

  RngStream rng(seed);
  const double sqrt_eta = std::sqrt(p.eta);
  if (hypothesis == Hypothesis::no_spin) {
    const double mean = no_spin_mean_rate(p) * dt;
    for (std::size_t k = 0; k < steps; ++k) {
      out.record.increments.push_back(mean + sqrt_eta * rng.gaussian_increment(dt));
    }
    return out;
  }

  const SpinSme sme(p, dt, options.scheme);
  SpinMatrix rho = initial_state(p, options.initial);
  const SpinMatrix sx = pauli::x(), sy = pauli::y(), sz = pauli::z();
  auto& traj = out.trajectory;
  for (std::size_t k = 0; k < steps; ++k) {
    out.record.increments.push_back(sme.step_with_noise(rho, rng.gaussian_increment(dt)));
    if ((k + 1) % stride == 0) {
      traj.times.push_back(static_cast<double>(k + 1) * dt);
      traj.sigma_x.push_back((sx * rho).trace().real());
      traj.sigma_y.push_back((sy * rho).trace().real());
      traj.sigma_z.push_back((sz * rho).trace().real());
    }
  }
  return out;
}

}  // namespace spindet
