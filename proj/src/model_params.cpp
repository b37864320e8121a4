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

#include "spindet/model_params.hpp"

#include <bit>
#include <cmath>

#include "spindet/errors.hpp"

namespace spindet {

void ModelParams::validate(bool full_model) const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(g) || g < 0.0) throw ConfigError("g", "must be finite and non-negative");
  if (!finite(kappa) || !(kappa > 0.0)) throw ConfigError("kappa", "must be positive");
  if (!finite(kappa1) || kappa1 < 0.0 || kappa1 > kappa) {
    throw ConfigError("kappa1", "must satisfy 0 <= kappa1 <= kappa");
  }
  if (!finite(gamma_phi) || gamma_phi < 0.0) throw ConfigError("gamma_phi", "must be >= 0");
  if (!finite(gamma_dec) || gamma_dec < 0.0) throw ConfigError("gamma_dec", "must be >= 0");
  if (!finite(delta_r) || !finite(delta_s)) throw ConfigError("delta", "must be finite");
  if (!finite(beta.real()) || !finite(beta.imag())) throw ConfigError("beta", "must be finite");
  if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError("eta", "must lie in (0, 1]");
  if (!finite(theta)) throw ConfigError("theta", "must be finite");
  if (full_model && n_fock < 4) throw ConfigError("n_fock", "must be >= 4 for the full model");
}

double ModelParams::purcell_rate() const {
  const double d = detuning_rs();
  return 2.0 * g * g * kappa / (kappa * kappa + d * d);
}

double ModelParams::ac_zeeman_shift() const {
  const double d = detuning_rs();
  return d * g * g / (kappa * kappa + d * d);
}

Complex ModelParams::gamma2_complex() const {
  return {gamma2(), -(delta_s - ac_zeeman_shift())};
}

Complex ModelParams::steady_alpha() const {
  return std::sqrt(2.0 * kappa1) * beta / Complex(kappa, delta_r);
}

double ModelParams::saturation_amplitude() const {
  return std::sqrt(gamma1() * gamma2()) / (2.0 * g);
}

void ModelParams::set_saturating_drive() {
  beta = saturation_amplitude() * Complex(kappa, delta_r) / std::sqrt(2.0 * kappa1);
}

Complex ModelParams::reflection_offset() const {
  return (2.0 * kappa1 / Complex(kappa, delta_r) - 1.0) * beta;
}

Complex ModelParams::reflection_spin_coefficient() const {
  return Complex(0.0, -std::sqrt(2.0 * kappa1) * g) / Complex(kappa, detuning_rs());
}

double ModelParams::tau1() const {
  const double g2 = g * g;
  return kappa * kappa * gamma2() / (g2 * g2);
}

std::uint64_t ModelParams::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
      h ^= (word >> (8 * i)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  for (double v : {g, kappa, kappa1, gamma_phi, gamma_dec, delta_r, delta_s, beta.real(),
                   beta.imag(), eta, theta}) {
    mix(std::bit_cast<std::uint64_t>(v));
  }
  mix(static_cast<std::uint64_t>(n_fock));
  return h;
}

ModelParams ModelParams::simulation_preset(double eta) {
  ModelParams p;
  p.g = kTwoPi * 10e3;
  p.kappa = 4.6e5;
  p.kappa1 = 4.6e5;
  p.gamma_phi = 1e4;
  p.eta = eta;
  p.set_saturating_drive();
  return p;
}

}  // namespace spindet
