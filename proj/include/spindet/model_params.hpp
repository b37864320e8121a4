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

#include "spindet/numerics.hpp"

namespace spindet {

/// Reduced spin + cavity parameter set. All frequencies and rates are angular
/// (rad/s or 1/s); kappa is the cavity field decay rate.
struct ModelParams {
  double g = 0.0;
  double kappa = 0.0;
  double kappa1 = 0.0;
  double gamma_phi = 0.0;
  double gamma_dec = 0.0;
  double delta_r = 0.0;
  double delta_s = 0.0;
  Complex beta{0.0, 0.0};  // drive, sqrt(photons / s)
  double eta = 1.0;
  double theta = 0.0;  // local-oscillator phase, rad
  int n_fock = 8;

  /// Throws ConfigError naming the first violated constraint.
  void validate(bool full_model = false) const;

  double detuning_rs() const { return delta_r - delta_s; }
  /// gamma_p = 2 g^2 kappa / (kappa^2 + Delta_rs^2).
  double purcell_rate() const;
  /// epsilon_s = Delta_rs g^2 / (kappa^2 + Delta_rs^2).
  double ac_zeeman_shift() const;
  double gamma1() const { return gamma_dec + purcell_rate(); }
  /// gamma1 / 2 + gamma_phi.
  double gamma2() const { return 0.5 * gamma1() + gamma_phi; }
  /// gamma2 - i (Delta_s - epsilon_s).
  Complex gamma2_complex() const;

  /// alpha = sqrt(2 kappa1) beta / (kappa + i Delta_r).
  Complex steady_alpha() const;
  /// |alpha|_sat = sqrt(gamma1 gamma2) / (2 g).
  double saturation_amplitude() const;
  /// Sets beta so that alpha is real, positive and equal to |alpha|_sat.
  void set_saturating_drive();

  /// Scalar part of the reflected field, (2 kappa1 / (kappa + i Delta_r) - 1) beta.
  Complex reflection_offset() const;
  /// Coefficient of sigma_- in the reflected field, -i sqrt(2 kappa1) g / (kappa + i Delta_rs).
  Complex reflection_spin_coefficient() const;

  /// kappa^2 gamma2 / g^4.
  double tau1() const;

  /// FNV-1a digest of the IEEE bit patterns of every field.
  std::uint64_t digest() const;

  /// g = 2 pi x 10 kHz, kappa = kappa1 = 4.6e5 /s, gamma_phi = 1e4 /s,
  /// resonant, saturating drive.
  static ModelParams simulation_preset(double eta = 0.5);
};

}  // namespace spindet
