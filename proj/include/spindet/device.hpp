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

#include <string>
#include <vector>

#include "spindet/numerics.hpp"

namespace spindet {

/// Lumped-element resonator. kappa is the field (amplitude) decay rate.
struct ResonatorParams {
  double omega_r = 0.0;    // rad/s
  double impedance = 0.0;  // ohm
  double kappa = 0.0;      // 1/s
  double kappa1 = 0.0;     // 1/s, coupler share of kappa

  /// Q = omega_r / (2 kappa).
  double quality_factor() const { return omega_r / (2.0 * kappa); }
  /// Throws ConfigError on kappa1 > kappa or non-positive rates.
  void validate() const;
};

/// Superconducting constriction: wire along z, rectangular w x t cross-section
/// centred on the origin (x across the width, y across the thickness).
struct NanowireGeometry {
  double width = 20e-9;               // m
  double thickness = 10e-9;           // m
  double length = 250e-9;             // m
  double sheet_resistance = 4.5;      // ohm per square, normal state
  double gap = 230e-6 * constants::elementary_charge;  // J
  double temperature = 10e-3;         // K

  void validate() const;
  /// Fabrication-limit warnings (width < 15 nm, thickness < 10 nm).
  std::vector<std::string> warnings() const;
};

/// delta_i = omega_r sqrt(hbar / (2 Z_r)), amperes.
double zero_point_current(const ResonatorParams& r);

/// Field of an infinite straight conductor with uniform current density over
/// the cross-section, evaluated in closed form. Returns (Bx, By, 0) in tesla.
/// Throws std::invalid_argument when (x, y) lies inside or on the conductor.
Vec3 rect_wire_field(const NanowireGeometry& geom, double current, double x, double y);

/// Point a distance `gap` below the bottom face of the wire, on its axis.
inline std::pair<double, double> point_below_wire(const NanowireGeometry& geom, double gap) {
  return {0.0, -(0.5 * geom.thickness + gap)};
}

/// L_k = (l / w) (R_sq / 2 pi^2) (h / Delta) / tanh(Delta / 2 k_B T), henry.
double kinetic_inductance(const NanowireGeometry& geom);

/// gamma_p = 2 g^2 kappa / (kappa^2 + detuning^2), 1/s.
double purcell_rate(double g, double kappa, double detuning_rs);

/// Drive amplitude |alpha| that saturates the spin: sqrt(gamma1 gamma2) / (2 g).
double saturation_amplitude(double g, double gamma1, double gamma2);

struct MeasurementTime {
  double gamma_p = 0.0;
  double gamma2 = 0.0;
  double tau1 = 0.0;     // s, unit SNR at eta = 1
  double tau_eta = 0.0;  // s, tau1 / eta
};

/// Resonant, saturated regime: tau1 = kappa^2 gamma2 / g^4 with
/// gamma2 = gamma_p / 2 + gamma_phi and gamma_p = 2 g^2 / kappa.
MeasurementTime measurement_time_tau1(double g, double kappa, double gamma_phi, double eta = 1.0);

/// eta = 1 / (1 + N).
double efficiency_from_noise_photons(double noise_photons);

/// N = k_B T_N / (hbar omega).
double noise_photons_from_temperature(double noise_temperature, double omega);

}  // namespace spindet
