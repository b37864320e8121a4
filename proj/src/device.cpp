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

#include "spindet/device.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "spindet/errors.hpp"

namespace spindet {

void ResonatorParams::validate() const {
  if (!(omega_r > 0.0)) throw ConfigError("omega_r", "must be positive");
  if (!(impedance > 0.0)) throw ConfigError("impedance", "must be positive");
  if (!(kappa > 0.0)) throw ConfigError("kappa", "must be positive");
  if (!(kappa1 >= 0.0) || kappa1 > kappa) {
    throw ConfigError("kappa1", "must satisfy 0 <= kappa1 <= kappa");
  }
}

void NanowireGeometry::validate() const {
  if (!(width > 0.0)) throw ConfigError("width", "must be positive");
  if (!(thickness > 0.0)) throw ConfigError("thickness", "must be positive");
  if (!(length > 0.0)) throw ConfigError("length", "must be positive");
  if (!(sheet_resistance >= 0.0)) throw ConfigError("sheet_resistance", "must be non-negative");
  if (!(gap > 0.0)) throw ConfigError("gap", "must be positive");
  if (!(temperature > 0.0)) throw ConfigError("temperature", "must be positive");
}

std::vector<std::string> NanowireGeometry::warnings() const {
  std::vector<std::string> out;
  if (width < 15e-9) {
    out.push_back(fmt::format("nanowire width {:.3g} nm is below the ~15 nm lithography limit",
                              width * 1e9));
  }
  if (thickness < 10e-9) {
    out.push_back(fmt::format(
        "nanowire thickness {:.3g} nm risks a superconductor-insulator transition",
        thickness * 1e9));
  }
  return out;
}

double zero_point_current(const ResonatorParams& r) {
  return r.omega_r * std::sqrt(constants::hbar / (2.0 * r.impedance));
}

namespace {

// Antiderivatives of u / (u^2 + v^2) and v / (u^2 + v^2) over du dv.
// Terms depending on only one variable are dropped; they cancel in the
// four-corner sum.
double integral_u(double u, double v) {
  const double r2 = u * u + v * v;
  const double log_term = r2 > 0.0 ? 0.5 * v * std::log(r2) : 0.0;
  const double atan_term = u != 0.0 ? u * std::atan(v / u) : 0.0;
  return log_term + atan_term;
}

double integral_v(double u, double v) { return integral_u(v, u); }

}  // namespace

Vec3 rect_wire_field(const NanowireGeometry& geom, double current, double x, double y) {
  const double hw = 0.5 * geom.width;
  const double ht = 0.5 * geom.thickness;
  if (std::abs(x) <= hw && std::abs(y) <= ht) {
    throw std::invalid_argument(
        fmt::format("rect_wire_field: point ({:.4g}, {:.4g}) m is inside the conductor", x, y));
  }
  // Work in units of the larger cross-section dimension.
  const double scale = std::max(geom.width, geom.thickness);
  const double xs = x / scale, ys = y / scale, a = hw / scale, b = ht / scale;

  // Integral over x' in [-a, a], y' in [-b, b] of f(x - x', y - y').
  auto corners = [&](double (*f)(double, double)) {
    return f(xs + a, ys + b) - f(xs - a, ys + b) - f(xs + a, ys - b) + f(xs - a, ys - b);
  };
  const double iu = corners(integral_u);  // integral of (x - x') / rho^2
  const double iv = corners(integral_v);  // integral of (y - y') / rho^2

  // B = mu0 J / (2 pi) * integral of z_hat x rho / rho^2, with J = I / (w t).
  // The scaled area element contributes scale^2 and 1/rho contributes 1/scale.
  const double prefactor =
      constants::mu0 * current / (kTwoPi * geom.width * geom.thickness) * scale;
  return Vec3(-prefactor * iv, prefactor * iu, 0.0);
}

double kinetic_inductance(const NanowireGeometry& geom) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double thermal =
      std::tanh(geom.gap / (2.0 * constants::boltzmann * geom.temperature));
  return (geom.length / geom.width) * (geom.sheet_resistance / (2.0 * pi2)) *
         (constants::planck / geom.gap) / thermal;
}

double purcell_rate(double g, double kappa, double detuning_rs) {
  if (!(kappa > 0.0)) throw std::invalid_argument("purcell_rate: kappa must be positive");
  return 2.0 * g * g * kappa / (kappa * kappa + detuning_rs * detuning_rs);
}

double saturation_amplitude(double g, double gamma1, double gamma2) {
  return std::sqrt(gamma1 * gamma2) / (2.0 * g);
}

MeasurementTime measurement_time_tau1(double g, double kappa, double gamma_phi, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::invalid_argument("measurement_time_tau1: eta must lie in (0, 1]");
  }
  MeasurementTime out;
  out.gamma_p = purcell_rate(g, kappa, 0.0);
  out.gamma2 = 0.5 * out.gamma_p + gamma_phi;
  const double g2 = g * g;
  out.tau1 = kappa * kappa * out.gamma2 / (g2 * g2);
  out.tau_eta = out.tau1 / eta;
  return out;
}

double efficiency_from_noise_photons(double noise_photons) {
  if (!(noise_photons >= 0.0)) {
    throw std::invalid_argument("efficiency_from_noise_photons: N must be non-negative");
  }
  return 1.0 / (1.0 + noise_photons);
}

double noise_photons_from_temperature(double noise_temperature, double omega) {
  return constants::boltzmann * noise_temperature / (constants::hbar * omega);
}

}  // namespace spindet
