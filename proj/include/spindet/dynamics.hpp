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
#include <vector>

#include "spindet/model_params.hpp"
#include "spindet/numerics.hpp"

namespace spindet {

/// Two-level operators on {|0>, |1>} with |0> the lower level:
/// sigma_- = |0><1|, sigma_+ = |1><0|, sigma_z = |1><1| - |0><0|.
using SpinMatrix = Eigen::Matrix2cd;

namespace pauli {
SpinMatrix lowering();
SpinMatrix raising();
SpinMatrix z();
SpinMatrix x();
SpinMatrix y();
}  // namespace pauli

/// Conditioned two-level state.
struct SpinState {
  SpinMatrix rho = SpinMatrix::Zero();
  double time = 0.0;
};

struct EffectiveGenerator {
  SpinMatrix hamiltonian;          // H_eff / hbar
  std::vector<SpinMatrix> jumps;   // sqrt(gamma_p) s-, sqrt(gamma_dec) s-, sqrt(gamma_phi/2) sz
};

/// Spin-only generator after adiabatic elimination of the cavity.
EffectiveGenerator effective_spin_generator(const ModelParams& p);

/// d rho / dt of the unconditioned effective master equation.
SpinMatrix effective_lindblad_rhs(const EffectiveGenerator& gen, const SpinMatrix& rho);

/// Closed-form steady <sigma_->.
Complex steady_sigma_minus(const ModelParams& p);
/// Steady-state density matrix of the effective master equation.
SpinMatrix effective_steady_state(const ModelParams& p);

/// Smallest eigenvalue of a 2x2 Hermitian matrix.
double min_eigenvalue(const SpinMatrix& rho);

/// Warnings for parameters outside the bad-cavity regime (kappa >= 5 g).
std::vector<std::string> effective_model_warnings(const ModelParams& p);

enum class SmeScheme {
  /// Positivity-preserving first-order update rho -> M rho M^dagger + dt sum L rho L^dagger.
  kraus,
  /// Plain Ito Euler-Maruyama on the stochastic master equation.
  euler_maruyama,
};

/// Conditioned evolution of the effective spin model under homodyne detection
/// of c_m = c_out e^{-i theta}.
///
/// Generation mode draws dW and emits dY = eta <c_m + c_m^dagger> dt + sqrt(eta) dW.
/// Filtering mode consumes a recorded dY. Each step renormalizes the trace and
/// symmetrizes rho; a non-finite state or an eigenvalue below -1e-8 throws
/// NumericalError.
class SpinSme {
 public:
  /// Throws ConfigError if eta is outside (0, 1] or dt exceeds max_dt().
  SpinSme(const ModelParams& p, double dt, SmeScheme scheme = SmeScheme::kraus);

  /// Largest step with dt * max(gamma_p, gamma2, g|alpha|, |Delta_s - eps_s|) <= 0.01.
  static double max_dt(const ModelParams& p);

  double dt() const { return dt_; }
  double eta() const { return eta_; }

  /// <c_m + c_m^dagger> in state rho.
  double mean_signal(const SpinMatrix& rho) const;
  /// Mean of dY under the spin hypothesis, eta <c_m + c_m^dagger> dt.
  double mean_increment(const SpinMatrix& rho) const { return eta_ * mean_signal(rho) * dt_; }

  /// Advances rho with Wiener increment dW; returns dY.
  double step_with_noise(SpinMatrix& rho, double dW) const;
  /// Advances rho conditioned on a recorded dY.
  void step_with_record(SpinMatrix& rho, double dY) const;

 private:
  void advance(SpinMatrix& rho, double dY_spin) const;
  void finish(SpinMatrix& rho) const;

  double dt_;
  double eta_;
  SmeScheme scheme_;
  double offset_signal_;   // 2 Re(c0 e^{-i theta})
  SpinMatrix measured_;    // spin part of c_m
  SpinMatrix drift_;       // I + dt (-i H - 1/2 sum L^dagger L), Kraus scheme
  std::vector<SpinMatrix> unmeasured_;  // jumps not resolved by the detector (scaled by sqrt(dt))
  EffectiveGenerator generator_;
};

enum class Hypothesis { spin, no_spin };
enum class InitialState { steady, ground, excited };

/// Measurement increments with the data needed to replay them.
struct HomodyneRecord {
  double dt = 0.0;
  std::vector<double> increments;
  std::uint64_t seed = 0;
  std::uint64_t params_hash = 0;
  Hypothesis hypothesis = Hypothesis::spin;

  double duration() const { return dt * static_cast<double>(increments.size()); }
};

/// Expectation values sampled along a trajectory (empty for no_spin).
struct TrajectoryResult {
  std::vector<double> times;
  std::vector<double> sigma_x, sigma_y, sigma_z;
};

struct GenerateOptions {
  SmeScheme scheme = SmeScheme::kraus;
  InitialState initial = InitialState::steady;
  std::size_t sample_stride = 1;
};

SpinMatrix initial_state(const ModelParams& p, InitialState which);

struct GeneratedRecord {
  HomodyneRecord record;
  TrajectoryResult trajectory;
};

/// Homodyne record of length round(duration / dt) generated from `seed`.
/// The no_spin variant has mean 2 eta Re(c0 e^{-i theta}) dt per step.
GeneratedRecord generate_record(const ModelParams& p, double duration, double dt,
                                std::uint64_t seed, Hypothesis hypothesis,
                                const GenerateOptions& options = {});

/// Mean of dY / dt for the no-spin hypothesis, 2 eta Re(c0 e^{-i theta}).
double no_spin_mean_rate(const ModelParams& p);

}  // namespace spindet
