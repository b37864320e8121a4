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

#include "spindet/dynamics.hpp"
#include "spindet/model_params.hpp"

namespace spindet {

/// Spin (x) truncated cavity master equation. Basis ordering is
/// |spin> (x) |n>, n = 0 .. n_fock - 1, so the dimension is 2 n_fock.
class FullModel {
 public:
  explicit FullModel(const ModelParams& p);

  Eigen::Index dim() const { return hamiltonian_.rows(); }
  const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
  const ComplexMatrix& cavity_lowering() const { return a_; }
  const ComplexMatrix& spin_lowering() const { return sm_; }

  /// max(kappa, |Delta_r|, |Delta_s|, g sqrt(n_fock), sqrt(2 kappa1) |beta|).
  double max_rate() const;
  /// 0.01 / kappa.
  double default_dt() const;

  /// d rho / dt.
  ComplexMatrix rhs(const ComplexMatrix& rho) const;

  /// Population of the highest retained Fock level.
  double top_fock_population(const ComplexMatrix& rho) const;

  /// Spin state (x) truncated coherent state |alpha>.
  ComplexMatrix product_state(const SpinMatrix& spin, Complex alpha) const;

  /// Trace-one null vector of the Liouvillian (direct solve; dim <= 48).
  ComplexMatrix steady_state() const;

  Complex expect(const ComplexMatrix& op, const ComplexMatrix& rho) const {
    return (op * rho).trace();
  }

 private:
  ModelParams params_;
  ComplexMatrix hamiltonian_;
  ComplexMatrix a_, sm_;
  std::vector<ComplexMatrix> jumps_;
  ComplexMatrix drift_;  // -i H - 1/2 sum c^dagger c
};

struct FullStepReport {
  double top_fock_population = 0.0;
  bool leakage = false;  // top Fock population > 1e-6
};

/// One RK4 step of the full master equation followed by Hermitian
/// symmetrization and trace renormalization.
/// Throws ConfigError if dt * max_rate > 0.01.
FullStepReport lindblad_step_full(const FullModel& model, ComplexMatrix& rho, double dt);

}  // namespace spindet
