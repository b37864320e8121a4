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

#include "spindet/full_model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "spindet/errors.hpp"

namespace spindet {

FullModel::FullModel(const ModelParams& p) : params_(p) {
  p.validate(/*full_model=*/true);
  const Eigen::Index n = p.n_fock;
  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  const ComplexMatrix id_cav = ComplexMatrix::Identity(n, n);
  const ComplexMatrix id_spin = ComplexMatrix::Identity(2, 2);
  a_ = kron(id_spin, a);
  sm_ = kron(ComplexMatrix(pauli::lowering()), id_cav);
  const ComplexMatrix sz = kron(ComplexMatrix(pauli::z()), id_cav);
  const ComplexMatrix ad = a_.adjoint();
  const ComplexMatrix sp = sm_.adjoint();
  const Complex i(0.0, 1.0);

  hamiltonian_ = p.delta_r * ad * a_ +
                 i * std::sqrt(2.0 * p.kappa1) * (p.beta * ad - std::conj(p.beta) * a_) +
                 0.5 * p.delta_s * sz + p.g * (sp * a_ + sm_ * ad);
  jumps_ = {std::sqrt(2.0 * p.kappa) * a_, std::sqrt(p.gamma_dec) * sm_,
            std::sqrt(0.5 * p.gamma_phi) * sz};
  drift_ = -i * hamiltonian_;
  for (const auto& c : jumps_) drift_ -= 0.5 * c.adjoint() * c;
}

double FullModel::max_rate() const {
  const auto& p = params_;
  return std::max({p.kappa, std::abs(p.delta_r), std::abs(p.delta_s),
                   p.g * std::sqrt(static_cast<double>(p.n_fock)),
                   std::sqrt(2.0 * p.kappa1) * std::abs(p.beta)});
}

double FullModel::default_dt() const { return 0.01 / params_.kappa; }

ComplexMatrix FullModel::rhs(const ComplexMatrix& rho) const {
  ComplexMatrix out = drift_ * rho;
  out += out.adjoint().eval();
  for (const auto& c : jumps_) out += c * rho * c.adjoint();
  return out;
}

double FullModel::top_fock_population(const ComplexMatrix& rho) const {
  const Eigen::Index n = params_.n_fock;
  return rho(n - 1, n - 1).real() + rho(2 * n - 1, 2 * n - 1).real();
}

ComplexMatrix FullModel::product_state(const SpinMatrix& spin, Complex alpha) const {
  const Eigen::Index n = params_.n_fock;
  Eigen::VectorXcd psi(n);
  psi(0) = 1.0;
  for (Eigen::Index k = 1; k < n; ++k) psi(k) = psi(k - 1) * alpha / std::sqrt(double(k));
  psi.normalize();
  return kron(ComplexMatrix(spin), psi * psi.adjoint());
}

ComplexMatrix FullModel::steady_state() const {
  const Eigen::Index d = dim();
  if (d > 48) throw std::invalid_argument("FullModel::steady_state: dimension above 48");
  const Eigen::Index d2 = d * d;
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  // Column-major vectorization: vec(A X B) = (B^T (x) A) vec(X).
  ComplexMatrix liouvillian = kron(id, drift_) + kron(drift_.conjugate(), id);
  for (const auto& c : jumps_) liouvillian += kron(c.conjugate(), c);
  // Replace the first row by the trace functional.
  liouvillian.row(0).setZero();
  for (Eigen::Index k = 0; k < d; ++k) liouvillian(0, k * d + k) = 1.0;
  Eigen::VectorXcd rhs_vec = Eigen::VectorXcd::Zero(d2);
  rhs_vec(0) = 1.0;
  const Eigen::VectorXcd sol = liouvillian.partialPivLu().solve(rhs_vec);
  ComplexMatrix rho = Eigen::Map<const ComplexMatrix>(sol.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho / rho.trace().real();
}

FullStepReport lindblad_step_full(const FullModel& model, ComplexMatrix& rho, double dt) {
  if (dt * model.max_rate() > 0.01 * (1.0 + 1e-9)) {
    throw ConfigError("dt", fmt::format("dt * max_rate = {:.4g} exceeds 0.01",
                                        dt * model.max_rate()));
  }
  const ComplexMatrix k1 = model.rhs(rho);
  const ComplexMatrix k2 = model.rhs(rho + 0.5 * dt * k1);
  const ComplexMatrix k3 = model.rhs(rho + 0.5 * dt * k2);
  const ComplexMatrix k4 = model.rhs(rho + dt * k3);
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double tr = rho.trace().real();
  if (!std::isfinite(tr) || !(tr > 0.0)) {
    throw NumericalError("lindblad_step_full: non-finite state");
  }
  rho /= tr;
  FullStepReport report;
  report.top_fock_population = model.top_fock_population(rho);
  report.leakage = report.top_fock_population > 1e-6;
  return report;
}

}  // namespace spindet
