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
#include <variant>
#include <vector>

#include "spindet/numerics.hpp"

namespace spindet {

/// Angular-momentum matrices in the |s, m> basis with m descending.
struct SpinOperatorSet {
  double s = 0.0;
  ComplexMatrix x, y, z;

  Eigen::Index dim() const { return z.rows(); }
  /// S . v for a real vector v.
  ComplexMatrix dot(const Vec3& v) const { return v.x() * x + v.y() * y + v.z() * z; }
};

/// Throws std::invalid_argument unless 2s is a non-negative integer.
SpinOperatorSet spin_operators(double s);

/// (S (x) 1_right) and (1_left (x) S) embeddings into a product space.
SpinOperatorSet embed_left(const SpinOperatorSet& ops, Eigen::Index right_dim);
SpinOperatorSet embed_right(Eigen::Index left_dim, const SpinOperatorSet& ops);

/// 15N nitrogen-vacancy centre, S = 1 and I = 1/2. Rates in rad/s.
struct NVParams {
  double zero_field_splitting = kTwoPi * 2.88e9;
  double hyperfine_z = kTwoPi * 3.1e6;
  /// Angle between the applied field and the NV axis, radians.
  double axis_angle = 35.3 * std::numbers::pi / 180.0;
};

/// Bismuth donor in silicon, S = 1/2 and I = 9/2.
struct BiParams {
  double hyperfine = kTwoPi * 1.48e9;
  double nuclear_spin = 4.5;
};

/// H_NV / hbar = D S_Z^2 - gamma_e B0 . S + A_Z I_Z S_Z on |m_S> (x) |m_I>.
/// `b0` is given in the NV frame (Z along the N-V bond), tesla.
ComplexMatrix nv_hamiltonian(const NVParams& p, const Vec3& b0);

/// H_Bi / hbar = A I . S - gamma_e B0 . S on |m_S> (x) |m_I>.
ComplexMatrix bi_hamiltonian(const BiParams& p, const Vec3& b0);

/// Messages for fields outside the range where the model Hamiltonians hold.
std::vector<std::string> nv_field_warnings(double field_magnitude);
std::vector<std::string> bi_field_warnings(const BiParams& p, double field_magnitude);

/// Approximate quantum numbers of a level: (m_S, m_I) for NV, (F, m_F) for Bi.
struct LevelLabel {
  double first = 0.0;
  double second = 0.0;

  bool operator==(const LevelLabel& o) const;
  std::string text(bool hyperfine_multiplet) const;
};

/// A pair of eigenstates with E_upper > E_lower.
struct TransitionPair {
  Eigen::Index lower = 0;
  Eigen::Index upper = 0;
  double omega = 0.0;    // rad/s
  ComplexVec3 element;   // <lower| S |upper>
};

/// Every ordered pair (lower, upper) with a strictly positive frequency.
std::vector<TransitionPair> transition_elements(const EigenDecomposition& eig,
                                                const SpinOperatorSet& electron);
std::vector<TransitionPair> transition_elements(const ComplexMatrix& h,
                                                const SpinOperatorSet& electron);
TransitionPair transition_between(const EigenDecomposition& eig, const SpinOperatorSet& electron,
                                  Eigen::Index from, Eigen::Index to);

/// g = | gamma_e deltaB . <0|S|1> |, rad/s.
double coupling_constant(const TransitionPair& pair, const Vec3& delta_b);

/// A spin system with a field-dependent Hamiltonian and a labeling rule.
///
/// Fields are signed magnitudes along a fixed direction: the lab z axis for
/// Bi, and the direction at `axis_angle` to the NV axis for NV.
class SpinSystemModel {
 public:
  static SpinSystemModel nv(const NVParams& p = {});
  static SpinSystemModel bi(const BiParams& p = {});

  bool is_nv() const { return std::holds_alternative<NVParams>(params_); }
  Eigen::Index dim() const { return electron_.dim(); }
  const SpinOperatorSet& electron() const { return electron_; }
  const std::variant<NVParams, BiParams>& params() const { return params_; }

  Vec3 field_vector(double field) const;
  ComplexMatrix hamiltonian(double field) const;
  std::vector<std::string> field_warnings(double field) const;

  /// Eigendecomposition. Below 1 nT the eigenvectors come from a 1 nT field so
  /// degenerate zero-field levels carry definite quantum numbers; eigenvalues
  /// are the exact expectation values of the true Hamiltonian.
  EigenDecomposition diagonalize(double field) const;
  std::vector<LevelLabel> labels(const EigenDecomposition& eig) const;
  Eigen::Index find_level(const std::vector<LevelLabel>& labels, const LevelLabel& which) const;

  /// omega(to) - omega(from) at `field`, rad/s.
  double transition_frequency(const LevelLabel& from, const LevelLabel& to, double field) const;
  TransitionPair transition(const LevelLabel& from, const LevelLabel& to, double field) const;

 private:
  SpinSystemModel(std::variant<NVParams, BiParams> p, SpinOperatorSet electron,
                  SpinOperatorSet nuclear);

  std::variant<NVParams, BiParams> params_;
  SpinOperatorSet electron_;
  SpinOperatorSet nuclear_;
};

/// Bracketed root of transition_frequency(from, to, B) = omega_target on
/// [field_lo, field_hi]. Result is within 2 pi x 1 kHz of the target.
/// Throws NumericalError when the bracket holds no sign change.
double resonance_field_search(const SpinSystemModel& model, const LevelLabel& from,
                              const LevelLabel& to, double omega_target, double field_lo,
                              double field_hi);

/// Levels followed across a field sweep by maximum eigenvector overlap.
struct LevelSweep {
  std::vector<double> fields;
  std::vector<LevelLabel> labels;  // quantum numbers at the first field
  Eigen::MatrixXd energies;        // rad/s, rows = fields, cols = tracked levels
};

LevelSweep sweep_levels(const SpinSystemModel& model, const std::vector<double>& fields);

}  // namespace spindet
