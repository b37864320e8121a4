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

#include <array>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace spindet {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using ComplexVec3 = Eigen::Vector3cd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace constants {
// CODATA 2018 exact / recommended values, SI units.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double planck = 6.62607015e-34;      // J s
inline constexpr double mu0 = 1.25663706212e-6;       // T m / A
inline constexpr double boltzmann = 1.380649e-23;     // J / K
inline constexpr double elementary_charge = 1.602176634e-19;  // C
/// Electron gyromagnetic ratio, rad/(s T); gamma_e / 2pi = 28 GHz/T.
inline constexpr double gamma_e = kTwoPi * 28.0e9;
}  // namespace constants

/// Eigenpairs of a Hermitian matrix: ascending eigenvalues, orthonormal
/// eigenvector columns.
struct EigenDecomposition {
  RealVector values;
  ComplexMatrix vectors;
};

/// max_ij |M_ij|; the reference scale for all relative tolerances here.
double max_abs(const ComplexMatrix& m);

/// max_ij |M_ij - conj(M_ji)|.
double hermitian_residual(const ComplexMatrix& m);

/// Diagonalizes a Hermitian matrix.
///
/// Eigenvectors are phase fixed so that the largest-magnitude component is
/// real and positive (ties broken by the lowest index). Within numerically
/// degenerate clusters the eigenpairs are ordered by the index of that
/// component. Identical input therefore yields bit-identical output.
///
/// Throws std::invalid_argument for non-square input or when the Hermitian
/// residual exceeds 1e-10 * max_abs(m).
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reproducible stream of Gaussian draws.
///
/// Trial streams are derived from a master seed with `derive(master, index)`,
/// which feeds (master, index) through two rounds of splitmix64. The engine is
/// std::mt19937_64, whose output sequence the C++ standard fixes.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  static RngStream derive(std::uint64_t master_seed, std::uint64_t index);
  static std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index);

  /// N(0, 1).
  double standard_normal();
  /// N(0, dt); the Wiener increment over a step dt > 0.
  double gaussian_increment(double dt);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t position() const noexcept { return position_; }

 private:
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace spindet
