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

#include "spindet/numerics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace spindet {

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_residual(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("hermitian_residual: matrix is not square");
  }
  return m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

Eigen::Index dominant_index(const Eigen::VectorXcd& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // Components within rounding of each other count as tied; lowest index wins.
    const double a = std::abs(v(i));
    if (a > best_abs * (1.0 + 1e-12)) {
      best = i;
      best_abs = a;
    }
  }
  return best;
}

}  // namespace

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << "hermitian_eig: expected a square matrix, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
  const double scale = max_abs(m);
  const double asym = hermitian_residual(m);
  if (asym > 1e-10 * scale) {
    std::ostringstream msg;
    msg << "hermitian_eig: matrix is not Hermitian (max |M - M^dagger| = " << asym
        << ", max |M| = " << scale << ")";
    throw std::invalid_argument(msg.str());
  }
  const auto n = m.rows();
  EigenDecomposition out;
  if (n == 0) return out;

  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  RealVector values = solver.eigenvalues();
  ComplexMatrix vectors = solver.eigenvectors();

  std::vector<Eigen::Index> dominant(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXcd v = vectors.col(k);
    const Eigen::Index j = dominant_index(v);
    const Complex phase = std::conj(v(j)) / std::abs(v(j));
    v *= phase;
    v(j) = Complex(v(j).real(), 0.0);
    vectors.col(k) = v;
    dominant[k] = j;
  }

  // Reorder within degenerate clusters by the dominant component index.
  const double value_scale = std::max(values.cwiseAbs().maxCoeff(), scale);
  const double cluster_tol = 1e-11 * value_scale;
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && values(end) - values(end - 1) <= cluster_tol) ++end;
    std::stable_sort(order.begin() + begin, order.begin() + end,
                     [&](Eigen::Index a, Eigen::Index b) { return dominant[a] < dominant[b]; });
    begin = end;
  }
  out.values = values;  // values stay ascending; cluster members differ by < cluster_tol
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) out.vectors.col(k) = vectors.col(order[k]);
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RngStream::derive_seed(std::uint64_t master_seed, std::uint64_t index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

RngStream RngStream::derive(std::uint64_t master_seed, std::uint64_t index) {
  return RngStream(derive_seed(master_seed, index));
}

double RngStream::standard_normal() {
  ++position_;
  return normal_(engine_);
}

double RngStream::gaussian_increment(double dt) {
  return std::sqrt(dt) * standard_normal();
}

}  // namespace spindet
