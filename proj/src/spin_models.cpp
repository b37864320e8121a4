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

#include "spindet/spin_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "spindet/errors.hpp"

namespace spindet {

SpinOperatorSet spin_operators(double s) {
  const double twice = 2.0 * s;
  if (!(s >= 0.0) || std::abs(twice - std::round(twice)) > 1e-12) {
    throw std::invalid_argument(fmt::format("spin_operators: s = {} is not a half-integer", s));
  }
  const auto d = static_cast<Eigen::Index>(std::lround(twice)) + 1;
  ComplexMatrix raise = ComplexMatrix::Zero(d, d);
  ComplexMatrix z = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = s - static_cast<double>(k);
    z(k, k) = m;
    if (k > 0) raise(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  SpinOperatorSet ops;
  ops.s = s;
  ops.x = 0.5 * (raise + lower);
  ops.y = Complex(0.0, -0.5) * (raise - lower);
  ops.z = z;
  return ops;
}

SpinOperatorSet embed_left(const SpinOperatorSet& ops, Eigen::Index right_dim) {
  const ComplexMatrix id = ComplexMatrix::Identity(right_dim, right_dim);
  return {ops.s, kron(ops.x, id), kron(ops.y, id), kron(ops.z, id)};
}

SpinOperatorSet embed_right(Eigen::Index left_dim, const SpinOperatorSet& ops) {
  const ComplexMatrix id = ComplexMatrix::Identity(left_dim, left_dim);
  return {ops.s, kron(id, ops.x), kron(id, ops.y), kron(id, ops.z)};
}

ComplexMatrix nv_hamiltonian(const NVParams& p, const Vec3& b0) {
  const auto e = embed_left(spin_operators(1.0), 2);
  const auto n = embed_right(3, spin_operators(0.5));
  return p.zero_field_splitting * e.z * e.z - constants::gamma_e * e.dot(b0) +
         p.hyperfine_z * n.z * e.z;
}

ComplexMatrix bi_hamiltonian(const BiParams& p, const Vec3& b0) {
  const auto nuclear = spin_operators(p.nuclear_spin);
  const auto e = embed_left(spin_operators(0.5), nuclear.dim());
  const auto n = embed_right(2, nuclear);
  return p.hyperfine * (n.x * e.x + n.y * e.y + n.z * e.z) - constants::gamma_e * e.dot(b0);
}

std::vector<std::string> nv_field_warnings(double field_magnitude) {
  std::vector<std::string> out;
  const double b = std::abs(field_magnitude);
  if (b < 0.1e-3 || b > 10e-3) {
    out.push_back(fmt::format(
        "NV field |B0| = {:.4g} mT lies outside 0.1-10 mT, where strain and transverse "
        "hyperfine mixing are negligible",
        b * 1e3));
  }
  return out;
}

std::vector<std::string> bi_field_warnings(const BiParams& p, double field_magnitude) {
  std::vector<std::string> out;
  const double b = std::abs(field_magnitude);
  if (b > 50e-3) {
    out.push_back(fmt::format(
        "Bi field |B0| = {:.4g} mT is not small against A/gamma_e = {:.4g} mT; F labels are "
        "unreliable",
        b * 1e3, p.hyperfine / constants::gamma_e * 1e3));
  }
  return out;
}

bool LevelLabel::operator==(const LevelLabel& o) const {
  return std::abs(first - o.first) < 1e-9 && std::abs(second - o.second) < 1e-9;
}

namespace {

std::string half_integer(double v, bool plus) {
  const long twice = std::lround(2.0 * v);
  std::string sign = (twice > 0 && plus) ? "+" : "";
  if (twice % 2 == 0) return sign + std::to_string(twice / 2);
  return sign + std::to_string(twice) + "/2";
}

}  // namespace

std::string LevelLabel::text(bool hyperfine_multiplet) const {
  if (hyperfine_multiplet) {
    return "F=" + half_integer(first, false) + " mF=" + half_integer(second, true);
  }
  return "mS=" + half_integer(first, true) + " mI=" + half_integer(second, true);
}

TransitionPair transition_between(const EigenDecomposition& eig, const SpinOperatorSet& electron,
                                  Eigen::Index from, Eigen::Index to) {
  TransitionPair pair;
  pair.lower = from;
  pair.upper = to;
  pair.omega = eig.values(to) - eig.values(from);
  const auto bra = eig.vectors.col(from).adjoint();
  const auto ket = eig.vectors.col(to);
  pair.element = ComplexVec3((bra * electron.x * ket)(0, 0), (bra * electron.y * ket)(0, 0),
                             (bra * electron.z * ket)(0, 0));
  return pair;
}

std::vector<TransitionPair> transition_elements(const EigenDecomposition& eig,
                                                const SpinOperatorSet& electron) {
  std::vector<TransitionPair> out;
  const auto n = eig.values.size();
  const double tol = 1e-12 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  // Project once: M_k = V^dagger S_k V.
  const ComplexMatrix mx = eig.vectors.adjoint() * electron.x * eig.vectors;
  const ComplexMatrix my = eig.vectors.adjoint() * electron.y * eig.vectors;
  const ComplexMatrix mz = eig.vectors.adjoint() * electron.z * eig.vectors;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double omega = eig.values(j) - eig.values(i);
      if (omega <= tol) continue;
      out.push_back({i, j, omega, ComplexVec3(mx(i, j), my(i, j), mz(i, j))});
    }
  }
  return out;
}

std::vector<TransitionPair> transition_elements(const ComplexMatrix& h,
                                                const SpinOperatorSet& electron) {
  return transition_elements(hermitian_eig(h), electron);
}

double coupling_constant(const TransitionPair& pair, const Vec3& delta_b) {
  const Complex projected = delta_b.x() * pair.element.x() + delta_b.y() * pair.element.y() +
                            delta_b.z() * pair.element.z();
  return std::abs(constants::gamma_e * projected);
}

SpinSystemModel::SpinSystemModel(std::variant<NVParams, BiParams> p, SpinOperatorSet electron,
                                 SpinOperatorSet nuclear)
    : params_(p), electron_(std::move(electron)), nuclear_(std::move(nuclear)) {}

SpinSystemModel SpinSystemModel::nv(const NVParams& p) {
  return SpinSystemModel(p, embed_left(spin_operators(1.0), 2),
                         embed_right(3, spin_operators(0.5)));
}

SpinSystemModel SpinSystemModel::bi(const BiParams& p) {
  const auto nuclear = spin_operators(p.nuclear_spin);
  return SpinSystemModel(p, embed_left(spin_operators(0.5), nuclear.dim()),
                         embed_right(2, nuclear));
}

Vec3 SpinSystemModel::field_vector(double field) const {
  if (const auto* nv = std::get_if<NVParams>(&params_)) {
    return Vec3(field * std::sin(nv->axis_angle), 0.0, field * std::cos(nv->axis_angle));
  }
  return Vec3(0.0, 0.0, field);
}

ComplexMatrix SpinSystemModel::hamiltonian(double field) const {
  if (const auto* nv = std::get_if<NVParams>(&params_)) {
    return nv_hamiltonian(*nv, field_vector(field));
  }
  return bi_hamiltonian(std::get<BiParams>(params_), field_vector(field));
}

std::vector<std::string> SpinSystemModel::field_warnings(double field) const {
  if (is_nv()) return nv_field_warnings(field);
  return bi_field_warnings(std::get<BiParams>(params_), field);
}

EigenDecomposition SpinSystemModel::diagonalize(double field) const {
  constexpr double kMinField = 1e-9;
  if (std::abs(field) >= kMinField) return hermitian_eig(hamiltonian(field));
  auto eig = hermitian_eig(hamiltonian(std::signbit(field) ? -kMinField : kMinField));
  const ComplexMatrix h = hamiltonian(field);
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    eig.values(k) = (eig.vectors.col(k).adjoint() * h * eig.vectors.col(k))(0, 0).real();
  }
  return eig;
}

std::vector<LevelLabel> SpinSystemModel::labels(const EigenDecomposition& eig) const {
  const auto n = eig.values.size();
  std::vector<LevelLabel> out(n);
  auto expect = [&](const ComplexMatrix& op, Eigen::Index k) {
    return (eig.vectors.col(k).adjoint() * op * eig.vectors.col(k))(0, 0).real();
  };
  if (is_nv()) {
    for (Eigen::Index k = 0; k < n; ++k) {
      out[k].first = std::round(expect(electron_.z, k));
      out[k].second = std::round(2.0 * expect(nuclear_.z, k)) / 2.0;
    }
    return out;
  }
  // Bi: the lowest 2I levels form the F = I - 1/2 multiplet at weak field.
  const double i_spin = std::get<BiParams>(params_).nuclear_spin;
  const auto lower_count = static_cast<Eigen::Index>(std::lround(2.0 * i_spin));
  const ComplexMatrix fz = electron_.z + nuclear_.z;
  for (Eigen::Index k = 0; k < n; ++k) {
    out[k].first = k < lower_count ? i_spin - 0.5 : i_spin + 0.5;
    out[k].second = std::round(expect(fz, k));
  }
  return out;
}

Eigen::Index SpinSystemModel::find_level(const std::vector<LevelLabel>& labels,
                                         const LevelLabel& which) const {
  const auto it = std::find(labels.begin(), labels.end(), which);
  if (it == labels.end()) {
    throw ConfigError("spin", "no level labeled " + which.text(!is_nv()));
  }
  return static_cast<Eigen::Index>(it - labels.begin());
}

double SpinSystemModel::transition_frequency(const LevelLabel& from, const LevelLabel& to,
                                             double field) const {
  const auto eig = diagonalize(field);
  const auto lab = labels(eig);
  return eig.values(find_level(lab, to)) - eig.values(find_level(lab, from));
}

TransitionPair SpinSystemModel::transition(const LevelLabel& from, const LevelLabel& to,
                                           double field) const {
  const auto eig = diagonalize(field);
  const auto lab = labels(eig);
  return transition_between(eig, electron_, find_level(lab, from), find_level(lab, to));
}

double resonance_field_search(const SpinSystemModel& model, const LevelLabel& from,
                              const LevelLabel& to, double omega_target, double field_lo,
                              double field_hi) {
  constexpr double kTolerance = kTwoPi * 1e3;
  auto f = [&](double b) { return model.transition_frequency(from, to, b) - omega_target; };
  const double f_lo = f(field_lo);
  if (std::abs(f_lo) <= kTolerance) return field_lo;
  const double f_hi = f(field_hi);
  if (std::abs(f_hi) <= kTolerance) return field_hi;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw NumericalError(fmt::format(
        "resonance_field_search: unbracketed, omega - target = {:.6g} and {:.6g} rad/s at the "
        "bracket ends [{:.6g}, {:.6g}] T",
        f_lo, f_hi, field_lo, field_hi));
  }
  std::uintmax_t max_iter = 200;
  auto stop = [&](double a, double b) { return std::abs(b - a) < 1e-15; };
  const auto [a, b] =
      boost::math::tools::toms748_solve(f, field_lo, field_hi, f_lo, f_hi, stop, max_iter);
  const double root = 0.5 * (a + b);
  if (std::abs(f(root)) > kTolerance) {
    throw NumericalError("resonance_field_search: failed to converge within 2 pi x 1 kHz");
  }
  return root;
}

LevelSweep sweep_levels(const SpinSystemModel& model, const std::vector<double>& fields) {
  LevelSweep out;
  out.fields = fields;
  const auto n = model.dim();
  out.energies.resize(static_cast<Eigen::Index>(fields.size()), n);
  if (fields.empty()) return out;

  auto eig = model.diagonalize(fields.front());
  out.labels = model.labels(eig);
  ComplexMatrix tracked = eig.vectors;
  out.energies.row(0) = eig.values.transpose();

  for (std::size_t step = 1; step < fields.size(); ++step) {
    eig = model.diagonalize(fields[step]);
    const Eigen::MatrixXd overlap = (tracked.adjoint() * eig.vectors).cwiseAbs2();
    // Greedy assignment on the largest remaining overlap.
    std::vector<bool> row_used(n, false), col_used(n, false);
    std::vector<Eigen::Index> assign(n, -1);
    for (Eigen::Index round = 0; round < n; ++round) {
      double best = -1.0;
      Eigen::Index bi = 0, bj = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (row_used[i]) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (!col_used[j] && overlap(i, j) > best) {
            best = overlap(i, j);
            bi = i;
            bj = j;
          }
        }
      }
      row_used[bi] = col_used[bj] = true;
      assign[bi] = bj;
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      tracked.col(k) = eig.vectors.col(assign[k]);
      out.energies(static_cast<Eigen::Index>(step), k) = eig.values(assign[k]);
    }
  }
  return out;
}

}  // namespace spindet
