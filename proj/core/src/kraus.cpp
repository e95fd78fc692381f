// Copyright 2026 The nhqubit Authors
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

#include "nhq/kraus.hpp"

#include <cmath>
#include <numbers>

#include <gsl/gsl_integration.h>

#include "nhq/errors.hpp"

namespace nhq {

KrausSet build_photon_counting_kraus(const SystemParams& p) {
  const double pe = p.gamma_e() * p.dt();
  const double pg = p.gamma_g() * p.dt();
  Mat3 k0 = Mat3::Zero();
  k0(kF, kF) = std::sqrt(1.0 - pe);
  k0(kE, kE) = std::sqrt(1.0 - pg);
  k0(kG, kG) = 1.0;
  Mat3 k1e = Mat3::Zero();
  k1e(kE, kF) = std::sqrt(pe);
  Mat3 k1g = Mat3::Zero();
  k1g(kG, kE) = std::sqrt(pg);
  return {DetectionScheme::PhotonCounting, {{"K0", k0}, {"K1e", k1e}, {"K1g", k1g}}};
}

double hybrid_normalization(double dt) { return std::sqrt(dt / (2.0 * std::numbers::pi)); }

namespace {

double gaussian_prefactor(double dt, double r) {
  return std::sqrt(hybrid_normalization(dt)) * std::exp(-r * r * dt / 4.0);
}

}  // namespace

Mat3 homodyne_operator_bare(const SystemParams& p, double r) {
  const double dt = p.dt();
  Mat3 k = Mat3::Zero();
  k(kF, kF) = std::sqrt(1.0 - p.gamma_e() * dt);
  k(kE, kE) = std::sqrt(1.0 - p.gamma_g() * dt);
  k(kG, kG) = 1.0;
  k(kE, kF) = r * dt * std::sqrt(p.gamma_e()) * std::polar(1.0, -p.theta());
  return k;
}

Mat3 homodyne_operator(const SystemParams& p, double r) {
  return gaussian_prefactor(p.dt(), r) * homodyne_operator_bare(p, r);
}

Mat3 jump_operator_bare(const SystemParams& p) {
  Mat3 k = Mat3::Zero();
  k(kG, kE) = std::sqrt(p.gamma_g() * p.dt());
  return k;
}

Mat3 jump_operator(const SystemParams& p, double r) {
  return gaussian_prefactor(p.dt(), r) * jump_operator_bare(p);
}

KrausSet build_hybrid_kraus(const SystemParams& p, double r) {
  if (!std::isfinite(r)) throw ValidationError("build_hybrid_kraus: record r must be finite");
  return {DetectionScheme::Hybrid, {{"KH", homodyne_operator(p, r)}, {"KJ", jump_operator(p, r)}}};
}

Mat3 drive_hamiltonian(double omega, DriveAxis axis) {
  Mat3 h = Mat3::Zero();
  if (axis == DriveAxis::X) {
    h(kF, kE) = omega;
    h(kE, kF) = omega;
  } else {
    h(kF, kE) = cplx(0.0, -omega);
    h(kE, kF) = cplx(0.0, omega);
  }
  return h;
}

Mat3 drive_unitary(double omega, double dt, DriveAxis axis) {
  if (!(dt > 0.0)) throw ValidationError("drive_unitary: dt must be > 0");
  // H restricted to (f, e) is omega*sigma_x or omega*sigma_y, both squaring to
  // omega^2 I, so exp(-iH dt) = cos(omega dt) I - i sin(omega dt) H/omega.
  const double c = std::cos(omega * dt);
  const double s = std::sin(omega * dt);
  Mat3 u = Mat3::Zero();
  u(kF, kF) = c;
  u(kE, kE) = c;
  u(kG, kG) = 1.0;
  if (axis == DriveAxis::X) {
    u(kF, kE) = cplx(0.0, -s);
    u(kE, kF) = cplx(0.0, -s);
  } else {
    u(kF, kE) = -s;
    u(kE, kF) = s;
  }
  return u;
}

DensityMatrix3 apply_update(const DensityMatrix3& rho, const Mat3& K, const Mat3& U) {
  const Mat3 a = U * K;
  Mat3 out = a * rho.matrix() * a.adjoint();
  const double tr = out.trace().real();
  if (!(tr > 1e-300)) {
    throw ImpossibleOutcomeError("apply_update: outcome has vanishing probability");
  }
  out /= tr;
  out = 0.5 * (out + out.adjoint());
  return DensityMatrix3::trusted(out);
}

double photon_counting_povm_residual(const SystemParams& p) {
  const KrausSet ks = build_photon_counting_kraus(p);
  Mat3 sum = Mat3::Zero();
  for (const auto& [label, k] : ks.operators) sum += k.adjoint() * k;
  return (sum - Mat3::Identity()).cwiseAbs().maxCoeff();
}

double hybrid_povm_residual(const SystemParams& p, int panels, int nodes_per_panel) {
  if (panels < 1 || nodes_per_panel < 1) throw ValidationError("hybrid_povm_residual: bad quadrature");
  gsl_integration_glfixed_table* table =
      gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(nodes_per_panel));
  const double half_width = 40.0 / std::sqrt(p.dt());
  const double h = 2.0 * half_width / panels;
  Mat3 sum = Mat3::Zero();
  for (int k = 0; k < panels; ++k) {
    const double a = -half_width + k * h;
    for (int i = 0; i < nodes_per_panel; ++i) {
      double r = 0.0;
      double w = 0.0;
      gsl_integration_glfixed_point(a, a + h, static_cast<std::size_t>(i), &r, &w, table);
      const Mat3 kh = homodyne_operator(p, r);
      const Mat3 kj = jump_operator(p, r);
      sum += w * (kh.adjoint() * kh + kj.adjoint() * kj);
    }
  }
  gsl_integration_glfixed_table_free(table);
  return (sum - Mat3::Identity()).cwiseAbs().maxCoeff();
}

}  // namespace nhq
