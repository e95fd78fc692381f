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

#pragma once

#include <map>
#include <string>

#include "nhq/conventions.hpp"
#include "nhq/density.hpp"
#include "nhq/params.hpp"

namespace nhq {

enum class DetectionScheme { PhotonCounting, Hybrid };

/// Measurement operators of one detection scheme.
///
/// Photon counting: "K0", "K1e", "K1g".
/// Hybrid (evaluated at a fixed homodyne record r): "KH", "KJ".
struct KrausSet {
  DetectionScheme scheme = DetectionScheme::PhotonCounting;
  std::map<std::string, Mat3> operators;

  const Mat3& at(const std::string& label) const { return operators.at(label); }
};

/// K0 = diag(sqrt(1-p_e), sqrt(1-p_g), 1), K1e = sqrt(p_e)|e><f|,
/// K1g = sqrt(p_g)|g><e|, with p_e = gamma_e*dt and p_g = gamma_g*dt.
KrausSet build_photon_counting_kraus(const SystemParams& p);

/// sqrt(dt / 2pi), the square of the Gaussian prefactor normalization.
double hybrid_normalization(double dt);

/// Homodyne (no-jump) operator K_H(r) including its Gaussian prefactor.
Mat3 homodyne_operator(const SystemParams& p, double r);

/// K_H(r) without the scalar prefactor sqrt(N) exp(-r^2 dt/4). Gives the same
/// normalized update as homodyne_operator.
Mat3 homodyne_operator_bare(const SystemParams& p, double r);

/// Jump operator K_J(r) including its Gaussian prefactor.
Mat3 jump_operator(const SystemParams& p, double r);

/// K_J with the record integrated out: sqrt(gamma_g dt) |g><e|.
Mat3 jump_operator_bare(const SystemParams& p);

KrausSet build_hybrid_kraus(const SystemParams& p, double r);

/// exp(-i H dt) with H = omega(|f><e| + |e><f|) for X and
/// H = omega(-i|f><e| + i|e><f|) for Y; identity on |g>.
Mat3 drive_unitary(double omega, double dt, DriveAxis axis);

/// Drive Hamiltonian on the three-level space.
Mat3 drive_hamiltonian(double omega, DriveAxis axis);

/// U K rho K^dag U^dag / tr(.). Throws ImpossibleOutcomeError when the trace
/// is below 1e-300.
DensityMatrix3 apply_update(const DensityMatrix3& rho, const Mat3& K, const Mat3& U);

/// Max-abs entry of sum K^dag K - I for the photon-counting set.
double photon_counting_povm_residual(const SystemParams& p);

/// Max-abs entry of int dr (K_H^dag K_H + K_J^dag K_J) - I, by composite
/// Gauss-Legendre quadrature over r in [-40/sqrt(dt), 40/sqrt(dt)].
double hybrid_povm_residual(const SystemParams& p, int panels = 80, int nodes_per_panel = 20);

}  // namespace nhq
