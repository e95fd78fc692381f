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

#include "nhq/density.hpp"

#include <cmath>
#include <string>

#include "nhq/errors.hpp"

namespace nhq {

DensityMatrix3::DensityMatrix3(const Mat3& m) : m_(m) {
  if (!m.allFinite()) throw ValidationError("DensityMatrix3: non-finite entries");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) {
    throw ValidationError("DensityMatrix3: not Hermitian (deviation " + std::to_string(herm) + ")");
  }
  const double tr = m.trace().real();
  if (!(tr > 0.0) || tr > 1.0 + kTraceTol) {
    throw ValidationError("DensityMatrix3: trace " + std::to_string(tr) + " outside (0, 1]");
  }
  const Mat3 h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat3> es(h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPositivityTol) {
    throw ValidationError("DensityMatrix3: negative eigenvalue");
  }
}

DensityMatrix3 DensityMatrix3::basis(int level) {
  Mat3 m = Mat3::Zero();
  m(level, level) = 1.0;
  return trusted(m);
}

DensityMatrix3 DensityMatrix3::normalized() const {
  const double tr = trace();
  if (!(tr > 0.0)) throw ImpossibleOutcomeError("DensityMatrix3::normalized: zero trace");
  return trusted(m_ / tr);
}

DensityMatrix3 density_from_amplitudes(cplx c_g, cplx c_e, cplx c_f) {
  const double n = std::norm(c_g) + std::norm(c_e) + std::norm(c_f);
  if (std::abs(n - 1.0) > 1e-9) {
    throw ValidationError("density_from_amplitudes: amplitudes not normalized (|c|^2 sum = " +
                          std::to_string(n) + ")");
  }
  Eigen::Vector3cd psi;
  psi(kF) = c_f;
  psi(kE) = c_e;
  psi(kG) = c_g;
  Mat3 rho = psi * psi.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix3::trusted(rho);
}

DensityMatrix3 density_from_bloch(const BlochVector& q) {
  if (std::abs(q.norm() - 1.0) > 1e-9) {
    throw ValidationError("density_from_bloch: Bloch vector is not on the unit sphere");
  }
  Mat3 rho = Mat3::Zero();
  rho.block<2, 2>(0, 0) = qubit_from_bloch(q);
  return DensityMatrix3::trusted(rho);
}

Mat2 qubit_from_bloch(const BlochVector& q) {
  // rho_fe = (x - i y)/2 inverts x = 2 Re rho_fe, y = -2 Im rho_fe.
  Mat2 m;
  m(0, 0) = 0.5 * (1.0 + q.z);
  m(1, 1) = 0.5 * (1.0 - q.z);
  m(0, 1) = cplx(0.5 * q.x, -0.5 * q.y);
  m(1, 0) = std::conj(m(0, 1));
  return m;
}

Mat2 manifold_block(const DensityMatrix3& rho) { return rho.matrix().block<2, 2>(0, 0); }

BlochVector bloch_from_rho(const DensityMatrix3& rho) {
  const Mat3& m = rho.matrix();
  const double n = m(kF, kF).real() + m(kE, kE).real();
  if (!(n > 1e-12)) throw ManifoldDepletedError("bloch_from_rho: |f>-|e> manifold is empty");
  const cplx fe = m(kF, kE);
  const cplx ef = m(kE, kF);
  const cplx iy = cplx(0.0, 1.0) * (fe - ef);
  return {(fe + ef).real() / n, iy.real() / n, (m(kF, kF).real() - m(kE, kE).real()) / n};
}

}  // namespace nhq
