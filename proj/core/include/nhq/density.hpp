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

#include <Eigen/Dense>

#include "nhq/conventions.hpp"

namespace nhq {

/// Bloch vector of the |f>-|e> manifold qubit (z = +1 is |f>).
struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double norm2() const { return x * x + y * y + z * z; }
  Eigen::Vector3d vec() const { return {x, y, z}; }
  static BlochVector from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

  /// Excited-manifold population fraction of |f>, (1 + z) / 2.
  double pf() const { return 0.5 * (1.0 + z); }

  friend BlochVector operator+(const BlochVector& a, const BlochVector& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend BlochVector operator-(const BlochVector& a, const BlochVector& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend BlochVector operator*(double s, const BlochVector& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const BlochVector&, const BlochVector&) = default;
};

inline double distance(const BlochVector& a, const BlochVector& b) { return (a - b).norm(); }

/// Three-level density matrix over (|f>, |e>, |g>).
///
/// Construction from an arbitrary matrix validates Hermiticity (1e-12),
/// positivity (eigenvalues >= -1e-10) and trace in (0, 1 + 1e-12].
class DensityMatrix3 {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kPositivityTol = 1e-10;
  static constexpr double kTraceTol = 1e-12;

  explicit DensityMatrix3(const Mat3& m);

  /// Skips validation. For matrices that are a density matrix by construction.
  static DensityMatrix3 trusted(const Mat3& m) { return DensityMatrix3(m, Trusted{}); }

  static DensityMatrix3 ground() { return basis(kG); }
  static DensityMatrix3 excited_e() { return basis(kE); }
  static DensityMatrix3 excited_f() { return basis(kF); }
  static DensityMatrix3 basis(int level);

  const Mat3& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  double pf() const { return m_(kF, kF).real(); }
  double pe() const { return m_(kE, kE).real(); }
  double pg() const { return m_(kG, kG).real(); }
  double trace() const { return m_.trace().real(); }
  double purity() const { return (m_ * m_).trace().real(); }

  DensityMatrix3 normalized() const;

 private:
  struct Trusted {};
  DensityMatrix3(const Mat3& m, Trusted) : m_(m) {}
  Mat3 m_;
};

/// Pure-state projector of c_f|f> + c_e|e> + c_g|g>. Amplitudes must be
/// normalized to 1e-9.
DensityMatrix3 density_from_amplitudes(cplx c_g, cplx c_e, cplx c_f);

/// Pure state on the manifold with the given Bloch vector (|q| must be 1 to 1e-9).
DensityMatrix3 density_from_bloch(const BlochVector& q);

/// Bloch components of the |f>-|e> block, normalized by rho_ff + rho_ee.
/// Throws ManifoldDepletedError when rho_ff + rho_ee <= 1e-12.
BlochVector bloch_from_rho(const DensityMatrix3& rho);

/// 2x2 |f>-|e> block (not renormalized).
Mat2 manifold_block(const DensityMatrix3& rho);

/// 2x2 qubit density matrix with the given Bloch vector, unit trace.
Mat2 qubit_from_bloch(const BlochVector& q);

}  // namespace nhq
