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

// Conventions shared by every module.
//
// Three-level operators are 3x3 matrices over the ordered basis
//   index 0 = |f>  (second excited)
//   index 1 = |e>  (first excited)
//   index 2 = |g>  (ground)
// so the (1,0) entry of an operator maps |f> -> |e>.
//
// The post-selected qubit lives on the |f>-|e> manifold. Its 2x2 density
// matrices use the same ordering (0 = f, 1 = e) and are vectorized row-major:
//   vec(rho) = (rho_ff, rho_fe, rho_ef, rho_ee).
//
// Bloch components on that manifold (n = rho_ff + rho_ee):
//   x = (rho_fe + rho_ef) / n
//   y = i (rho_fe - rho_ef) / n
//   z = (rho_ff - rho_ee) / n
// so z = +1 is |f> and z = -1 is |e>.
//
// Units: rates and drive strengths in MHz, times in microseconds. No 2*pi
// factors are inserted; gamma*dt and omega*dt are used as dimensionless.

#include <complex>

#include <Eigen/Dense>

namespace nhq {

using cplx = std::complex<double>;

using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4cd;

inline constexpr int kF = 0;
inline constexpr int kE = 1;
inline constexpr int kG = 2;

enum class DriveAxis { X, Y };

inline const char* to_string(DriveAxis axis) { return axis == DriveAxis::X ? "x" : "y"; }

}  // namespace nhq
