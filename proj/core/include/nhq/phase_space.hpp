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

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nhq/params.hpp"

namespace nhq {

/// One-dimensional reduction of the optimal-path problem for the y-axis drive
/// at theta = 0 on the great circle y = 0, x = sin(theta_b), z = cos(theta_b).
/// The 3-D momentum maps to p (cos theta_b, 0, -sin theta_b).
struct Reduced1DState {
  double theta_b = 0.0;
  double p = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  double energy() const { return A * p * p + B * p + C; }
};

struct Coefficients1D {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
};

/// A = (ge/2)(1 + cos)^2, B = 2 w + (3 ge/2 - gg/2) sin + (ge/2) sin 2t,
/// C = (ge/2)(1 - cos) + (ge/4)(1 - cos 2t) - ge - (gg/2)(1 - cos).
Coefficients1D reduce_1d(double theta_b, const SystemParams& prm);

Reduced1DState reduced_state(double theta_b, double p, const SystemParams& prm);

/// Record on the reduced circle, r = p sqrt(ge)(1 + cos) + sqrt(ge) sin.
double record_1d(double theta_b, double p, const SystemParams& prm);

double theta_dot_1d(double theta_b, double p, const SystemParams& prm);
double p_dot_1d(double theta_b, double p, const SystemParams& prm);

struct PortraitRow {
  double theta_b = 0.0;
  /// Roots of A p^2 + B p + C = E; NaN where none. In the linear case (A = 0)
  /// only p_branch1 is set.
  double p_branch1 = 0.0;
  double p_branch2 = 0.0;
  double energy = 0.0;
  bool separatrix = false;
};

/// Constant-energy contours p(theta_b; E) on the given theta grid. A
/// discriminant within `disc_tol` below zero counts as a double root. Rows for
/// energies listed in `separatrix_energies` (within 1e-12) are flagged.
std::vector<PortraitRow> phase_portrait(const std::vector<double>& energies,
                                        const SystemParams& prm,
                                        const std::vector<double>& theta_grid,
                                        const std::vector<double>& separatrix_energies = {},
                                        double disc_tol = 1e-10);

enum class FixedPointKind { Saddle, Center, Marginal };

const char* to_string(FixedPointKind k);

struct FixedPoint {
  double theta_b = 0.0;
  double p = 0.0;
  FixedPointKind kind = FixedPointKind::Marginal;
  Eigen::Vector2cd eigenvalues;
  double energy = 0.0;
};

struct FixedPointOptions {
  double theta_lo = 0.0;
  double theta_hi = 2.0 * 3.14159265358979323846;
  double p_lo = -30.0;
  double p_hi = 30.0;
  int theta_seeds = 64;
  int p_seeds = 61;
  double merge_tol = 1e-6;
  double residual_tol = 1e-12;
  /// Eigenvalues with both |Re| and |Im| below this are marginal.
  double marginal_tol = 1e-8;
};

/// Roots of (theta_b', p') = 0 found by damped Newton from a seed grid,
/// deduplicated and classified from the Jacobian eigenvalues.
std::vector<FixedPoint> find_fixed_points(const SystemParams& prm,
                                          const FixedPointOptions& opts = {});

/// Jacobian of (theta_b', p') with respect to (theta_b, p), by central differences.
Eigen::Matrix2d flow_jacobian_1d(double theta_b, double p, const SystemParams& prm);

}  // namespace nhq
