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

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "nhq/density.hpp"
#include "nhq/params.hpp"

namespace nhq {

/// Point of the extended phase space. The record r is the stationary value
/// of the Hamiltonian in r for the stored (q, p).
struct PhasePoint {
  BlochVector q;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double r = 0.0;
};

/// H = p . F(q, r) + G(q, r) with F the Stratonovich Bloch drift and
/// G = -r^2/2 - gamma_e (1+z)/2 - gamma_g (1-z)/2 + r sqrt(gamma_e)(x cos theta - y sin theta).
double hamiltonian(const BlochVector& q, const Eigen::Vector3d& p, double r, const SystemParams& prm,
                   DriveAxis axis);
inline double hamiltonian(const PhasePoint& pt, const SystemParams& prm, DriveAxis axis) {
  return hamiltonian(pt.q, pt.p, pt.r, prm, axis);
}

/// G(q, r), the cost term of the Hamiltonian.
double path_cost(const BlochVector& q, double r, const SystemParams& prm);

/// dH/dr.
double hamiltonian_dr(const BlochVector& q, const Eigen::Vector3d& p, double r,
                      const SystemParams& prm);

/// Stationary record r* = p . b(q) + sqrt(gamma_e)(x cos theta - y sin theta).
double optimal_record(const BlochVector& q, const Eigen::Vector3d& p, const SystemParams& prm);

struct HamiltonFlow {
  Eigen::Vector3d q_dot;
  Eigen::Vector3d p_dot;
};

/// q' = dH/dp, p' = -dH/dq at r = r*(q, p). Gradients by forward-mode
/// differentiation of H.
HamiltonFlow hamilton_rhs(const BlochVector& q, const Eigen::Vector3d& p, const SystemParams& prm,
                          DriveAxis axis);

struct PathSolution {
  TimeGrid grid;
  std::vector<PhasePoint> points;
  /// Cumulative action at each grid point.
  std::vector<double> action_cumulative;
  /// H along the path, evaluated at each point.
  std::vector<double> energy_trace;
  double energy = 0.0;
  double action = 0.0;
  double endpoint_residual = 0.0;
  /// max_t |H(t) - H(0)|.
  double energy_drift = 0.0;
  Eigen::Vector3d p0 = Eigen::Vector3d::Zero();
};

/// RK4 integration of Hamilton's equations from (q0, p0) over [0, T] with step dt.
PathSolution integrate_path(const BlochVector& q0, const Eigen::Vector3d& p0, double T, double dt,
                            const SystemParams& prm, DriveAxis axis);

/// Action integral of -p.q' + H over a stored path, by the trapezoid rule on
/// the path's own grid. q' is taken from finite differences of the points, so
/// this also applies to perturbed (off-shell) paths.
double path_action(const std::vector<BlochVector>& q, const std::vector<Eigen::Vector3d>& p,
                   double dt, const SystemParams& prm, DriveAxis axis);

struct ShootOptions {
  int starts = 64;
  double p_box = 6.0;
  /// Step used to screen starts and for the first local refinement.
  double coarse_dt = 1e-2;
  /// Step of the final path.
  double dt = 1e-3;
  /// Starts carried into local refinement.
  int refine = 8;
  int max_iterations = 2000;
  double tolerance = 1e-3;
};

/// Multi-start boundary-value search for p(0) connecting q_i to q_f in time T.
/// Throws NoConvergenceError (carrying the best residual) when no start
/// reaches tolerance.
PathSolution shoot(const BlochVector& q_i, const BlochVector& q_f, double T,
                   const SystemParams& prm, DriveAxis axis, const ShootOptions& opts = {});

/// First time in [t_lo, t_hi] at which the distance from the record-free path
/// (p = 0) starting at q_i to q_f has a local minimum (the global minimum if
/// there is none), by a fine scan and golden-section refinement.
double noise_free_arrival_time(const BlochVector& q_i, const BlochVector& q_f,
                               const SystemParams& prm, DriveAxis axis, double t_lo, double t_hi,
                               double dt = 1e-4);

/// i-th point (0-based) of the 3-D Halton sequence in [0, 1)^3.
std::array<double, 3> halton3(std::uint64_t i);

}  // namespace nhq
