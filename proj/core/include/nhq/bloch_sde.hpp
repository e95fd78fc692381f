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

#include <optional>
#include <vector>

#include "nhq/density.hpp"
#include "nhq/params.hpp"
#include "nhq/random.hpp"

namespace nhq {

/// Record-independent part a(q) of the Bloch drift, so that
/// q' = a(q) + b(q) r.
BlochVector bloch_drift(const BlochVector& q, const SystemParams& p, DriveAxis axis);

/// Record coupling b(q) = dq'/dr.
BlochVector bloch_backaction(const BlochVector& q, const SystemParams& p);

/// Stratonovich time derivative q' = a(q) + b(q) r for measurement phase p.theta().
BlochVector bloch_step_stratonovich(const BlochVector& q, double r, const SystemParams& p,
                                    DriveAxis axis);

/// Euler-Maruyama increment of the Ito form. For theta = 0 this is the closed
/// theta = 0 expression; other phases use the Ito drift a + b m + (Db)b / 2.
BlochVector bloch_step_ito(const BlochVector& q, double dW, const SystemParams& p, DriveAxis axis);

/// Ito drift via the Stratonovich-to-Ito conversion, valid for any theta.
BlochVector ito_drift(const BlochVector& q, const SystemParams& p, DriveAxis axis);

/// Noise-free record mean sqrt(gamma_e)(x cos theta - y sin theta).
double record_signal(const BlochVector& q, double theta, double gamma_e);

/// r = sqrt(gamma_e)(x cos theta - y sin theta) + zeta.
double measurement_record(const BlochVector& q, double theta, double gamma_e, double zeta);

/// One Heun (predictor-corrector) step of the Stratonovich equation. The
/// record at each stage is r = record_signal(stage) + dW/dt.
BlochVector heun_step(const BlochVector& q, double dW, const SystemParams& p, DriveAxis axis);

/// One no-jump Kraus update of the manifold qubit with record
/// r = record_signal(q) + dW/dt, mapped back to Bloch components.
BlochVector kraus_bloch_step(const BlochVector& q, double dW, const SystemParams& p,
                             DriveAxis axis);

enum class SdeScheme { Stratonovich, Ito, Kraus };

const char* to_string(SdeScheme s);

struct SdeOptions {
  SdeScheme scheme = SdeScheme::Stratonovich;
  /// Sample |e> -> |g> jumps with probability gamma_g (1 - z)/2 dt per step and
  /// terminate the trajectory on a jump.
  bool jumps = false;
  /// NormDriftError once |q| exceeds this bound. Infinity disables the check.
  double norm_guard = 1.05;
};

struct BlochTrajectory {
  TimeGrid grid;
  /// q[i] at grid.time(i); NaN components after a jump.
  std::vector<BlochVector> q;
  /// r[i] on [t_i, t_i + dt); NaN on and after the jump interval.
  std::vector<double> r;
  std::optional<double> jump_time;
  bool survived = true;
};

/// Integrates one trajectory drawing dW ~ N(0, dt) from rng (preceded by a
/// uniform variate per step when jumps are enabled).
BlochTrajectory simulate_sde(const BlochVector& q0, const SystemParams& p, double T, DriveAxis axis,
                             Rng& rng, const SdeOptions& opts = {});

/// Integrates a jump-free trajectory from a given Wiener increment sequence;
/// the grid has dW.size() steps of p.dt().
BlochTrajectory integrate_with_noise(const BlochVector& q0, const SystemParams& p, DriveAxis axis,
                                     const std::vector<double>& dW, SdeScheme scheme,
                                     double norm_guard = 1.05);

/// Sums consecutive pairs of increments: the same Brownian path on a grid of twice the step.
std::vector<double> coarsen_noise(const std::vector<double>& dW);

}  // namespace nhq
