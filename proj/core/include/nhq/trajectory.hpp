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

enum class Outcome { NoJump, Jump };

struct StepResult {
  Outcome outcome = Outcome::NoJump;
  /// Homodyne record of the interval; absent on a jump.
  std::optional<double> r;
  DensityMatrix3 next = DensityMatrix3::ground();
};

/// Probability of an |e> -> |g> click in one interval, with the record
/// integrated out: gamma_g dt rho_ee / tr rho.
double jump_probability(const DensityMatrix3& rho, const SystemParams& p);

/// Mean of the homodyne record, sqrt(gamma_e)(rho_ef e^{i theta} + rho_fe e^{-i theta}) / tr rho.
double record_mean(const DensityMatrix3& rho, const SystemParams& p);

/// One hybrid-detection interval. Draws one uniform variate for the jump
/// decision and, on no jump, one normal variate for r ~ N(mean, 1/dt); then
/// applies the matching Kraus operator followed by the drive unitary.
StepResult sample_step(const DensityMatrix3& rho, const SystemParams& p, DriveAxis axis, Rng& rng);

struct TrajectoryRecord {
  TimeGrid grid;
  /// states[i] at grid.time(i); size grid.size().
  std::vector<DensityMatrix3> states;
  /// records[i] belongs to [t_i, t_i + dt); NaN on the jump interval. Size grid.steps.
  std::vector<double> records;
  std::optional<double> jump_time;
  bool survived = true;

  /// Manifold Bloch vector at step i, or nullopt once the state has jumped.
  std::optional<BlochVector> bloch(std::size_t i) const;
};

/// Iterates sample_step over [0, T]. T must be a multiple of p.dt().
TrajectoryRecord simulate_trajectory(const DensityMatrix3& rho0, const SystemParams& p, double T,
                                     DriveAxis axis, Rng& rng);

enum class PostSelectMode { None, NoJump, Final };

struct PostSelection {
  PostSelectMode mode = PostSelectMode::None;
  BlochVector q_f{};
  double lambda = 0.05;

  static PostSelection none() { return {}; }
  static PostSelection no_jump() { return {PostSelectMode::NoJump, {}, 0.0}; }
  /// Keeps survivors whose terminal Bloch vector is within lambda of q_f; 0 < lambda < 1.
  static PostSelection final_state(const BlochVector& q_f, double lambda);

  /// Whether a trajectory with the given survival flag and terminal Bloch
  /// vector passes the filter.
  bool accepts(bool survived, const std::optional<BlochVector>& q_end) const;
};

/// Filters records. Throws EmptyEnsembleError if nothing is kept.
std::vector<TrajectoryRecord> postselect(const std::vector<TrajectoryRecord>& records,
                                         const PostSelection& sel);

}  // namespace nhq
