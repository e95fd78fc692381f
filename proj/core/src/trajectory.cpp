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

#include "nhq/trajectory.hpp"

#include <cmath>
#include <limits>

#include "nhq/errors.hpp"
#include "nhq/kraus.hpp"

namespace nhq {

double jump_probability(const DensityMatrix3& rho, const SystemParams& p) {
  return p.gamma_g() * p.dt() * rho.pe() / rho.trace();
}

double record_mean(const DensityMatrix3& rho, const SystemParams& p) {
  const cplx fe = rho(kF, kE) * std::polar(1.0, -p.theta());
  return std::sqrt(p.gamma_e()) * 2.0 * fe.real() / rho.trace();
}

namespace {

StepResult step_with(const DensityMatrix3& rho, const SystemParams& p, const Mat3& U, Rng& rng) {
  const double u = rng.uniform();
  if (u < jump_probability(rho, p)) {
    return {Outcome::Jump, std::nullopt, apply_update(rho, jump_operator_bare(p), U)};
  }
  const double r = rng.normal(record_mean(rho, p), 1.0 / std::sqrt(p.dt()));
  return {Outcome::NoJump, r, apply_update(rho, homodyne_operator_bare(p, r), U)};
}

}  // namespace

StepResult sample_step(const DensityMatrix3& rho, const SystemParams& p, DriveAxis axis, Rng& rng) {
  return step_with(rho, p, drive_unitary(p.omega(), p.dt(), axis), rng);
}

std::optional<BlochVector> TrajectoryRecord::bloch(std::size_t i) const {
  const DensityMatrix3& s = states.at(i);
  if (s.pf() + s.pe() <= 1e-12) return std::nullopt;
  return bloch_from_rho(s);
}

TrajectoryRecord simulate_trajectory(const DensityMatrix3& rho0, const SystemParams& p, double T,
                                     DriveAxis axis, Rng& rng) {
  TrajectoryRecord rec;
  rec.grid = TimeGrid::over(T, p.dt());
  rec.states.reserve(rec.grid.size());
  rec.records.reserve(rec.grid.steps);
  const Mat3 U = drive_unitary(p.omega(), p.dt(), axis);
  rec.states.push_back(rho0.normalized());
  for (std::size_t i = 0; i < rec.grid.steps; ++i) {
    StepResult s = step_with(rec.states.back(), p, U, rng);
    if (s.outcome == Outcome::Jump) {
      if (!rec.jump_time) rec.jump_time = rec.grid.time(i + 1);
      rec.records.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      rec.records.push_back(*s.r);
    }
    rec.states.push_back(std::move(s.next));
  }
  rec.survived = !rec.jump_time.has_value();
  return rec;
}

PostSelection PostSelection::final_state(const BlochVector& q_f, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw ValidationError("postselect: lambda must lie in (0, 1)");
  }
  return {PostSelectMode::Final, q_f, lambda};
}

bool PostSelection::accepts(bool survived, const std::optional<BlochVector>& q_end) const {
  switch (mode) {
    case PostSelectMode::None:
      return true;
    case PostSelectMode::NoJump:
      return survived;
    case PostSelectMode::Final:
      return survived && q_end && distance(*q_end, q_f) < lambda;
  }
  return false;
}

std::vector<TrajectoryRecord> postselect(const std::vector<TrajectoryRecord>& records,
                                         const PostSelection& sel) {
  std::vector<TrajectoryRecord> kept;
  for (const auto& r : records) {
    if (sel.accepts(r.survived, r.bloch(r.states.size() - 1))) kept.push_back(r);
  }
  if (kept.empty()) {
    throw EmptyEnsembleError("postselect: no trajectory passes the filter; enlarge n or lambda");
  }
  return kept;
}

}  // namespace nhq
