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

#include <cstdint>
#include <vector>

#include "nhq/bloch_sde.hpp"
#include "nhq/density.hpp"
#include "nhq/params.hpp"
#include "nhq/trajectory.hpp"

namespace nhq {

/// Per-time ensemble averages.
///
/// Population means and standard errors run over every kept trajectory, with
/// a jumped trajectory counting as |g>. The normalized P_f and the Bloch
/// means run over the trajectories that have not jumped by that time (NaN
/// where there are none).
struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> pf_mean, pf_se;
  std::vector<double> pe_mean, pe_se;
  std::vector<double> pg_mean, pg_se;
  std::vector<double> pf_norm, pf_norm_se;
  std::vector<double> x_mean, x_se;
  std::vector<double> y_mean, y_se;
  std::vector<double> z_mean, z_se;
  std::vector<std::size_t> n_survived;
  /// Trajectories simulated.
  std::size_t n_total = 0;
  /// Trajectories that passed post-selection (the population means run over these).
  std::size_t n_kept = 0;

  /// Fraction of all simulated trajectories still unjumped at step i.
  double survivor_fraction(std::size_t i) const {
    return static_cast<double>(n_survived[i]) / static_cast<double>(n_kept);
  }
};

struct EnsembleOptions {
  std::uint64_t seed = 20260917;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend on it.
  unsigned workers = 1;
  PostSelection postselect{};
};

/// Block size used by the deterministic reduction for n trajectories.
std::size_t ensemble_block_size(std::size_t n);

/// Jump-aware hybrid-detection ensemble. Trajectory i draws from stream_for(seed, i).
/// Throws EmptyEnsembleError when post-selection keeps nothing.
EnsembleStats simulate_ensemble(std::size_t n, const DensityMatrix3& rho0, const SystemParams& p,
                                double T, DriveAxis axis, const EnsembleOptions& opts = {});

/// Bloch-equation ensemble (no-jump pipeline unless sde.jumps is set).
EnsembleStats simulate_sde_ensemble(std::size_t n, const BlochVector& q0, const SystemParams& p,
                                    double T, DriveAxis axis, const SdeOptions& sde,
                                    const EnsembleOptions& opts = {});

/// Statistics of an explicit set of records (all kept).
EnsembleStats stats_from_records(const std::vector<TrajectoryRecord>& records);

}  // namespace nhq
