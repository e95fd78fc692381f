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

#include "nhq/ensemble.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <Eigen/Eigenvalues>

#include "nhq/errors.hpp"
#include "nhq/kraus.hpp"

namespace nhq {

namespace {

constexpr std::size_t kMinBlock = 64;
constexpr std::size_t kMaxBlocks = 128;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Sample {
  double pf = 0.0, pe = 0.0, pg = 1.0;
  bool alive = false;
  bool has_bloch = false;
  double x = 0.0, y = 0.0, z = 0.0;
};

// Running sums per time point.
enum Slot {
  kPf, kPf2, kPe, kPe2, kPg, kPg2, kAlive, kBloch,
  kPn, kPn2, kX, kX2, kY, kY2, kZ, kZ2, kSlots
};

struct Accumulator {
  std::vector<std::array<double, kSlots>> sums;
  std::size_t kept = 0;

  explicit Accumulator(std::size_t points = 0) : sums(points, std::array<double, kSlots>{}) {}

  void add(const std::vector<Sample>& traj) {
    ++kept;
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const Sample& s = traj[i];
      auto& a = sums[i];
      a[kPf] += s.pf;
      a[kPf2] += s.pf * s.pf;
      a[kPe] += s.pe;
      a[kPe2] += s.pe * s.pe;
      a[kPg] += s.pg;
      a[kPg2] += s.pg * s.pg;
      if (s.alive) a[kAlive] += 1.0;
      if (s.has_bloch) {
        const double pn = 0.5 * (1.0 + s.z);
        a[kBloch] += 1.0;
        a[kPn] += pn;
        a[kPn2] += pn * pn;
        a[kX] += s.x;
        a[kX2] += s.x * s.x;
        a[kY] += s.y;
        a[kY2] += s.y * s.y;
        a[kZ] += s.z;
        a[kZ2] += s.z * s.z;
      }
    }
  }

  void merge(const Accumulator& o) {
    kept += o.kept;
    for (std::size_t i = 0; i < sums.size(); ++i)
      for (int k = 0; k < kSlots; ++k) sums[i][k] += o.sums[i][k];
  }
};

Accumulator merge_range(std::vector<Accumulator>& blocks, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return std::move(blocks[lo]);
  const std::size_t mid = lo + (hi - lo) / 2;
  Accumulator left = merge_range(blocks, lo, mid);
  left.merge(merge_range(blocks, mid, hi));
  return left;
}

void moments(double s1, double s2, double k, double& mean, double& se) {
  if (k <= 0.0) {
    mean = kNaN;
    se = kNaN;
    return;
  }
  mean = s1 / k;
  if (k < 2.0) {
    se = 0.0;
    return;
  }
  const double var = std::max(0.0, (s2 - k * mean * mean) / (k - 1.0));
  se = std::sqrt(var / k);
}

EnsembleStats finalize(const Accumulator& acc, const TimeGrid& grid, std::size_t n_total) {
  EnsembleStats st;
  const std::size_t m = grid.size();
  st.n_total = n_total;
  st.n_kept = acc.kept;
  auto resize = [m](std::initializer_list<std::vector<double>*> vs) {
    for (auto* v : vs) v->assign(m, kNaN);
  };
  resize({&st.times, &st.pf_mean, &st.pf_se, &st.pe_mean, &st.pe_se, &st.pg_mean, &st.pg_se,
          &st.pf_norm, &st.pf_norm_se, &st.x_mean, &st.x_se, &st.y_mean, &st.y_se, &st.z_mean,
          &st.z_se});
  st.n_survived.assign(m, 0);
  const double k = static_cast<double>(acc.kept);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = acc.sums[i];
    st.times[i] = grid.time(i);
    moments(a[kPf], a[kPf2], k, st.pf_mean[i], st.pf_se[i]);
    moments(a[kPe], a[kPe2], k, st.pe_mean[i], st.pe_se[i]);
    moments(a[kPg], a[kPg2], k, st.pg_mean[i], st.pg_se[i]);
    st.n_survived[i] = static_cast<std::size_t>(std::llround(a[kAlive]));
    const double nb = a[kBloch];
    moments(a[kPn], a[kPn2], nb, st.pf_norm[i], st.pf_norm_se[i]);
    moments(a[kX], a[kX2], nb, st.x_mean[i], st.x_se[i]);
    moments(a[kY], a[kY2], nb, st.y_mean[i], st.y_se[i]);
    moments(a[kZ], a[kZ2], nb, st.z_mean[i], st.z_se[i]);
  }
  return st;
}

// Runs `fill(index, samples) -> accepted` for every trajectory and reduces the
// accepted ones block by block in a fixed order.
template <class Fill>
EnsembleStats run_blocks(std::size_t n, const TimeGrid& grid, const EnsembleOptions& opts,
                         const Fill& fill) {
  if (n == 0) throw ValidationError("ensemble: n must be >= 1");
  const std::size_t bs = ensemble_block_size(n);
  const std::size_t nb = (n + bs - 1) / bs;
  std::vector<Accumulator> blocks(nb);
  std::vector<std::exception_ptr> errors(nb);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    std::vector<Sample> buf(grid.size());
    for (std::size_t b = next++; b < nb; b = next++) {
      try {
        Accumulator acc(grid.size());
        const std::size_t end = std::min(n, (b + 1) * bs);
        for (std::size_t i = b * bs; i < end; ++i) {
          if (fill(i, buf)) acc.add(buf);
        }
        blocks[b] = std::move(acc);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };

  unsigned workers = opts.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                       : opts.workers;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, nb));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  Accumulator total = merge_range(blocks, 0, nb);
  if (total.kept == 0) {
    throw EmptyEnsembleError("ensemble: post-selection kept none of " + std::to_string(n) +
                             " trajectories; enlarge n or lambda");
  }
  return finalize(total, grid, n);
}

using Vec3c = Eigen::Vector3cd;

Sample sample_from_pure(const Vec3c& psi, bool alive) {
  Sample s;
  s.pf = std::norm(psi(kF));
  s.pe = std::norm(psi(kE));
  s.pg = std::norm(psi(kG));
  s.alive = alive;
  const double n = s.pf + s.pe;
  if (alive && n > 1e-12) {
    const cplx fe = psi(kF) * std::conj(psi(kE));
    s.has_bloch = true;
    s.x = 2.0 * fe.real() / n;
    s.y = -2.0 * fe.imag() / n;
    s.z = (s.pf - s.pe) / n;
  }
  return s;
}

Sample sample_from_rho(const DensityMatrix3& rho, bool alive) {
  Sample s;
  s.pf = rho.pf();
  s.pe = rho.pe();
  s.pg = rho.pg();
  s.alive = alive;
  if (alive && s.pf + s.pe > 1e-12) {
    const BlochVector q = bloch_from_rho(rho);
    s.has_bloch = true;
    s.x = q.x;
    s.y = q.y;
    s.z = q.z;
  }
  return s;
}

std::optional<BlochVector> final_bloch(const Sample& s) {
  if (!s.has_bloch) return std::nullopt;
  return BlochVector{s.x, s.y, s.z};
}

}  // namespace

std::size_t ensemble_block_size(std::size_t n) {
  return std::max(kMinBlock, (n + kMaxBlocks - 1) / kMaxBlocks);
}

EnsembleStats simulate_ensemble(std::size_t n, const DensityMatrix3& rho0, const SystemParams& p,
                                double T, DriveAxis axis, const EnsembleOptions& opts) {
  const TimeGrid grid = TimeGrid::over(T, p.dt());
  const DensityMatrix3 start = rho0.normalized();
  const Mat3 U = drive_unitary(p.omega(), p.dt(), axis);

  // A pure initial state stays pure under every outcome, so the state vector
  // suffices and is much cheaper than the density matrix.
  const bool pure = std::abs(start.purity() - 1.0) < 1e-12;
  Vec3c psi0 = Vec3c::Zero();
  if (pure) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(start.matrix());
    psi0 = es.eigenvectors().col(2);
  }
  const double sdt_inv = 1.0 / std::sqrt(p.dt());
  const double pj_rate = p.gamma_g() * p.dt();
  const double sg = std::sqrt(p.gamma_e());
  const cplx phase = std::polar(1.0, -p.theta());
  const double kf = std::sqrt(1.0 - p.gamma_e() * p.dt());
  const double ke = std::sqrt(1.0 - p.gamma_g() * p.dt());
  const PostSelection& sel = opts.postselect;

  auto fill = [&](std::size_t index, std::vector<Sample>& buf) -> bool {
    Rng rng = stream_for(opts.seed, index);
    bool alive = true;
    if (pure) {
      Vec3c psi = psi0;
      buf[0] = sample_from_pure(psi, true);
      for (std::size_t i = 0; i < grid.steps; ++i) {
        const double u = rng.uniform();
        const double pe = std::norm(psi(kE));
        if (u < pj_rate * pe) {
          psi = Vec3c(0.0, 0.0, 1.0);
          alive = false;
        } else {
          const double mean = sg * 2.0 * (psi(kF) * std::conj(psi(kE)) * phase).real();
          const double r = rng.normal(mean, sdt_inv);
          const cplx f = kf * psi(kF);
          const cplx e = r * p.dt() * sg * phase * psi(kF) + ke * psi(kE);
          psi = U * Vec3c(f, e, psi(kG));
          psi /= psi.norm();
        }
        buf[i + 1] = sample_from_pure(psi, alive);
      }
    } else {
      DensityMatrix3 rho = start;
      buf[0] = sample_from_rho(rho, true);
      for (std::size_t i = 0; i < grid.steps; ++i) {
        StepResult s = sample_step(rho, p, axis, rng);
        if (s.outcome == Outcome::Jump) alive = false;
        rho = std::move(s.next);
        buf[i + 1] = sample_from_rho(rho, alive);
      }
    }
    return sel.accepts(alive, final_bloch(buf.back()));
  };
  return run_blocks(n, grid, opts, fill);
}

EnsembleStats simulate_sde_ensemble(std::size_t n, const BlochVector& q0, const SystemParams& p,
                                    double T, DriveAxis axis, const SdeOptions& sde,
                                    const EnsembleOptions& opts) {
  const TimeGrid grid = TimeGrid::over(T, p.dt());
  const PostSelection& sel = opts.postselect;
  auto fill = [&](std::size_t index, std::vector<Sample>& buf) -> bool {
    Rng rng = stream_for(opts.seed, index);
    const BlochTrajectory tr = simulate_sde(q0, p, T, axis, rng, sde);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Sample s;
      const BlochVector& q = tr.q[i];
      const bool alive = !tr.jump_time || grid.time(i) < *tr.jump_time - 0.5 * p.dt();
      if (alive) {
        s = {0.5 * (1.0 + q.z), 0.5 * (1.0 - q.z), 0.0, true, true, q.x, q.y, q.z};
      }
      buf[i] = s;
    }
    return sel.accepts(tr.survived, final_bloch(buf.back()));
  };
  return run_blocks(n, grid, opts, fill);
}

EnsembleStats stats_from_records(const std::vector<TrajectoryRecord>& records) {
  if (records.empty()) throw EmptyEnsembleError("stats_from_records: no records");
  const TimeGrid grid = records.front().grid;
  Accumulator acc(grid.size());
  std::vector<Sample> buf(grid.size());
  for (const auto& rec : records) {
    if (rec.states.size() != grid.size()) {
      throw ValidationError("stats_from_records: records on different grids");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const bool alive = !rec.jump_time || grid.time(i) < *rec.jump_time - 0.5 * grid.dt;
      buf[i] = sample_from_rho(rec.states[i], alive);
    }
    acc.add(buf);
  }
  return finalize(acc, grid, records.size());
}

}  // namespace nhq
