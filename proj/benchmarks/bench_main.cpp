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

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "nhq/nhq.hpp"

using namespace nhq;

namespace {

const SystemParams kPrm(0.2, 1.0, 2.0, 0.0, 0.01);

void BM_KrausStep(benchmark::State& state) {
  Rng rng = stream_for(1, 0);
  DensityMatrix3 rho = density_from_bloch({0, 0, 1});
  for (auto _ : state) {
    StepResult s = sample_step(rho, kPrm, DriveAxis::X, rng);
    rho = s.outcome == Outcome::Jump ? density_from_bloch({0, 0, 1}) : s.next;
    benchmark::DoNotOptimize(rho);
  }
}
BENCHMARK(BM_KrausStep);

void BM_HeunStep(benchmark::State& state) {
  Rng rng = stream_for(1, 0);
  BlochVector q{0, 0, 1};
  for (auto _ : state) {
    q = heun_step(q, rng.normal(0.0, 0.1), kPrm, DriveAxis::X);
    if (q.norm() > 1.05) q = {0, 0, 1};
    benchmark::DoNotOptimize(q);
  }
}
BENCHMARK(BM_HeunStep);

void BM_KrausEnsemble(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const DensityMatrix3 rho0 = density_from_bloch({0, 0, 1});
  EnsembleOptions o;
  o.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_ensemble(n, rho0, kPrm, 1.0, DriveAxis::X, o));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_KrausEnsemble)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SdeEnsemble(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  EnsembleOptions o;
  o.workers = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_sde_ensemble(n, {0, 0, 1}, kPrm, 1.0, DriveAxis::X, SdeOptions{}, o));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_SdeEnsemble)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SpectrumRow(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(spectrum_row(0.2, 1.0, 0.5, DriveAxis::X));
}
BENCHMARK(BM_SpectrumRow);

void BM_FindEp(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_ep(0.2, 1.0, DriveAxis::X));
}
BENCHMARK(BM_FindEp)->Unit(benchmark::kMillisecond);

void BM_HybridPovmResidual(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(hybrid_povm_residual(kPrm));
}
BENCHMARK(BM_HybridPovmResidual)->Unit(benchmark::kMicrosecond);

void BM_IntegratePath(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_path({0, 0, 1}, Eigen::Vector3d(0.1, -0.5, 0.2), 2.0, 1e-3, kPrm, DriveAxis::X));
  }
}
BENCHMARK(BM_IntegratePath)->Unit(benchmark::kMillisecond);

void BM_Shoot(benchmark::State& state) {
  const double T = noise_free_arrival_time({0, 0, 1}, {0, -1, 0}, kPrm, DriveAxis::X, 0.1, 5.0);
  for (auto _ : state) benchmark::DoNotOptimize(shoot({0, 0, 1}, {0, -1, 0}, T, kPrm, DriveAxis::X));
}
BENCHMARK(BM_Shoot)->Unit(benchmark::kMillisecond);

void BM_FixedPoints(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(find_fixed_points(kPrm));
}
BENCHMARK(BM_FixedPoints)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
