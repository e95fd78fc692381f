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

#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support.hpp"

using namespace nhq;
using nhq::testing::max_abs;

namespace {

const double kPi = std::numbers::pi;

DensityMatrix3 plus_state() {
  const double h = 1.0 / std::sqrt(2.0);
  return density_from_amplitudes(0.0, h, h);
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_stats(const EnsembleStats& a, const EnsembleStats& b) {
  return same_bits(a.pf_mean, b.pf_mean) && same_bits(a.pf_se, b.pf_se) &&
         same_bits(a.pe_mean, b.pe_mean) && same_bits(a.pg_mean, b.pg_mean) &&
         same_bits(a.pf_norm, b.pf_norm) && same_bits(a.x_mean, b.x_mean) &&
         same_bits(a.y_mean, b.y_mean) && same_bits(a.z_mean, b.z_mean) &&
         a.n_survived == b.n_survived && a.n_kept == b.n_kept;
}

BlochVector bloch_of(const Mat2& rho) {
  const double n = (rho(0, 0) + rho(1, 1)).real();
  return {2.0 * rho(0, 1).real() / n, -2.0 * rho(0, 1).imag() / n, (rho(0, 0) - rho(1, 1)).real() / n};
}

}  // namespace

TEST_SUITE("trajectory_engine") {

TEST_CASE("ground state never jumps and is left alone by the drive") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  const auto g = DensityMatrix3::ground();
  CHECK(jump_probability(g, p) == 0.0);
  Rng rng = stream_for(1, 0);
  for (int i = 0; i < 100; ++i) {
    const auto s = sample_step(g, p, DriveAxis::X, rng);
    CHECK(s.outcome == Outcome::NoJump);
    CHECK(max_abs(s.next.matrix() - g.matrix()) < 1e-15);
  }
}

TEST_CASE("excited state jump probability is gamma_g dt") {
  const SystemParams p(0.2, 1.0, 0.0, 0.0, 0.01);
  CHECK(jump_probability(DensityMatrix3::excited_e(), p) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(jump_probability(DensityMatrix3::excited_f(), p) == 0.0);
  // Frequency of jumps from |e> over many single steps.
  Rng rng = stream_for(2, 0);
  int jumps = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    if (sample_step(DensityMatrix3::excited_e(), p, DriveAxis::X, rng).outcome == Outcome::Jump) ++jumps;
  }
  const double se = std::sqrt(0.01 * 0.99 / n);
  CHECK(std::abs(jumps / double(n) - 0.01) < 4.0 * se);
}

TEST_CASE("record mean of the equal superposition") {
  const SystemParams p(0.2, 1.0, 0.0, 0.0, 0.01);
  CHECK(record_mean(plus_state(), p) == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
  CHECK(std::abs(record_mean(plus_state(), p.with_theta(kPi / 2))) < 1e-15);
}

TEST_CASE("measurement_record substitutes the Bloch vector") {
  CHECK(measurement_record({0.5, 0.3, 0.1}, 0.0, 0.2, 0.0) == doctest::Approx(0.5 * std::sqrt(0.2)));
  CHECK(measurement_record({0.5, 0.3, 0.1}, kPi / 2, 0.2, 0.7) ==
        doctest::Approx(-0.3 * std::sqrt(0.2) + 0.7));
}

TEST_CASE("record variance is 1/dt") {
  const SystemParams p(0.2, 1.0, 0.0, 0.0, 0.01);
  Rng rng = stream_for(3, 0);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = *sample_step(DensityMatrix3::ground(), p, DriveAxis::X, rng).r;
    s += r;
    s2 += r * r;
  }
  const double var = s2 / n - (s / n) * (s / n);
  CHECK(std::abs(var * p.dt() - 1.0) < 0.02);
}

TEST_CASE("undriven lossless trajectory is constant with zero-mean records") {
  const SystemParams p(0.0, 0.0, 0.0, 0.0, 0.01);
  Rng rng = stream_for(4, 0);
  const auto rec = simulate_trajectory(plus_state(), p, 50.0, DriveAxis::X, rng);
  for (const auto& s : rec.states) CHECK(max_abs(s.matrix() - plus_state().matrix()) < 1e-12);
  double mean = 0.0;
  for (double r : rec.records) mean += r;
  mean /= rec.records.size();
  CHECK(std::abs(mean) < 4.0 * std::sqrt(1.0 / p.dt() / rec.records.size()));
  CHECK(rec.survived);
}

TEST_CASE("trajectories stay pure and collapse to the ground state after a jump") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  int jumped = 0;
  for (std::uint64_t i = 0; i < 40; ++i) {
    Rng rng = stream_for(5, i);
    const auto rec = simulate_trajectory(DensityMatrix3::excited_f(), p, 5.0, DriveAxis::X, rng);
    CHECK(rec.survived == !rec.jump_time.has_value());
    for (const auto& s : rec.states) CHECK(std::abs(s.purity() - 1.0) < 1e-8);
    if (rec.jump_time) {
      ++jumped;
      const auto k = static_cast<std::size_t>(std::llround(*rec.jump_time / p.dt()));
      for (std::size_t j = k; j < rec.states.size(); ++j) {
        CHECK(max_abs(rec.states[j].matrix() - DensityMatrix3::ground().matrix()) == 0.0);
        CHECK_FALSE(rec.bloch(j).has_value());
      }
      CHECK(std::isnan(rec.records[k - 1]));
    }
  }
  CHECK(jumped > 0);
}

TEST_CASE("a replayed seed gives a bit-identical trajectory") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  Rng a = stream_for(77, 12);
  Rng b = stream_for(77, 12);
  const auto ra = simulate_trajectory(DensityMatrix3::excited_f(), p, 5.0, DriveAxis::Y, a);
  const auto rb = simulate_trajectory(DensityMatrix3::excited_f(), p, 5.0, DriveAxis::Y, b);
  CHECK(same_bits(ra.records, rb.records));
  CHECK(ra.jump_time == rb.jump_time);
  Rng c = stream_for(77, 13);
  const auto rc = simulate_trajectory(DensityMatrix3::excited_f(), p, 5.0, DriveAxis::Y, c);
  CHECK_FALSE(same_bits(ra.records, rc.records));
}

TEST_CASE("an ensemble of one reproduces its trajectory") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  EnsembleOptions o;
  o.seed = 99;
  const auto st = simulate_ensemble(1, DensityMatrix3::excited_f(), p, 5.0, DriveAxis::X, o);
  Rng rng = stream_for(99, 0);
  const auto rec = simulate_trajectory(DensityMatrix3::excited_f(), p, 5.0, DriveAxis::X, rng);
  REQUIRE(st.times.size() == rec.states.size());
  for (std::size_t i = 0; i < rec.states.size(); ++i) {
    CHECK(std::abs(st.pf_mean[i] - rec.states[i].pf()) < 1e-12);
    CHECK(std::abs(st.pe_mean[i] - rec.states[i].pe()) < 1e-12);
    CHECK(std::abs(st.pg_mean[i] - rec.states[i].pg()) < 1e-12);
  }
}

TEST_CASE("unconditioned populations sum to one") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  const auto st = simulate_ensemble(200, DensityMatrix3::excited_f(), p, 5.0, DriveAxis::X);
  for (std::size_t i = 0; i < st.times.size(); ++i) {
    CHECK(std::abs(st.pf_mean[i] + st.pe_mean[i] + st.pg_mean[i] - 1.0) < 1e-9);
  }
}

TEST_CASE("standard errors shrink as one over root n") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  const auto a = simulate_ensemble(2000, DensityMatrix3::excited_f(), p, 5.0, DriveAxis::X);
  const auto b = simulate_ensemble(4000, DensityMatrix3::excited_f(), p, 5.0, DriveAxis::X);
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 50; i < a.times.size(); ++i) {
    sa += a.pf_se[i];
    sb += b.pf_se[i];
  }
  CHECK(std::abs(sa / sb / std::sqrt(2.0) - 1.0) < 0.2);
}

TEST_CASE("ensemble statistics do not depend on the worker count") {
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.01);
  EnsembleOptions o;
  o.seed = 4242;
  o.workers = 1;
  const auto a = simulate_ensemble(700, DensityMatrix3::excited_f(), p, 3.0, DriveAxis::X, o);
  for (unsigned w : {2u, 3u, 8u}) {
    o.workers = w;
    CHECK(same_stats(a, simulate_ensemble(700, DensityMatrix3::excited_f(), p, 3.0, DriveAxis::X, o)));
  }
  SdeOptions s;
  o.workers = 1;
  const auto c = simulate_sde_ensemble(500, {0, 0, 1}, p, 3.0, DriveAxis::Y, s, o);
  o.workers = 4;
  CHECK(same_stats(c, simulate_sde_ensemble(500, {0, 0, 1}, p, 3.0, DriveAxis::Y, s, o)));
}

TEST_CASE("unconditioned ensemble follows the three-level Lindblad solution") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  const auto st = simulate_ensemble(400, DensityMatrix3::excited_f(), p, 5.0, DriveAxis::X);
  const auto ref = evolve_lindblad(p, DriveAxis::X, DensityMatrix3::excited_f().matrix(),
                                   TimeGrid::over(5.0, 0.01));
  for (std::size_t i = 0; i < st.times.size(); i += 25) {
    CHECK(std::abs(st.pg_mean[i] - ref[i](kG, kG).real()) <= 3.0 * st.pg_se[i] + 1e-12);
  }
}

TEST_CASE("survivor fraction equals the trace of the qubit evolution") {
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.01);
  const std::size_t n = 2000;
  const auto st = simulate_ensemble(n, DensityMatrix3::excited_f(), p, 3.0, DriveAxis::X);
  Mat2 r0 = Mat2::Zero();
  r0(0, 0) = 1.0;
  const auto ref = evolve_ode(build_liouvillian(p, DriveAxis::X), r0, TimeGrid::over(3.0, 0.01));
  for (std::size_t i = 0; i < st.times.size(); i += 20) {
    const double f = ref[i].trace().real();
    const double se = std::sqrt(f * (1.0 - f) / n);
    CHECK(std::abs(st.survivor_fraction(i) - f) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("without ground decay the survivor mean equals the Liouvillian mean") {
  // Both drive axes and both quadratures.
  const SystemParams base(0.2, 0.0, 1.0, 0.0, 0.005);
  Mat2 r0 = Mat2::Zero();
  r0(0, 0) = 1.0;
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    for (double theta : {0.0, kPi / 2}) {
      const SystemParams p = base.with_theta(theta);
      const auto ref = evolve_ode(build_liouvillian(p, axis), r0, TimeGrid::over(4.0, 0.005));
      const auto st = simulate_sde_ensemble(1500, {0, 0, 1}, p, 4.0, axis, SdeOptions{});
      for (std::size_t i = 0; i < st.times.size(); i += 80) {
        const BlochVector q = bloch_of(ref[i]);
        CHECK(std::abs(st.x_mean[i] - q.x) <= 3.0 * st.x_se[i] + 1e-12);
        CHECK(std::abs(st.y_mean[i] - q.y) <= 3.0 * st.y_se[i] + 1e-12);
        CHECK(std::abs(st.z_mean[i] - q.z) <= 3.0 * st.z_se[i] + 1e-12);
      }
    }
  }
}

TEST_CASE("Ito ensemble without ground decay matches the Liouvillian mean") {
  const SystemParams p(0.5, 0.0, 1.0, 0.0, 0.001);
  Mat2 r0 = Mat2::Zero();
  r0(0, 0) = 1.0;
  SdeOptions s;
  s.scheme = SdeScheme::Ito;
  s.norm_guard = INFINITY;
  const auto ref = evolve_ode(build_liouvillian(p, DriveAxis::X), r0, TimeGrid::over(2.0, 0.001));
  const auto st = simulate_sde_ensemble(1500, {0, 0, 1}, p, 2.0, DriveAxis::X, s);
  for (std::size_t i = 0; i < st.times.size(); i += 200) {
    const BlochVector q = bloch_of(ref[i]);
    CHECK(std::abs(st.x_mean[i] - q.x) <= 3.0 * st.x_se[i] + 1e-12);
    CHECK(std::abs(st.z_mean[i] - q.z) <= 3.0 * st.z_se[i] + 1e-12);
  }
}

TEST_CASE("postselection filters") {
  const SystemParams p(0.2, 0.0, 3.0, 0.0, 0.01);
  std::vector<TrajectoryRecord> recs;
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = stream_for(6, i);
    recs.push_back(simulate_trajectory(DensityMatrix3::excited_f(), p, 2.0, DriveAxis::X, rng));
  }
  CHECK(postselect(recs, PostSelection::no_jump()).size() == recs.size());
  CHECK(postselect(recs, PostSelection::none()).size() == recs.size());
  CHECK_THROWS_AS(postselect(recs, PostSelection::final_state({0, -1, 0}, 1e-9)), EmptyEnsembleError);
  CHECK_THROWS_AS(PostSelection::final_state({0, -1, 0}, 0.0), ValidationError);
  CHECK_THROWS_AS(PostSelection::final_state({0, -1, 0}, 1.0), ValidationError);

  const auto q_end = *recs[3].bloch(recs[3].states.size() - 1);
  const auto kept = postselect(recs, PostSelection::final_state(q_end, 0.01));
  CHECK(kept.size() >= 1);
  for (const auto& r : kept) CHECK(distance(*r.bloch(r.states.size() - 1), q_end) < 0.01);
}

TEST_CASE("final-state ensemble postselection with an unreachable target is empty") {
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.01);
  EnsembleOptions o;
  o.postselect = PostSelection::final_state({0, 0, -1}, 1e-6);
  CHECK_THROWS_AS(simulate_ensemble(50, DensityMatrix3::excited_f(), p, 1.0, DriveAxis::X, o),
                  EmptyEnsembleError);
}

TEST_CASE("Stratonovich derivative at the north pole") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  for (double r : {-7.0, 0.0, 2.5}) {
    const BlochVector d = bloch_step_stratonovich({0, 0, 1}, r, p, DriveAxis::X);
    CHECK(d.x == doctest::Approx(2.0 * r * std::sqrt(0.2)));
    CHECK(d.y == doctest::Approx(-6.0));
    CHECK(std::abs(d.z) < 1e-15);
    const BlochVector dy = bloch_step_stratonovich({0, 0, 1}, r, p, DriveAxis::Y);
    CHECK(std::abs(dy.y) < 1e-15);
  }
}

TEST_CASE("Stratonovich derivative equals the normalized Kraus generator") {
  // d/dt of the normalized no-jump update at a fixed record, by central differences.
  auto& g = nhq::testing::test_rng();
  for (double theta : {0.0, 0.7, kPi / 2}) {
    for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
      const SystemParams p(0.3, 0.8, 1.7, theta, 1e-4);
      const BlochVector q = nhq::testing::random_pure_bloch(g);
      const double r = 1.3;
      const Mat2 rho = qubit_from_bloch(q);
      const Mat4 L = build_liouvillian(p, axis).entries;
      // No-jump generator: the Liouvillian without the |f> -> |e> refeeding
      // term gamma_e s rho s^dag, plus the record term
      // sqrt(gamma_e) r (e^{-i theta} s rho + e^{i theta} rho s^dag), s = |e><f|.
      Mat2 s = Mat2::Zero();
      s(1, 0) = 1.0;
      const cplx ph = std::exp(cplx(0.0, -theta));
      const Mat2 drho = unvectorize(L * vectorize(rho)) - p.gamma_e() * s * rho * s.adjoint() +
                        std::sqrt(p.gamma_e()) * r * (ph * s * rho + std::conj(ph) * rho * s.adjoint());
      const double h = 1e-6;
      const BlochVector qp = bloch_of(rho + h * drho);
      const BlochVector qm = bloch_of(rho - h * drho);
      const BlochVector fd = (1.0 / (2.0 * h)) * (qp - qm);
      const BlochVector an = bloch_step_stratonovich(q, r, p, axis);
      CHECK(distance(fd, an) < 1e-6);
    }
  }
}

TEST_CASE("noise-free drift matches the non-Hermitian propagator") {
  const SystemParams p(0.0, 1.0, 0.8, 0.0, 0.01);
  Eigen::Matrix2cd H;
  H << cplx(0, 0), cplx(0.8, 0), cplx(0.8, 0), cplx(0, -0.5);
  const Eigen::Matrix2cd U = nhq::testing::expm_taylor(Eigen::Matrix2cd(cplx(0, -1) * H * 0.001));
  Eigen::Vector2cd psi(1.0, 0.0);
  BlochVector q{0, 0, 1};
  auto f = [&](const BlochVector& v) { return bloch_drift(v, p, DriveAxis::X); };
  for (int i = 0; i < 3000; ++i) {
    const BlochVector k1 = f(q);
    const BlochVector k2 = f(q + 0.0005 * k1);
    const BlochVector k3 = f(q + 0.0005 * k2);
    const BlochVector k4 = f(q + 0.001 * k3);
    q = q + (0.001 / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    psi = U * psi;
  }
  const Mat2 rho = psi * psi.adjoint();
  CHECK(distance(q, bloch_of(rho)) < 1e-9);
  CHECK(std::abs(q.norm() - 1.0) < 1e-9);
}

TEST_CASE("Ito increment without noise at the north pole") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  const BlochVector d = bloch_step_ito({0, 0, 1}, 0.0, p, DriveAxis::X);
  CHECK(std::abs(d.x) < 1e-15);
  CHECK(d.y == doctest::Approx(-6.0 * 0.01));
  CHECK(d.z == doctest::Approx(-2.0 * 0.2 * 0.01));
}

TEST_CASE("printed Ito drift equals the converted Stratonovich drift") {
  auto& g = nhq::testing::test_rng();
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.01);
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    for (int i = 0; i < 20; ++i) {
      const BlochVector q = nhq::testing::random_pure_bloch(g);
      const BlochVector printed = (1.0 / p.dt()) * bloch_step_ito(q, 0.0, p, axis);
      CHECK(distance(printed, ito_drift(q, p, axis)) < 1e-12);
    }
  }
}

TEST_CASE("coarsened noise sums consecutive pairs") {
  const std::vector<double> dW{1.0, 2.0, -0.5, 0.25};
  const auto c = coarsen_noise(dW);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 3.0);
  CHECK(c[1] == -0.25);
}

TEST_CASE("Kraus and Stratonovich trajectories converge linearly in dt") {
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.0025);
  std::vector<double> diff(3, 0.0);
  const int streams = 10;
  for (int sidx = 0; sidx < streams; ++sidx) {
    Rng rng = stream_for(31, sidx);
    std::vector<double> dW(2000);
    for (double& w : dW) w = rng.normal(0.0, std::sqrt(p.dt()));
    for (int level = 0; level < 3; ++level) {
      const SystemParams pl = p.with_dt(p.dt() * (1 << level));
      const auto a = integrate_with_noise({0, 0, 1}, pl, DriveAxis::X, dW, SdeScheme::Kraus, INFINITY);
      const auto b = integrate_with_noise({0, 0, 1}, pl, DriveAxis::X, dW, SdeScheme::Stratonovich, INFINITY);
      double worst = 0.0;
      for (std::size_t i = 0; i < a.q.size(); ++i) worst = std::max(worst, distance(a.q[i], b.q[i]));
      diff[level] += worst / streams;
      dW = coarsen_noise(dW);
    }
  }
  CHECK(diff[1] / diff[0] > 1.6);
  CHECK(diff[2] / diff[1] > 1.6);
}

TEST_CASE("jump-enabled Bloch trajectories stop at the jump") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  SdeOptions s;
  s.jumps = true;
  int jumped = 0;
  for (std::uint64_t i = 0; i < 30; ++i) {
    Rng rng = stream_for(8, i);
    const auto tr = simulate_sde({0, 0, 1}, p, 5.0, DriveAxis::X, rng, s);
    CHECK(tr.survived == !tr.jump_time.has_value());
    if (tr.jump_time) {
      ++jumped;
      const auto k = static_cast<std::size_t>(std::llround(*tr.jump_time / p.dt()));
      for (std::size_t j = k; j < tr.q.size(); ++j) CHECK(std::isnan(tr.q[j].x));
    }
  }
  CHECK(jumped > 0);
}

TEST_CASE("norm guard aborts runaway integration") {
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.01);
  std::vector<double> dW(10, 0.0);
  CHECK_THROWS_AS(integrate_with_noise({0, 0, 1.2}, p, DriveAxis::X, dW, SdeScheme::Ito), NormDriftError);
}

}  // TEST_SUITE
