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

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "support.hpp"

using namespace nhq;
using nhq::testing::max_abs;

namespace {

Mat2 proj_f() {
  Mat2 r = Mat2::Zero();
  r(0, 0) = 1.0;
  return r;
}

std::vector<cplx> sorted_eigs(const Mat4& m) {
  Eigen::ComplexEigenSolver<Mat4> es(m);
  std::vector<cplx> v(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
    return std::abs(a.real() - b.real()) > 1e-9 ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

// Non-trivial cubic factor of the characteristic polynomial in s = omega^2 for
// gamma_e = 0.2, gamma_g = 1 (coefficients scaled by 125 to integers). The EP is
// where its discriminant vanishes.
double cubic_discriminant(double s) {
  const double a = 25.0, b = 45.0, c = 100.0 * s + 23.0, d = 50.0 * s + 3.0;
  return 18.0 * a * b * c * d - 4.0 * b * b * b * d + b * b * c * c - 4.0 * a * c * c * c -
         27.0 * a * a * d * d;
}

double ep_oracle() {
  double lo = 0.01, hi = 0.04;  // in s = omega^2
  const double flo = cubic_discriminant(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((cubic_discriminant(mid) > 0.0) == (flo > 0.0)) lo = mid; else hi = mid;
  }
  return std::sqrt(0.5 * (lo + hi));
}

}  // namespace

TEST_SUITE("liouvillian") {

TEST_CASE("undriven spectrum is block triangular") {
  const SystemParams p(0.2, 1.0, 0.0, 0.0, 0.01);
  const auto e = sorted_eigs(build_liouvillian(p, DriveAxis::X).entries);
  const double expect[] = {-1.0, -0.6, -0.6, -0.2};
  for (int k = 0; k < 4; ++k) {
    CHECK(std::abs(e[k] - cplx(expect[k], 0.0)) < 1e-12);
  }
}

TEST_CASE("lossless spectrum is the unitary commutator spectrum") {
  for (double w : {0.3, 1.0, 2.5}) {
    const SystemParams p(0.0, 0.0, w, 0.0, 0.01);
    const auto e = sorted_eigs(build_liouvillian(p, DriveAxis::X).entries);
    std::vector<double> im;
    for (auto z : e) {
      CHECK(std::abs(z.real()) < 1e-12);
      im.push_back(z.imag());
    }
    std::sort(im.begin(), im.end());
    CHECK(im[0] == doctest::Approx(-2.0 * w).epsilon(1e-12));
    CHECK(std::abs(im[1]) < 1e-12);
    CHECK(std::abs(im[2]) < 1e-12);
    CHECK(im[3] == doctest::Approx(2.0 * w).epsilon(1e-12));
  }
}

TEST_CASE("strong drive gives one oscillating pair and two real modes") {
  // Above the EP the cubic factor has a complex pair and one real root; the
  // coherence mode -(gamma_e + gamma_g)/2 is real at every drive strength.
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.01);
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    const auto e = sorted_eigs(build_liouvillian(p, axis).entries);
    int complex_modes = 0;
    for (auto z : e) {
      CHECK(z.real() < 0.0);
      if (std::abs(z.imag()) > 1e-6) ++complex_modes;
    }
    CHECK(complex_modes == 2);
    bool has_coherence_mode = false;
    for (auto z : e) has_coherence_mode |= std::abs(z - cplx(-0.6, 0.0)) < 1e-10;
    CHECK(has_coherence_mode);
  }
}

TEST_CASE("eigenvalue real parts are non-positive over the default scan") {
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    for (const auto& row : scan_spectrum(0.2, 1.0, 0.05, 3.0, 400, axis)) {
      for (auto z : row.eigenvalues) CHECK(z.real() <= 1e-12);
    }
  }
}

TEST_CASE("x and y drive spectra coincide") {
  for (double w : {0.0, 0.1, 0.3, 1.0, 2.0, 3.0}) {
    for (double ge : {0.0, 0.2, 1.0}) {
      const SystemParams p(ge, 1.0, w, 0.0, 0.01);
      const auto ex = sorted_eigs(build_liouvillian(p, DriveAxis::X).entries);
      const auto ey = sorted_eigs(build_liouvillian(p, DriveAxis::Y).entries);
      for (int k = 0; k < 4; ++k) CHECK(std::abs(ex[k] - ey[k]) < 1e-10);
    }
  }
}

TEST_CASE("trace rate identity on random states") {
  auto& g = nhq::testing::test_rng();
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.01);
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    const Mat4 L = build_liouvillian(p, axis).entries;
    for (int i = 0; i < 100; ++i) {
      const Mat2 rho = nhq::testing::random_qubit_density(g);
      const Mat2 drho = unvectorize(L * vectorize(rho));
      const cplx rate = drho(0, 0) + drho(1, 1);
      CHECK(std::abs(rate - cplx(-p.gamma_g() * rho(1, 1).real(), 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("generator matches the qubit block of the three-level Lindblad equation") {
  // With gamma_g = 0 and no population in |g>, the |f>-|e> block evolves under
  // the qubit generator apart from the e -> g loss, which then vanishes.
  auto& g = nhq::testing::test_rng();
  const SystemParams p(0.7, 0.0, 1.3, 0.0, 0.01);
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    const Mat4 L = build_liouvillian(p, axis).entries;
    for (int i = 0; i < 20; ++i) {
      const Mat2 rho = nhq::testing::random_qubit_density(g);
      Mat3 r3 = Mat3::Zero();
      r3.block<2, 2>(0, 0) = rho;
      const Mat3 d3 = lindblad_rhs(r3, p, axis);
      const Mat2 d2 = unvectorize(L * vectorize(rho));
      CHECK(max_abs(Mat2(d3.block<2, 2>(0, 0)) - d2) < 1e-13);
    }
  }
}

TEST_CASE("vectorize and unvectorize are inverse and row-major") {
  Mat2 m;
  m << cplx(1, 0), cplx(2, 3), cplx(4, 5), cplx(6, 0);
  const Vec4 v = vectorize(m);
  CHECK(v(0) == cplx(1, 0));
  CHECK(v(1) == cplx(2, 3));
  CHECK(v(2) == cplx(4, 5));
  CHECK(v(3) == cplx(6, 0));
  CHECK(max_abs(unvectorize(v) - m) == 0.0);
}

TEST_CASE("spectral decomposition is biorthonormal and complete") {
  auto& g = nhq::testing::test_rng();
  for (double w : {0.05, 0.3, 1.0, 2.0}) {
    for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
      const SystemParams p(0.2, 1.0, w, 0.0, 0.01);
      const Mat2 rho0 = nhq::testing::random_qubit_density(g);
      const auto s = spectral_decompose(build_liouvillian(p, axis), rho0);
      REQUIRE(s.conditioning > kEpConditioning);
      Mat2 recon = Mat2::Zero();
      for (int j = 0; j < 4; ++j) {
        for (int k = 0; k < 4; ++k) {
          const cplx ov = (s.left[j] * s.right[k]).trace();
          CHECK(std::abs(ov - cplx(j == k ? 1.0 : 0.0, 0.0)) < 1e-9);
        }
        recon += s.weights[j] * s.right[j];
      }
      CHECK(max_abs(recon - rho0) < 1e-9);
      CHECK(max_abs(evolve_spectral(s, 0.0) - rho0) < 1e-9);
    }
  }
}

TEST_CASE("undriven excited-state decay follows the closed form") {
  const SystemParams p(0.2, 1.0, 0.0, 0.0, 0.01);
  const auto s = spectral_decompose(build_liouvillian(p, DriveAxis::X), proj_f());
  for (double t : {0.0, 0.5, 1.0, 2.5, 5.0, 10.0}) {
    const Mat2 r = evolve_spectral(s, t);
    CHECK(r(0, 0).real() == doctest::Approx(std::exp(-0.2 * t)).epsilon(1e-12));
    const double ee = 0.2 / 0.8 * (std::exp(-0.2 * t) - std::exp(-1.0 * t));
    CHECK(std::abs(r(1, 1).real() - ee) < 1e-12);
  }
  CHECK(evolve_spectral(s, 5.0)(0, 0).real() == doctest::Approx(0.36787944117144233));
}

TEST_CASE("spectral decomposition refuses the exceptional point") {
  const SystemParams p(0.0, 1.0, 0.25, 0.0, 0.01);
  CHECK_THROWS_AS(spectral_decompose(build_liouvillian(p, DriveAxis::X), proj_f()),
                  EpDegenerateError);
}

TEST_CASE("spectral and RK4 evolution agree away from the exceptional point") {
  for (double w : {0.05, 0.3, 2.0, 3.0}) {
    for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
      const SystemParams p(0.2, 1.0, w, 0.0, 0.01);
      const auto L = build_liouvillian(p, axis);
      const auto s = spectral_decompose(L, proj_f());
      const TimeGrid grid = TimeGrid::over(5.0, 0.001);
      const auto path = evolve_ode(L, proj_f(), grid);
      double worst = 0.0;
      for (std::size_t i = 0; i < grid.size(); i += 100) {
        worst = std::max(worst, max_abs(path[i] - evolve_spectral(s, grid.time(i))));
      }
      CHECK(worst < 1e-8);
    }
  }
}

TEST_CASE("strongly driven populations relax to zero") {
  const SystemParams p(0.2, 1.0, 2.0, 0.0, 0.01);
  const auto s = spectral_decompose(build_liouvillian(p, DriveAxis::X), proj_f());
  const Mat2 r = evolve_spectral(s, 200.0);
  CHECK(max_abs(r) < 1e-12);
}

TEST_CASE("zero generator leaves the state unchanged") {
  const SystemParams p(0.0, 0.0, 0.0, 0.0, 0.01);
  auto& g = nhq::testing::test_rng();
  const Mat2 rho0 = nhq::testing::random_qubit_density(g);
  const auto path = evolve_ode(build_liouvillian(p, DriveAxis::X), rho0, TimeGrid::over(1.0, 0.01));
  for (const auto& r : path) CHECK(max_abs(r - rho0) == 0.0);
}

TEST_CASE("qubit evolution never increases the trace") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  const auto path = evolve_ode(build_liouvillian(p, DriveAxis::Y), proj_f(), TimeGrid::over(5.0, 0.01));
  for (std::size_t i = 1; i < path.size(); ++i) {
    CHECK(path[i].trace().real() <= path[i - 1].trace().real() + 1e-15);
  }
}

TEST_CASE("three-level Lindblad evolution conserves the trace") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.01);
  const Mat3 rho0 = DensityMatrix3::excited_f().matrix();
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    const auto path = evolve_lindblad(p, axis, rho0, TimeGrid::over(5.0, 0.01));
    for (const auto& r : path) {
      CHECK(std::abs(r.trace().real() - 1.0) < 1e-10);
      CHECK(max_abs(Mat3(r - r.adjoint())) < 1e-12);
    }
    CHECK(path.back()(kG, kG).real() > 0.5);
  }
}

TEST_CASE("step size rejection when the local error is too large") {
  const SystemParams p(0.2, 1.0, 3.0, 0.0, 0.1);
  CHECK_THROWS_AS(evolve_ode(build_liouvillian(p, DriveAxis::X), proj_f(), TimeGrid::over(5.0, 0.1)),
                  StepSizeError);
  OdeOptions loose;
  loose.check_error = false;
  CHECK_NOTHROW(evolve_ode(build_liouvillian(p, DriveAxis::X), proj_f(), TimeGrid::over(5.0, 0.1), loose));
}

TEST_CASE("normalized evolution keeps unit trace and matches the renormalized linear solution") {
  for (double w : {0.05, 0.3, 2.0}) {
    const SystemParams p(0.2, 1.0, w, 0.0, 0.01);
    const auto L = build_liouvillian(p, DriveAxis::X);
    const auto s = spectral_decompose(L, proj_f());
    const TimeGrid grid = TimeGrid::over(5.0, 0.001);
    const auto path = evolve_normalized(L, proj_f(), grid);
    for (std::size_t i = 0; i < grid.size(); i += 50) {
      CHECK(std::abs(path[i].trace().real() - 1.0) < 1e-9);
      const Mat2 lin = evolve_spectral(s, grid.time(i));
      const double ref = lin(0, 0).real() / (lin(0, 0).real() + lin(1, 1).real());
      CHECK(std::abs(path[i](0, 0).real() - ref) < 1e-7);
    }
  }
}

TEST_CASE("normalized evolution without ground decay is the linear evolution") {
  const SystemParams p(0.2, 0.0, 1.0, 0.0, 0.01);
  const auto L = build_liouvillian(p, DriveAxis::X);
  const TimeGrid grid = TimeGrid::over(3.0, 0.01);
  const auto a = evolve_normalized(L, proj_f(), grid);
  const auto b = evolve_ode(L, proj_f(), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(max_abs(a[i] - b[i]) < 1e-14);
}

TEST_CASE("undriven normalized population matches a quadrature reference") {
  const double ge = 0.2, gg = 1.0;
  const SystemParams p(ge, gg, 0.0, 0.0, 0.01);
  const TimeGrid grid = TimeGrid::over(8.0, 0.01);
  const auto path = evolve_normalized(build_liouvillian(p, DriveAxis::X), proj_f(), grid);
  for (std::size_t i = 0; i < grid.size(); i += 80) {
    const double t = grid.time(i);
    // rho_ee(t) = gamma_e int_0^t exp(-gamma_g (t-s)) exp(-gamma_e s) ds by composite Simpson.
    const int n = 2000;
    const double h = t / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double sk = k * h;
      const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += w * std::exp(-gg * (t - sk) - ge * sk);
    }
    const double ee = ge * acc * h / 3.0;
    const double ff = std::exp(-ge * t);
    CHECK(std::abs(path[i](0, 0).real() - ff / (ff + ee)) < 1e-9);
  }
}

TEST_CASE("normalized population is monotone below the exceptional point") {
  const SystemParams p(0.2, 1.0, 0.1, 0.0, 0.01);
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    const auto path = evolve_normalized(build_liouvillian(p, axis), proj_f(), TimeGrid::over(40.0, 0.01));
    for (std::size_t i = 1; i < path.size(); ++i) {
      CHECK(path[i](0, 0).real() <= path[i - 1](0, 0).real() + 1e-14);
    }
  }
}

TEST_CASE("normalized population undershoots just above the exceptional point") {
  const SystemParams p(0.2, 1.0, 0.3, 0.0, 0.01);
  const auto path = evolve_normalized(build_liouvillian(p, DriveAxis::X), proj_f(), TimeGrid::over(20.0, 0.01));
  double lowest = 1.0;
  for (const auto& r : path) lowest = std::min(lowest, r(0, 0).real());
  CHECK(lowest < path.back()(0, 0).real() - 0.01);
}

TEST_CASE("find_ep matches the discriminant oracle") {
  const double oracle = ep_oracle();
  CHECK(oracle == doctest::Approx(0.1437951462567933).epsilon(1e-12));
  for (auto axis : {DriveAxis::X, DriveAxis::Y}) {
    const auto ep = find_ep(0.2, 1.0, axis);
    CHECK(std::abs(ep.omega_ep - oracle) < 1e-6);
    CHECK(ep.overlap > 0.999);
  }
}

TEST_CASE("find_ep recovers the two-level exceptional point") {
  const auto ep = find_ep(0.0, 1.0, DriveAxis::X);
  CHECK(std::abs(ep.omega_ep - 0.25) < 1e-6);
  CHECK(ep.overlap > 0.999);
}

TEST_CASE("find_ep reports no exceptional point for a lossless qubit") {
  CHECK_THROWS_AS(find_ep(0.0, 0.0, DriveAxis::X), NotFoundError);
}

}  // TEST_SUITE
