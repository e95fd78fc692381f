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

#include "nhq/bloch_sde.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "nhq/errors.hpp"
#include "nhq/kraus.hpp"

namespace nhq {

BlochVector bloch_drift(const BlochVector& q, const SystemParams& p, DriveAxis axis) {
  const double hg = 0.5 * p.gamma_diff();
  const double w2 = 2.0 * p.omega();
  if (axis == DriveAxis::X) {
    return {hg * q.x * q.z, hg * q.y * q.z - w2 * q.z, hg * (q.z * q.z - 1.0) + w2 * q.y};
  }
  return {w2 * q.z + hg * q.x * q.z, hg * q.y * q.z, hg * (q.z * q.z - 1.0) - w2 * q.x};
}

BlochVector bloch_backaction(const BlochVector& q, const SystemParams& p) {
  const double sg = std::sqrt(p.gamma_e());
  const double c = std::cos(p.theta());
  const double s = std::sin(p.theta());
  return {sg * ((1.0 + q.z - q.x * q.x) * c + q.x * q.y * s),
          sg * ((q.y * q.y - q.z - 1.0) * s - q.x * q.y * c),
          sg * (q.y * s - q.x * c) * (q.z + 1.0)};
}

BlochVector bloch_step_stratonovich(const BlochVector& q, double r, const SystemParams& p,
                                    DriveAxis axis) {
  return bloch_drift(q, p, axis) + r * bloch_backaction(q, p);
}

double record_signal(const BlochVector& q, double theta, double gamma_e) {
  return std::sqrt(gamma_e) * (q.x * std::cos(theta) - q.y * std::sin(theta));
}

double measurement_record(const BlochVector& q, double theta, double gamma_e, double zeta) {
  return record_signal(q, theta, gamma_e) + zeta;
}

BlochVector ito_drift(const BlochVector& q, const SystemParams& p, DriveAxis axis) {
  const double sg = std::sqrt(p.gamma_e());
  const double c = std::cos(p.theta());
  const double s = std::sin(p.theta());
  const BlochVector b = bloch_backaction(q, p);
  // Jacobian of b, row by row.
  const Eigen::Vector3d db_x = sg * Eigen::Vector3d(-2.0 * q.x * c + q.y * s, q.x * s, c);
  const Eigen::Vector3d db_y = sg * Eigen::Vector3d(-q.y * c, 2.0 * q.y * s - q.x * c, -s);
  const Eigen::Vector3d db_z = sg * Eigen::Vector3d(-c * (q.z + 1.0), s * (q.z + 1.0), q.y * s - q.x * c);
  const Eigen::Vector3d bv = b.vec();
  const BlochVector corr{0.5 * db_x.dot(bv), 0.5 * db_y.dot(bv), 0.5 * db_z.dot(bv)};
  return bloch_drift(q, p, axis) + record_signal(q, p.theta(), p.gamma_e()) * b + corr;
}

BlochVector bloch_step_ito(const BlochVector& q, double dW, const SystemParams& p, DriveAxis axis) {
  const double dt = p.dt();
  if (p.theta() != 0.0) {
    return dt * ito_drift(q, p, axis) + dW * bloch_backaction(q, p);
  }
  const double ge = p.gamma_e();
  const double gg = p.gamma_g();
  const double w = p.omega();
  const double sg = std::sqrt(ge);
  const auto [x, y, z] = std::tuple{q.x, q.y, q.z};
  BlochVector drift;
  if (axis == DriveAxis::X) {
    drift = {-0.5 * ge * x - 0.5 * gg * x * z,
             -2.0 * w * z - 0.5 * ge * y - 0.5 * gg * y * z,
             2.0 * w * y - ge * (1.0 + z) + 0.5 * gg * (1.0 - z * z)};
  } else {
    drift = {2.0 * w * z - 0.5 * ge * x - 0.5 * gg * x * z,
             -0.5 * ge * y - 0.5 * gg * y * z,
             -2.0 * w * x - ge * (1.0 + z) + 0.5 * gg * (1.0 - z * z)};
  }
  const BlochVector diff{sg * (1.0 + z - x * x), sg * (-x * y), sg * (-x * (1.0 + z))};
  return dt * drift + dW * diff;
}

BlochVector heun_step(const BlochVector& q, double dW, const SystemParams& p, DriveAxis axis) {
  const double dt = p.dt();
  const double noise = dW / dt;
  auto f = [&](const BlochVector& s) {
    return bloch_step_stratonovich(s, record_signal(s, p.theta(), p.gamma_e()) + noise, p, axis);
  };
  const BlochVector k1 = f(q);
  const BlochVector pred = q + dt * k1;
  return q + (0.5 * dt) * (k1 + f(pred));
}

namespace {

Mat2 manifold_unitary(const SystemParams& p, DriveAxis axis) {
  return drive_unitary(p.omega(), p.dt(), axis).topLeftCorner<2, 2>();
}

BlochVector kraus_bloch_step_u(const BlochVector& q, double dW, const SystemParams& p,
                               const Mat2& U) {
  const double dt = p.dt();
  const double r = record_signal(q, p.theta(), p.gamma_e()) + dW / dt;
  Mat2 k;
  k << std::sqrt(1.0 - p.gamma_e() * dt), 0.0,
      r * dt * std::sqrt(p.gamma_e()) * std::polar(1.0, -p.theta()), std::sqrt(1.0 - p.gamma_g() * dt);
  const Mat2 a = U * k;
  const Mat2 rho = a * qubit_from_bloch(q) * a.adjoint();
  const double n = rho.trace().real();
  if (!(n > 1e-300)) throw ImpossibleOutcomeError("kraus_bloch_step: vanishing outcome probability");
  return {2.0 * rho(0, 1).real() / n, -2.0 * rho(0, 1).imag() / n,
          (rho(0, 0).real() - rho(1, 1).real()) / n};
}

void check_norm(const BlochVector& q, double guard, double t) {
  if (!(q.norm() <= guard)) {
    throw NormDriftError("Bloch norm " + std::to_string(q.norm()) + " exceeds " +
                         std::to_string(guard) + " at t=" + std::to_string(t) +
                         "; reduce dt");
  }
}

BlochVector advance(SdeScheme scheme, const BlochVector& q, double dW, const SystemParams& p,
                    DriveAxis axis, const Mat2& U) {
  switch (scheme) {
    case SdeScheme::Stratonovich:
      return heun_step(q, dW, p, axis);
    case SdeScheme::Ito:
      return q + bloch_step_ito(q, dW, p, axis);
    case SdeScheme::Kraus:
      return kraus_bloch_step_u(q, dW, p, U);
  }
  return q;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

BlochVector kraus_bloch_step(const BlochVector& q, double dW, const SystemParams& p,
                             DriveAxis axis) {
  return kraus_bloch_step_u(q, dW, p, manifold_unitary(p, axis));
}

const char* to_string(SdeScheme s) {
  switch (s) {
    case SdeScheme::Stratonovich:
      return "stratonovich";
    case SdeScheme::Ito:
      return "ito";
    case SdeScheme::Kraus:
      return "kraus";
  }
  return "?";
}

BlochTrajectory simulate_sde(const BlochVector& q0, const SystemParams& p, double T, DriveAxis axis,
                             Rng& rng, const SdeOptions& opts) {
  BlochTrajectory tr;
  tr.grid = TimeGrid::over(T, p.dt());
  tr.q.assign(tr.grid.size(), BlochVector{kNaN, kNaN, kNaN});
  tr.r.assign(tr.grid.steps, kNaN);
  const Mat2 U = manifold_unitary(p, axis);
  const double sdt = std::sqrt(p.dt());
  BlochVector q = q0;
  tr.q[0] = q;
  for (std::size_t i = 0; i < tr.grid.steps; ++i) {
    if (opts.jumps) {
      const double pj = 0.5 * p.gamma_g() * (1.0 - q.z) * p.dt();
      if (rng.uniform() < pj) {
        tr.jump_time = tr.grid.time(i + 1);
        break;
      }
    }
    const double dW = sdt * rng.normal();
    tr.r[i] = record_signal(q, p.theta(), p.gamma_e()) + dW / p.dt();
    q = advance(opts.scheme, q, dW, p, axis, U);
    check_norm(q, opts.norm_guard, tr.grid.time(i + 1));
    tr.q[i + 1] = q;
  }
  tr.survived = !tr.jump_time.has_value();
  return tr;
}

BlochTrajectory integrate_with_noise(const BlochVector& q0, const SystemParams& p, DriveAxis axis,
                                     const std::vector<double>& dW, SdeScheme scheme,
                                     double norm_guard) {
  BlochTrajectory tr;
  tr.grid = TimeGrid{p.dt(), dW.size()};
  tr.q.reserve(dW.size() + 1);
  tr.r.reserve(dW.size());
  const Mat2 U = manifold_unitary(p, axis);
  BlochVector q = q0;
  tr.q.push_back(q);
  for (std::size_t i = 0; i < dW.size(); ++i) {
    tr.r.push_back(record_signal(q, p.theta(), p.gamma_e()) + dW[i] / p.dt());
    q = advance(scheme, q, dW[i], p, axis, U);
    check_norm(q, norm_guard, tr.grid.time(i + 1));
    tr.q.push_back(q);
  }
  return tr;
}

std::vector<double> coarsen_noise(const std::vector<double>& dW) {
  if (dW.size() % 2 != 0) throw ValidationError("coarsen_noise: odd number of increments");
  std::vector<double> out(dW.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = dW[2 * i] + dW[2 * i + 1];
  return out;
}

}  // namespace nhq
