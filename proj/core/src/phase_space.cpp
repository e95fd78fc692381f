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

#include "nhq/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace nhq {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

Coefficients1D reduce_1d(double t, const SystemParams& prm) {
  const double ge = prm.gamma_e();
  const double gg = prm.gamma_g();
  const double c = std::cos(t);
  const double s = std::sin(t);
  Coefficients1D k;
  k.A = 0.5 * ge * (1.0 + c) * (1.0 + c);
  k.B = 2.0 * prm.omega() + (1.5 * ge - 0.5 * gg) * s + 0.5 * ge * std::sin(2.0 * t);
  k.C = 0.5 * ge * (1.0 - c) + 0.25 * ge * (1.0 - std::cos(2.0 * t)) - ge - 0.5 * gg * (1.0 - c);
  return k;
}

Reduced1DState reduced_state(double theta_b, double p, const SystemParams& prm) {
  const Coefficients1D k = reduce_1d(theta_b, prm);
  return {theta_b, p, k.A, k.B, k.C};
}

double record_1d(double t, double p, const SystemParams& prm) {
  const double sg = std::sqrt(prm.gamma_e());
  return p * sg * (1.0 + std::cos(t)) + sg * std::sin(t);
}

double theta_dot_1d(double t, double p, const SystemParams& prm) {
  const double hg = 0.5 * prm.gamma_diff();
  const double r = record_1d(t, p, prm);
  return 2.0 * prm.omega() + hg * std::sin(t) + r * std::sqrt(prm.gamma_e()) * (1.0 + std::cos(t));
}

double p_dot_1d(double t, double p, const SystemParams& prm) {
  const double hg = 0.5 * prm.gamma_diff();
  const double sg = std::sqrt(prm.gamma_e());
  const double r = record_1d(t, p, prm);
  const double c = std::cos(t);
  const double s = std::sin(t);
  return -(p * (hg * c - r * sg * s) + r * sg * c + hg * s);
}

std::vector<PortraitRow> phase_portrait(const std::vector<double>& energies,
                                        const SystemParams& prm,
                                        const std::vector<double>& theta_grid,
                                        const std::vector<double>& separatrix_energies,
                                        double disc_tol) {
  std::vector<PortraitRow> rows;
  rows.reserve(energies.size() * theta_grid.size());
  for (double E : energies) {
    const bool sep = std::any_of(separatrix_energies.begin(), separatrix_energies.end(),
                                 [E](double s) { return std::abs(s - E) <= 1e-12 * std::max(1.0, std::abs(E)); });
    for (double t : theta_grid) {
      const Coefficients1D k = reduce_1d(t, prm);
      PortraitRow row{t, kNaN, kNaN, E, sep};
      const double c = k.C - E;
      if (std::abs(k.A) <= 1e-14 * std::max(1.0, std::abs(k.B))) {
        if (std::abs(k.B) > 1e-14) row.p_branch1 = -c / k.B;
      } else {
        double disc = k.B * k.B - 4.0 * k.A * c;
        const double scale = std::max({1.0, k.B * k.B, std::abs(4.0 * k.A * c)});
        if (disc >= -disc_tol * scale) {
          disc = std::max(0.0, disc);
          const double sq = std::sqrt(disc);
          row.p_branch1 = (-k.B - sq) / (2.0 * k.A);
          row.p_branch2 = (-k.B + sq) / (2.0 * k.A);
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

const char* to_string(FixedPointKind k) {
  switch (k) {
    case FixedPointKind::Saddle:
      return "saddle";
    case FixedPointKind::Center:
      return "center";
    case FixedPointKind::Marginal:
      return "marginal";
  }
  return "?";
}

Eigen::Matrix2d flow_jacobian_1d(double t, double p, const SystemParams& prm) {
  const double h = 1e-6;
  Eigen::Matrix2d J;
  J(0, 0) = (theta_dot_1d(t + h, p, prm) - theta_dot_1d(t - h, p, prm)) / (2.0 * h);
  J(0, 1) = (theta_dot_1d(t, p + h, prm) - theta_dot_1d(t, p - h, prm)) / (2.0 * h);
  J(1, 0) = (p_dot_1d(t + h, p, prm) - p_dot_1d(t - h, p, prm)) / (2.0 * h);
  J(1, 1) = (p_dot_1d(t, p + h, prm) - p_dot_1d(t, p - h, prm)) / (2.0 * h);
  return J;
}

namespace {

Eigen::Vector2d field(const Eigen::Vector2d& v, const SystemParams& prm) {
  return {theta_dot_1d(v(0), v(1), prm), p_dot_1d(v(0), v(1), prm)};
}

bool newton(Eigen::Vector2d& v, const SystemParams& prm, double tol) {
  Eigen::Vector2d f = field(v, prm);
  for (int it = 0; it < 100; ++it) {
    if (f.norm() < tol) return true;
    const Eigen::Matrix2d J = flow_jacobian_1d(v(0), v(1), prm);
    const Eigen::Vector2d step = J.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(-f);
    if (!step.allFinite()) return false;
    double lambda = 1.0;
    bool moved = false;
    for (int k = 0; k < 30; ++k) {
      const Eigen::Vector2d trial = v + lambda * step;
      const Eigen::Vector2d ft = field(trial, prm);
      if (ft.norm() < f.norm()) {
        v = trial;
        f = ft;
        moved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!moved) return f.norm() < 1e3 * tol;
  }
  return f.norm() < tol;
}

}  // namespace

std::vector<FixedPoint> find_fixed_points(const SystemParams& prm, const FixedPointOptions& o) {
  std::vector<FixedPoint> found;
  const double slack = 1e-9;
  for (int i = 0; i < o.theta_seeds; ++i) {
    const double t0 = o.theta_lo + (o.theta_hi - o.theta_lo) * (i + 0.5) / o.theta_seeds;
    for (int j = 0; j < o.p_seeds; ++j) {
      const double p0 = o.p_lo + (o.p_hi - o.p_lo) * j / std::max(1, o.p_seeds - 1);
      Eigen::Vector2d v(t0, p0);
      if (!newton(v, prm, o.residual_tol)) continue;
      if (v(0) < o.theta_lo - slack || v(0) > o.theta_hi + slack) continue;
      const bool dup = std::any_of(found.begin(), found.end(), [&](const FixedPoint& f) {
        return std::hypot(f.theta_b - v(0), f.p - v(1)) < o.merge_tol;
      });
      if (dup) continue;
      FixedPoint fp;
      fp.theta_b = v(0);
      fp.p = v(1);
      const Eigen::Matrix2d J = flow_jacobian_1d(v(0), v(1), prm);
      fp.eigenvalues = Eigen::EigenSolver<Eigen::Matrix2d>(J).eigenvalues();
      const double re = std::max(std::abs(fp.eigenvalues(0).real()), std::abs(fp.eigenvalues(1).real()));
      const double im = std::max(std::abs(fp.eigenvalues(0).imag()), std::abs(fp.eigenvalues(1).imag()));
      if (re >= o.marginal_tol && im < o.marginal_tol) {
        fp.kind = FixedPointKind::Saddle;
      } else if (re < o.marginal_tol && im >= o.marginal_tol) {
        fp.kind = FixedPointKind::Center;
      } else {
        fp.kind = FixedPointKind::Marginal;
      }
      fp.energy = reduced_state(fp.theta_b, fp.p, prm).energy();
      found.push_back(fp);
    }
  }
  std::sort(found.begin(), found.end(), [](const FixedPoint& a, const FixedPoint& b) {
    return a.theta_b != b.theta_b ? a.theta_b < b.theta_b : a.p < b.p;
  });
  return found;
}

}  // namespace nhq
