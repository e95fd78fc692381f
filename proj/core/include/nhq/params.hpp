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

#include <cmath>
#include <string>

#include "nhq/errors.hpp"

namespace nhq {

/// Physical and numerical parameters of the driven three-level system.
///
/// Rates in MHz, dt in microseconds. The constructor enforces the Markovian
/// detector regime gamma*dt <= 0.1 for both decay channels.
class SystemParams {
 public:
  static constexpr double kMaxRateStep = 0.1;

  SystemParams(double gamma_e, double gamma_g, double omega, double theta, double dt)
      : gamma_e_(gamma_e), gamma_g_(gamma_g), omega_(omega), theta_(theta), dt_(dt) {
    auto fail = [](const std::string& msg) { throw ValidationError("SystemParams: " + msg); };
    if (!std::isfinite(gamma_e) || !std::isfinite(gamma_g) || !std::isfinite(omega) ||
        !std::isfinite(theta) || !std::isfinite(dt)) {
      fail("non-finite value");
    }
    if (gamma_e < 0.0) fail("gamma_e must be >= 0");
    if (gamma_g < 0.0) fail("gamma_g must be >= 0");
    if (dt <= 0.0) fail("dt must be > 0");
    if (gamma_e * dt > kMaxRateStep) fail("gamma_e*dt exceeds 0.1 (detector not Markovian)");
    if (gamma_g * dt > kMaxRateStep) fail("gamma_g*dt exceeds 0.1 (detector not Markovian)");
  }

  double gamma_e() const { return gamma_e_; }
  double gamma_g() const { return gamma_g_; }
  double omega() const { return omega_; }
  double theta() const { return theta_; }
  double dt() const { return dt_; }

  /// gamma_e - gamma_g, the combination appearing in the Bloch drift.
  double gamma_diff() const { return gamma_e_ - gamma_g_; }

  SystemParams with_dt(double dt) const { return {gamma_e_, gamma_g_, omega_, theta_, dt}; }
  SystemParams with_omega(double omega) const { return {gamma_e_, gamma_g_, omega, theta_, dt_}; }
  SystemParams with_theta(double theta) const { return {gamma_e_, gamma_g_, omega_, theta, dt_}; }
  SystemParams with_rates(double gamma_e, double gamma_g) const {
    return {gamma_e, gamma_g, omega_, theta_, dt_};
  }

  friend bool operator==(const SystemParams&, const SystemParams&) = default;

 private:
  double gamma_e_;
  double gamma_g_;
  double omega_;
  double theta_;
  double dt_;
};

/// Uniform time grid t_i = i*dt, i = 0..steps.
struct TimeGrid {
  double dt = 0.01;
  std::size_t steps = 0;

  double time(std::size_t i) const { return static_cast<double>(i) * dt; }
  std::size_t size() const { return steps + 1; }
  double duration() const { return static_cast<double>(steps) * dt; }

  /// Grid covering [0, T]; T must be an integer multiple of dt.
  static TimeGrid over(double T, double dt) {
    if (!(dt > 0.0)) throw ValidationError("TimeGrid: dt must be > 0");
    if (!(T >= 0.0) || !std::isfinite(T)) throw ValidationError("TimeGrid: T must be finite and >= 0");
    const double n = T / dt;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
      throw ValidationError("TimeGrid: T is not a multiple of dt");
    }
    return TimeGrid{dt, static_cast<std::size_t>(rounded)};
  }
};

}  // namespace nhq
