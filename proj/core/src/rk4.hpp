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

// Fixed-step classical RK4 with a step-doubling local error check.

#include <string>
#include <vector>

#include "nhq/errors.hpp"
#include "nhq/params.hpp"

namespace nhq::detail {

template <class State, class Rhs>
State rk4_step(const State& y, double h, const Rhs& f) {
  const State k1 = f(y);
  const State k2 = f(State(y + (0.5 * h) * k1));
  const State k3 = f(State(y + (0.5 * h) * k2));
  const State k4 = f(State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

template <class State, class Rhs>
std::vector<State> rk4_integrate(const State& y0, const TimeGrid& grid, const Rhs& f,
                                 bool check, double max_err, const char* who) {
  std::vector<State> out;
  out.reserve(grid.size());
  out.push_back(y0);
  State y = y0;
  const double h = grid.dt;
  for (std::size_t i = 0; i < grid.steps; ++i) {
    if (check) {
      const State full = rk4_step(y, h, f);
      const State half = rk4_step(rk4_step(y, 0.5 * h, f), 0.5 * h, f);
      const double err = (half - full).cwiseAbs().maxCoeff() / 15.0;
      if (err > max_err) {
        throw StepSizeError(std::string(who) + ": local error " + std::to_string(err) +
                            " exceeds bound at t=" + std::to_string(grid.time(i)));
      }
      y = half;
    } else {
      y = rk4_step(y, h, f);
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace nhq::detail
