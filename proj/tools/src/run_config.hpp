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
#include <string>
#include <vector>

#include <nhq/nhq.hpp>

#include "json.hpp"

namespace nhq::cli {

/// Invalid configuration value; carries the offending field name.
class ConfigError : public ValidationError {
 public:
  ConfigError(std::string field, const std::string& msg)
      : ValidationError("config field '" + field + "': " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"spectrum", "ensemble",       "compare",   "sde",
                                              "optimal-path", "phase-portrait", "povm-check"};
  return names;
}

/// One run of the tool. Field names double as config-file keys.
struct RunConfig {
  std::string experiment;

  double gamma_e = 0.2;
  double gamma_g = 1.0;
  double omega = 2.0;
  double theta = 0.0;
  std::string axis = "x";  // x | y | both
  double dt = 0.01;
  std::string T = "5";     // microseconds, or "auto" for optimal-path
  std::size_t steps = 0;   // > 0: dt = T / steps
  std::size_t n = 1000;
  std::uint64_t seed = 20260917;
  unsigned workers = 0;
  std::string postselect = "none";  // none | no-jump | final
  std::string qi = "0,0,1";
  std::string qf = "0,-1,0";
  double lambda = 0.05;

  std::string pipeline = "kraus";        // kraus | sde
  std::string reference = "liouvillian";  // liouvillian | lindblad
  std::string scheme = "stratonovich";    // stratonovich | ito | kraus
  bool jumps = false;
  double norm_guard = 1.05;
  std::size_t substeps = 1;
  std::size_t save_trajectories = 0;

  double omega_min = 0.05;
  double omega_max = 3.0;
  std::size_t points = 400;

  std::size_t starts = 64;
  std::size_t path_steps = 0;  // > 0: path dt = T / path_steps, else 1e-3
  double arrival_lo = 0.1;
  double arrival_hi = 5.0;
  bool with_ensemble = false;

  std::string energies;  // comma-separated; empty picks levels around the saddles
  std::size_t theta_points = 721;

  std::string out = "out";
  bool plot = false;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  std::vector<DriveAxis> axes() const;
  bool auto_T() const { return T == "auto"; }
  /// Numeric horizon; only valid when !auto_T().
  double horizon() const;
  /// Integration step of the ensemble for a given horizon.
  double step_for(double horizon) const;
  SystemParams params(double dt_value) const;
  BlochVector initial_bloch() const;
  BlochVector target_bloch() const;
  PostSelection selection() const;
  std::vector<double> energy_levels() const;
  SdeScheme sde_scheme() const;
};

nlohmann::ordered_json to_json(const RunConfig& c);
RunConfig config_from_json(const nlohmann::json& j);

/// Parses "a,b,c" into three doubles.
BlochVector parse_vec3(const std::string& text, const std::string& field);
std::vector<double> parse_list(const std::string& text, const std::string& field);

}  // namespace nhq::cli
