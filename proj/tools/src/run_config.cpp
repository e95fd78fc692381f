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

#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace nhq::cli {

namespace {

double parse_double(const std::string& s, const std::string& field) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(field, "'" + s + "' is not a number");
  }
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos != s.size()) throw ConfigError(field, "'" + s + "' is not a number");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\"");
  return s.substr(b, e - b + 1);
}

void require_one_of(const std::string& v, std::initializer_list<const char*> allowed,
                    const std::string& field) {
  for (const char* a : allowed) {
    if (v == a) return;
  }
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : "|") + a;
  throw ConfigError(field, "'" + v + "' is not one of " + list);
}

void require_finite(double v, const std::string& field) {
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(trim(text));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError(field, "empty list element in '" + text + "'");
    out.push_back(parse_double(item, field));
  }
  return out;
}

BlochVector parse_vec3(const std::string& text, const std::string& field) {
  const auto v = parse_list(text, field);
  if (v.size() != 3) throw ConfigError(field, "expected three comma-separated components");
  for (double c : v) require_finite(c, field);
  return {v[0], v[1], v[2]};
}

double RunConfig::horizon() const {
  const double t = parse_double(T, "T");
  if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("T", "must be > 0");
  return t;
}

double RunConfig::step_for(double horizon_value) const {
  return steps > 0 ? horizon_value / static_cast<double>(steps) : dt;
}

void RunConfig::validate() const {
  if (std::find(experiment_names().begin(), experiment_names().end(), experiment) ==
      experiment_names().end()) {
    std::string list;
    for (const auto& e : experiment_names()) list += (list.empty() ? "" : "|") + e;
    throw ConfigError("experiment", "'" + experiment + "' is not one of " + list);
  }
  require_finite(gamma_e, "gamma_e");
  require_finite(gamma_g, "gamma_g");
  require_finite(omega, "omega");
  require_finite(theta, "theta");
  if (gamma_e < 0.0) throw ConfigError("gamma_e", "must be >= 0");
  if (gamma_g < 0.0) throw ConfigError("gamma_g", "must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be > 0");
  require_one_of(axis, {"x", "y", "both"}, "axis");
  require_one_of(postselect, {"none", "no-jump", "final"}, "postselect");
  require_one_of(pipeline, {"kraus", "sde"}, "pipeline");
  require_one_of(reference, {"liouvillian", "lindblad"}, "reference");
  require_one_of(scheme, {"stratonovich", "ito", "kraus"}, "scheme");
  if (!(norm_guard > 1.0)) throw ConfigError("norm_guard", "must be > 1 (inf disables)");
  if (substeps < 1) throw ConfigError("substeps", "must be >= 1");

  const BlochVector q0 = parse_vec3(qi, "qi");
  const BlochVector q1 = parse_vec3(qf, "qf");
  if (q1.norm() > 1.0 + 1e-12) throw ConfigError("qf", "must lie in the unit ball");
  if (postselect == "final" && !(lambda > 0.0 && lambda < 1.0)) {
    throw ConfigError("lambda", "must satisfy 0 < lambda < 1");
  }

  const bool needs_T = experiment != "spectrum" && experiment != "phase-portrait" &&
                       experiment != "povm-check";
  if (auto_T() && experiment != "optimal-path") {
    throw ConfigError("T", "'auto' is only meaningful for optimal-path");
  }
  double horizon_value = 1.0;
  if (needs_T && !auto_T()) horizon_value = horizon();
  const double step = step_for(horizon_value);
  if (step * gamma_e > SystemParams::kMaxRateStep || step * gamma_g > SystemParams::kMaxRateStep) {
    throw ConfigError(steps > 0 ? "steps" : "dt", "gamma*dt exceeds 0.1 (detector not Markovian)");
  }
  if (needs_T && !auto_T() && steps == 0) {
    const double ratio = horizon_value / dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
      throw ConfigError("T", "must be an integer multiple of dt");
    }
  }

  const bool ensemble_like = experiment == "ensemble" || experiment == "compare" ||
                             experiment == "sde" ||
                             (experiment == "optimal-path" && with_ensemble);
  if (ensemble_like && n < 1) throw ConfigError("n", "must be >= 1");
  if (ensemble_like && std::abs(q0.norm() - 1.0) > 1e-9) {
    throw ConfigError("qi", "initial state must be pure (|q| = 1)");
  }
  if (experiment == "spectrum") {
    if (!(omega_min >= 0.0) || !(omega_max > omega_min)) {
      throw ConfigError("omega_max", "need 0 <= omega_min < omega_max");
    }
    if (points < 2) throw ConfigError("points", "must be >= 2");
  }
  if (experiment == "optimal-path") {
    if (starts < 1) throw ConfigError("starts", "must be >= 1");
    if (q0.norm() > 1.0 + 1e-12) throw ConfigError("qi", "must lie in the unit ball");
    if (!(arrival_hi > arrival_lo) || !(arrival_lo > 0.0)) {
      throw ConfigError("arrival_hi", "need 0 < arrival_lo < arrival_hi");
    }
  }
  if (experiment == "phase-portrait") {
    if (theta_points < 2) throw ConfigError("theta_points", "must be >= 2");
    if (!energies.empty()) parse_list(energies, "energies");
  }
}

std::vector<DriveAxis> RunConfig::axes() const {
  if (axis == "both") return {DriveAxis::X, DriveAxis::Y};
  return {axis == "y" ? DriveAxis::Y : DriveAxis::X};
}

SystemParams RunConfig::params(double dt_value) const {
  return SystemParams(gamma_e, gamma_g, omega, theta, dt_value);
}

BlochVector RunConfig::initial_bloch() const { return parse_vec3(qi, "qi"); }
BlochVector RunConfig::target_bloch() const { return parse_vec3(qf, "qf"); }

PostSelection RunConfig::selection() const {
  if (postselect == "no-jump") return PostSelection::no_jump();
  if (postselect == "final") return PostSelection::final_state(target_bloch(), lambda);
  return PostSelection::none();
}

std::vector<double> RunConfig::energy_levels() const {
  return energies.empty() ? std::vector<double>{} : parse_list(energies, "energies");
}

SdeScheme RunConfig::sde_scheme() const {
  if (scheme == "ito") return SdeScheme::Ito;
  if (scheme == "kraus") return SdeScheme::Kraus;
  return SdeScheme::Stratonovich;
}

#define NHQ_CONFIG_FIELDS(X)                                                                  \
  X(experiment) X(gamma_e) X(gamma_g) X(omega) X(theta) X(axis) X(dt) X(T) X(steps) X(n)     \
  X(seed) X(workers) X(postselect) X(qi) X(qf) X(lambda) X(pipeline) X(reference) X(scheme)  \
  X(jumps) X(norm_guard) X(substeps) X(save_trajectories) X(omega_min) X(omega_max)          \
  X(points) X(starts) X(path_steps) X(arrival_lo) X(arrival_hi) X(with_ensemble) X(energies) \
  X(theta_points) X(out) X(plot)

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
#define NHQ_PUT(f) j[#f] = c.f;
  NHQ_CONFIG_FIELDS(NHQ_PUT)
#undef NHQ_PUT
  // JSON has no infinity.
  if (!std::isfinite(c.norm_guard)) j["norm_guard"] = "inf";
  return j;
}

RunConfig config_from_json(const nlohmann::json& j) {
  RunConfig c;
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
#define NHQ_GET(f)                                                     \
  if (it.key() == #f) {                                                \
    known = true;                                                      \
    try {                                                              \
      if (std::string(#f) == "norm_guard" && it->is_string()) {        \
        c.norm_guard = parse_double(it->get<std::string>(), #f);       \
      } else {                                                         \
        it->get_to(c.f);                                               \
      }                                                                \
    } catch (const nlohmann::json::exception& e) {                     \
      throw ConfigError(#f, e.what());                                 \
    }                                                                  \
  }
    NHQ_CONFIG_FIELDS(NHQ_GET)
#undef NHQ_GET
    if (!known) throw ConfigError(it.key(), "unknown field");
  }
  return c;
}

}  // namespace nhq::cli
