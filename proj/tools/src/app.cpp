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

#include "app.hpp"

#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "experiments.hpp"
#include "run_config.hpp"

namespace nhq::cli {

namespace {

const char* kDescription =
    "nhq: homodyne trajectories, Liouvillian spectra and optimal paths of a driven,\n"
    "post-selected three-level qubit.\n\n"
    "  nhq EXPERIMENT [options]      EXPERIMENT = spectrum | ensemble | compare | sde |\n"
    "                                optimal-path | phase-portrait | povm-check\n"
    "  nhq --config FILE [options]   experiment taken from the file's 'experiment' key\n"
    "  nhq replay MANIFEST [--out DIR] [--workers N]\n";

void add_run_options(CLI::App& app, RunConfig& c, std::string& command) {
  app.add_option("command", command, "Experiment to run");
  app.add_option("--experiment", c.experiment, "Experiment (alternative to the positional)");
  app.add_option("--gamma-e,--gamma_e", c.gamma_e, "|f> -> |e> decay rate (MHz)");
  app.add_option("--gamma-g,--gamma_g", c.gamma_g, "|e> -> |g> decay rate (MHz)");
  app.add_option("--omega", c.omega, "Drive strength (MHz)");
  app.add_option("--theta", c.theta, "Homodyne measurement phase (rad)");
  app.add_option("--axis", c.axis, "Drive axis: x, y or both");
  app.add_option("--dt", c.dt, "Time step (us)");
  app.add_option("--T", c.T, "Duration (us); 'auto' for optimal-path");
  app.add_option("--steps", c.steps, "If > 0, use dt = T / steps");
  app.add_option("--n", c.n, "Number of trajectories");
  app.add_option("--seed", c.seed, "Master seed");
  app.add_option("--workers", c.workers, "Worker threads (0 = hardware); results do not depend on it");
  app.add_option("--postselect", c.postselect, "none, no-jump or final");
  app.add_option("--qi", c.qi, "Initial Bloch vector x,y,z");
  app.add_option("--qf", c.qf, "Target Bloch vector x,y,z");
  app.add_option("--lambda", c.lambda, "Final-state post-selection radius");
  app.add_option("--pipeline", c.pipeline, "kraus (jump-aware) or sde (Bloch equations)");
  app.add_option("--reference", c.reference, "compare reference: liouvillian or lindblad");
  app.add_option("--scheme", c.scheme, "SDE scheme: stratonovich, ito or kraus");
  app.add_flag("--jumps", c.jumps, "Sample |e> -> |g> jumps in the SDE pipeline");
  app.add_option("--norm-guard,--norm_guard", c.norm_guard, "Abort when |q| exceeds this (inf disables)");
  app.add_option("--substeps", c.substeps, "Integration steps per output step");
  app.add_option("--save-trajectories,--save_trajectories", c.save_trajectories,
                 "Write the first K trajectories");
  app.add_option("--omega-min,--omega_min", c.omega_min, "Spectrum scan start (MHz)");
  app.add_option("--omega-max,--omega_max", c.omega_max, "Spectrum scan end (MHz)");
  app.add_option("--points", c.points, "Spectrum scan points");
  app.add_option("--starts", c.starts, "Shooting starts");
  app.add_option("--path-steps,--path_steps", c.path_steps, "If > 0, path dt = T / path_steps");
  app.add_option("--arrival-lo,--arrival_lo", c.arrival_lo, "Search window start for T = auto");
  app.add_option("--arrival-hi,--arrival_hi", c.arrival_hi, "Search window end for T = auto");
  app.add_flag("--with-ensemble,--with_ensemble", c.with_ensemble,
               "optimal-path: also run the final-state post-selected ensemble");
  app.add_option("--energies", c.energies, "phase-portrait energies, comma-separated");
  app.add_option("--theta-points,--theta_points", c.theta_points, "phase-portrait theta grid size");
  app.add_option("--out", c.out, "Output directory");
  app.add_flag("--plot", c.plot, "Also render SVG plots from the CSVs");
  app.set_config("--config", "", "Flat key = value configuration file");
  app.allow_config_extras(CLI::config_extras_mode::error);
}

std::vector<char*> to_argv(std::vector<std::string>& storage) {
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return argv;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const auto files = run_experiment(cfg, out);
    out << "wrote " << files.size() << " artifact(s) and manifest.json to " << cfg.out << "\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EmptyEnsembleError& e) {
    err << "empty post-selection: " << e.what() << "\n";
    return kExitEmptySelection;
  } catch (const NoConvergenceError& e) {
    err << "no convergence: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int replay(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Re-run the configuration recorded in a manifest"};
  std::string manifest;
  std::optional<std::string> out_dir;
  std::optional<unsigned> workers;
  app.add_option("manifest", manifest, "manifest.json written by a previous run")->required();
  app.add_option("--out", out_dir, "Output directory (default: the recorded one)");
  app.add_option("--workers", workers, "Worker threads");
  std::vector<std::string> storage{"nhq replay"};
  storage.insert(storage.end(), args.begin() + 1, args.end());
  auto argv = to_argv(storage);
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  RunConfig cfg;
  try {
    std::ifstream f(manifest);
    if (!f) throw ConfigError("manifest", "cannot open " + manifest);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("manifest", e.what());
    }
    if (!j.contains("config")) throw ConfigError("config", "missing in manifest");
    cfg = config_from_json(j.at("config"));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (out_dir) cfg.out = *out_dir;
  if (workers) cfg.workers = *workers;
  return execute(cfg, out, err);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && args.front() == "replay") return replay(args, out, err);

  CLI::App app{kDescription, "nhq"};
  app.set_version_flag("--version", std::string(kVersion));
  RunConfig cfg;
  std::string command;
  add_run_options(app, cfg, command);
  std::vector<std::string> storage{"nhq"};
  storage.insert(storage.end(), args.begin(), args.end());
  auto argv = to_argv(storage);
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  if (!command.empty()) cfg.experiment = command;
  if (cfg.experiment.empty()) {
    err << "config error: config field 'experiment': no experiment given\n" << app.help();
    return kExitConfig;
  }
  return execute(cfg, out, err);
}

}  // namespace nhq::cli
