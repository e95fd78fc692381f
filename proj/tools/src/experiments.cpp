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

#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "svg_plot.hpp"

namespace nhq::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Outputs {
 public:
  explicit Outputs(const RunConfig& c) : dir_(c.out), plot_(c.plot) { fs::create_directories(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::ofstream open(const std::string& name) {
    std::ofstream f(path(name), std::ios::binary);
    if (!f) throw Error("cannot write " + path(name));
    files_.push_back(name);
    return f;
  }

  void plot(const std::string& csv, const std::string& title, const std::string& xcol,
            const std::vector<std::string>& ycols, const std::string& ylabel) {
    if (!plot_) return;
    const std::string svg = csv.substr(0, csv.rfind('.')) + ".svg";
    plot_csv_columns(path(csv), path(svg), title, xcol, ycols, ylabel);
    files_.push_back(svg);
  }

  void add(const std::string& name) { files_.push_back(name); }
  bool plotting() const { return plot_; }
  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  bool plot_;
  std::vector<std::string> files_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string suffix(DriveAxis a) { return std::string("_") + to_string(a); }

/// Reference curves on the output grid.
struct Reference {
  std::vector<double> pf, pe, pg, pf_norm, x, y, z;
};

BlochVector bloch_of_block(const Mat2& b) {
  const double n = (b(0, 0) + b(1, 1)).real();
  if (!(n > 1e-300)) return {kNaN, kNaN, kNaN};
  return {2.0 * b(0, 1).real() / n, -2.0 * b(0, 1).imag() / n, (b(0, 0) - b(1, 1)).real() / n};
}

Reference reference_curves(const RunConfig& c, const SystemParams& prm, DriveAxis axis,
                           const TimeGrid& grid) {
  Reference ref;
  const BlochVector q0 = c.initial_bloch();
  if (c.reference == "lindblad") {
    const auto path = evolve_lindblad(prm, axis, density_from_bloch(q0).matrix(), grid);
    for (const auto& r : path) {
      const Mat2 b = r.block<2, 2>(0, 0);
      const BlochVector q = bloch_of_block(b);
      ref.pf.push_back(r(kF, kF).real());
      ref.pe.push_back(r(kE, kE).real());
      ref.pg.push_back(r(kG, kG).real());
      ref.pf_norm.push_back(0.5 * (1.0 + q.z));
      ref.x.push_back(q.x);
      ref.y.push_back(q.y);
      ref.z.push_back(q.z);
    }
    return ref;
  }
  const LiouvillianMatrix L = build_liouvillian(prm, axis);
  const Mat2 rho0 = qubit_from_bloch(q0);
  const auto lin = evolve_ode(L, rho0, grid);
  const auto nrm = evolve_normalized(L, rho0, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ref.pf.push_back(lin[i](0, 0).real());
    ref.pe.push_back(lin[i](1, 1).real());
    ref.pg.push_back(1.0 - lin[i].trace().real());
    const BlochVector q = bloch_of_block(nrm[i]);
    ref.pf_norm.push_back(nrm[i](0, 0).real());
    ref.x.push_back(q.x);
    ref.y.push_back(q.y);
    ref.z.push_back(q.z);
  }
  return ref;
}

EnsembleOptions ensemble_options(const RunConfig& c, const PostSelection& sel) {
  EnsembleOptions o;
  o.seed = c.seed;
  o.workers = c.workers;
  o.postselect = sel;
  return o;
}

SdeOptions sde_options(const RunConfig& c) {
  SdeOptions s;
  s.scheme = c.sde_scheme();
  s.jumps = c.jumps;
  s.norm_guard = c.norm_guard;
  return s;
}

/// Ensemble on the integration grid (output step / substeps).
EnsembleStats run_ensemble(const RunConfig& c, const SystemParams& prm_int, double T, DriveAxis axis,
                           const PostSelection& sel) {
  const BlochVector q0 = c.initial_bloch();
  const EnsembleOptions o = ensemble_options(c, sel);
  if (c.pipeline == "sde" || c.experiment == "sde") {
    return simulate_sde_ensemble(c.n, q0, prm_int, T, axis, sde_options(c), o);
  }
  return simulate_ensemble(c.n, density_from_bloch(q0), prm_int, T, axis, o);
}

void write_ensemble_csv(std::ostream& f, const EnsembleStats& st, std::size_t stride,
                        const Reference* ref) {
  std::vector<std::string> header{"t",      "Pf_mean", "Pf_se",   "Pe_mean",    "Pe_se",
                                  "Pg_mean", "Pg_se",  "Pf_norm", "Pf_norm_se", "x_mean",
                                  "x_se",   "y_mean",  "y_se",    "z_mean",     "z_se",
                                  "n_survived"};
  if (ref) {
    for (const char* h : {"ref_Pf", "ref_Pe", "ref_Pg", "ref_Pf_norm", "ref_x", "ref_y", "ref_z"}) {
      header.push_back(h);
    }
  }
  CsvWriter w(f, header);
  for (std::size_t i = 0, k = 0; i < st.times.size(); i += stride, ++k) {
    w << st.times[i] << st.pf_mean[i] << st.pf_se[i] << st.pe_mean[i] << st.pe_se[i] << st.pg_mean[i]
      << st.pg_se[i] << st.pf_norm[i] << st.pf_norm_se[i] << st.x_mean[i] << st.x_se[i]
      << st.y_mean[i] << st.y_se[i] << st.z_mean[i] << st.z_se[i] << st.n_survived[i];
    if (ref) {
      w << ref->pf[k] << ref->pe[k] << ref->pg[k] << ref->pf_norm[k] << ref->x[k] << ref->y[k]
        << ref->z[k];
    }
    w.end_row();
  }
}

void write_trajectories(Outputs& out, const RunConfig& c, const SystemParams& prm_int, double T,
                        DriveAxis axis, std::size_t stride) {
  if (c.save_trajectories == 0) return;
  const std::string name = "trajectories" + suffix(axis) + ".csv";
  auto f = out.open(name);
  CsvWriter w(f, {"traj", "t", "Pf", "Pe", "Pg", "x", "y", "z", "r", "jumped"});
  const std::size_t count = std::min(c.save_trajectories, c.n);
  const BlochVector q0 = c.initial_bloch();
  for (std::size_t k = 0; k < count; ++k) {
    Rng rng = stream_for(c.seed, k);
    if (c.pipeline == "sde" || c.experiment == "sde") {
      const BlochTrajectory tr = simulate_sde(q0, prm_int, T, axis, rng, sde_options(c));
      for (std::size_t i = 0; i < tr.q.size(); i += stride) {
        const BlochVector& q = tr.q[i];
        const bool dead = std::isnan(q.x);
        const double r = i < tr.r.size() ? tr.r[i] : kNaN;
        w << k << tr.grid.time(i) << (dead ? 0.0 : 0.5 * (1 + q.z)) << (dead ? 0.0 : 0.5 * (1 - q.z))
          << (dead ? 1.0 : 0.0) << q.x << q.y << q.z << r << static_cast<long long>(dead);
        w.end_row();
      }
    } else {
      const TrajectoryRecord rec = simulate_trajectory(density_from_bloch(q0), prm_int, T, axis, rng);
      for (std::size_t i = 0; i < rec.states.size(); i += stride) {
        const auto q = rec.bloch(i);
        const double r = i < rec.records.size() ? rec.records[i] : kNaN;
        const auto& s = rec.states[i];
        w << k << rec.grid.time(i) << s.pf() << s.pe() << s.pg() << (q ? q->x : kNaN)
          << (q ? q->y : kNaN) << (q ? q->z : kNaN) << r << static_cast<long long>(!q.has_value());
        w.end_row();
      }
    }
  }
  f.close();
  out.plot(name, "first trajectories" + suffix(axis), "t", {"Pf", "Pe", "Pg"}, "population");
}

double sup_dev(const std::vector<double>& a, const std::vector<double>& b, std::size_t stride) {
  double m = 0.0;
  for (std::size_t i = 0, k = 0; i < a.size() && k < b.size(); i += stride, ++k) {
    if (std::isfinite(a[i]) && std::isfinite(b[k])) m = std::max(m, std::abs(a[i] - b[k]));
  }
  return m;
}

void run_ensemble_family(const RunConfig& c, Outputs& out, std::ostream& log, bool with_reference) {
  const double T = c.horizon();
  const double step = c.step_for(T);
  const SystemParams prm_int = c.params(step / static_cast<double>(c.substeps));
  const TimeGrid out_grid = TimeGrid::over(T, step);
  const PostSelection sel = c.selection();
  for (DriveAxis axis : c.axes()) {
    const EnsembleStats st = run_ensemble(c, prm_int, T, axis, sel);
    const std::string base = (with_reference ? "compare" : "ensemble") + suffix(axis);
    Reference ref;
    if (with_reference) ref = reference_curves(c, c.params(step), axis, out_grid);
    {
      auto f = out.open(base + ".csv");
      write_ensemble_csv(f, st, c.substeps, with_reference ? &ref : nullptr);
    }
    log << c.experiment << " axis " << to_string(axis) << ": n=" << st.n_total
        << " kept=" << st.n_kept << " survivors(T)=" << st.n_survived.back();
    if (with_reference) {
      log << " sup|Pf_norm-ref|=" << fmt(sup_dev(st.pf_norm, ref.pf_norm, c.substeps))
          << " sup|Pf-ref|=" << fmt(sup_dev(st.pf_mean, ref.pf, c.substeps));
    }
    log << "\n";
    if (c.experiment == "sde") {
      out.plot(base + ".csv", "Bloch means" + suffix(axis), "t", {"x_mean", "y_mean", "z_mean"}, "Bloch");
    } else if (with_reference && c.reference == "lindblad") {
      out.plot(base + ".csv", "populations" + suffix(axis), "t",
               {"Pf_mean", "Pe_mean", "Pg_mean", "ref_Pf", "ref_Pe", "ref_Pg"}, "population");
    } else if (with_reference) {
      out.plot(base + ".csv", "normalized P_f" + suffix(axis), "t", {"Pf_norm", "ref_Pf_norm"}, "P_f");
    } else {
      out.plot(base + ".csv", "populations" + suffix(axis), "t",
               {"Pf_mean", "Pe_mean", "Pg_mean", "Pf_norm"}, "population");
    }
    write_trajectories(out, c, prm_int, T, axis, c.substeps);
  }
}

void run_spectrum(const RunConfig& c, Outputs& out, std::ostream& log) {
  for (DriveAxis axis : c.axes()) {
    const auto rows = scan_spectrum(c.gamma_e, c.gamma_g, c.omega_min, c.omega_max,
                                    static_cast<int>(c.points), axis);
    const std::string name = "spectrum" + suffix(axis) + ".csv";
    {
      auto f = out.open(name);
      CsvWriter w(f, {"omega", "re_l1", "re_l2", "re_l3", "re_l4", "im_l1", "im_l2", "im_l3", "im_l4",
                      "gap", "overlap"});
      for (const auto& r : rows) {
        w << r.omega;
        for (const auto& l : r.eigenvalues) w << l.real();
        for (const auto& l : r.eigenvalues) w << l.imag();
        w << r.gap << r.overlap;
        w.end_row();
      }
    }
    out.plot(name, "Liouvillian spectrum" + suffix(axis), "omega",
             {"re_l1", "re_l2", "re_l3", "re_l4", "im_l1", "im_l2", "im_l3", "im_l4"}, "MHz");

    nlohmann::ordered_json ep;
    EpSearchOptions eo;
    eo.omega_lo = std::max(c.omega_min, 1e-6);
    eo.omega_hi = c.omega_max;
    eo.scan_points = static_cast<int>(c.points);
    try {
      const ExceptionalPoint e = find_ep(c.gamma_e, c.gamma_g, axis, eo);
      ep = {{"found", true}, {"omega_ep", e.omega_ep}, {"gap", e.gap}, {"overlap", e.overlap},
            {"conditioning", e.conditioning}};
      log << "spectrum axis " << to_string(axis) << ": omega_EP=" << fmt(e.omega_ep)
          << " overlap=" << fmt(e.overlap) << "\n";
    } catch (const NotFoundError& e) {
      ep = {{"found", false}, {"reason", e.what()}};
      log << "spectrum axis " << to_string(axis) << ": no exceptional point in range\n";
    }
    auto f = out.open("ep" + suffix(axis) + ".json");
    f << ep.dump(2) << "\n";
  }
}

/// Linear interpolation of the path at time t.
BlochVector path_at(const PathSolution& sol, double t) {
  const double u = t / sol.grid.dt;
  const auto last = sol.points.size() - 1;
  double j = std::floor(u + 1e-9);
  if (j >= static_cast<double>(last)) return sol.points[last].q;
  if (j < 0) j = 0;
  const auto i = static_cast<std::size_t>(j);
  const double w = std::clamp(u - j, 0.0, 1.0);
  if (w < 1e-9) return sol.points[i].q;
  return (1.0 - w) * sol.points[i].q + w * sol.points[i + 1].q;
}

void run_optimal_path(const RunConfig& c, Outputs& out, std::ostream& log) {
  const BlochVector qi = c.initial_bloch();
  const BlochVector qf = c.target_bloch();
  for (DriveAxis axis : c.axes()) {
    double T = 0.0;
    if (c.auto_T()) {
      T = noise_free_arrival_time(qi, qf, c.params(c.dt), axis, c.arrival_lo, c.arrival_hi);
    } else {
      T = c.horizon();
    }
    const SystemParams prm = c.params(c.step_for(T));
    ShootOptions so;
    so.starts = static_cast<int>(c.starts);
    so.dt = c.path_steps > 0 ? T / static_cast<double>(c.path_steps) : 1e-3;
    const PathSolution sol = shoot(qi, qf, T, prm, axis, so);

    const std::string name = "path" + suffix(axis) + ".csv";
    {
      auto f = out.open(name);
      CsvWriter w(f, {"t", "x", "y", "z", "px", "py", "pz", "r", "H", "S_cumulative"});
      for (std::size_t i = 0; i < sol.points.size(); ++i) {
        const auto& pt = sol.points[i];
        w << sol.grid.time(i) << pt.q.x << pt.q.y << pt.q.z << pt.p(0) << pt.p(1) << pt.p(2) << pt.r
          << sol.energy_trace[i] << sol.action_cumulative[i];
        w.end_row();
      }
    }
    out.plot(name, "optimal path" + suffix(axis), "t", {"x", "y", "z"}, "Bloch");

    nlohmann::ordered_json summary{{"T", T},
                                   {"T_auto", c.auto_T()},
                                   {"path_dt", sol.grid.dt},
                                   {"endpoint_residual", sol.endpoint_residual},
                                   {"energy", sol.energy},
                                   {"energy_drift", sol.energy_drift},
                                   {"action", sol.action},
                                   {"p0", {sol.p0(0), sol.p0(1), sol.p0(2)}}};
    log << "optimal-path axis " << to_string(axis) << ": T=" << fmt(T)
        << " residual=" << fmt(sol.endpoint_residual) << " drift=" << fmt(sol.energy_drift)
        << " S=" << fmt(sol.action);

    if (c.with_ensemble) {
      EnsembleOptions o = ensemble_options(c, PostSelection::final_state(qf, c.lambda));
      const EnsembleStats st =
          simulate_ensemble(c.n, density_from_bloch(qi), prm, T, axis, o);
      const std::string pname = "postselected" + suffix(axis) + ".csv";
      double sum2 = 0.0;
      std::size_t count = 0;
      {
        auto f = out.open(pname);
        CsvWriter w(f, {"t", "x_mean", "y_mean", "z_mean", "path_x", "path_y", "path_z", "distance"});
        for (std::size_t i = 0; i < st.times.size(); ++i) {
          const BlochVector m{st.x_mean[i], st.y_mean[i], st.z_mean[i]};
          const BlochVector q = path_at(sol, st.times[i]);
          const double d = distance(m, q);
          if (std::isfinite(d)) {
            sum2 += d * d;
            ++count;
          }
          w << st.times[i] << m.x << m.y << m.z << q.x << q.y << q.z << d;
          w.end_row();
        }
      }
      const double rms = count ? std::sqrt(sum2 / static_cast<double>(count)) : kNaN;
      summary["n"] = c.n;
      summary["lambda"] = c.lambda;
      summary["n_kept"] = st.n_kept;
      summary["rms_distance"] = rms;
      log << " kept=" << st.n_kept << " rms=" << fmt(rms);
      out.plot(pname, "post-selected mean vs optimal path" + suffix(axis), "t",
               {"x_mean", "y_mean", "z_mean", "path_x", "path_y", "path_z"}, "Bloch");
    }
    log << "\n";
    auto f = out.open("path" + suffix(axis) + ".json");
    f << summary.dump(2) << "\n";
  }
}

void run_phase_portrait(const RunConfig& c, Outputs& out, std::ostream& log) {
  const SystemParams prm = c.params(c.dt);
  const auto fps = find_fixed_points(prm);
  std::vector<double> saddle_e;
  for (const auto& f : fps) {
    if (f.kind != FixedPointKind::Saddle) continue;
    bool dup = false;
    for (double e : saddle_e) dup |= std::abs(e - f.energy) < 1e-9;
    if (!dup) saddle_e.push_back(f.energy);
  }
  std::vector<double> levels = c.energy_levels();
  if (levels.empty()) {
    const double centre = saddle_e.empty() ? 0.0 : saddle_e.front();
    for (double d : {-6.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 6.0}) levels.push_back(centre + d);
  }
  for (double e : saddle_e) levels.push_back(e);
  std::sort(levels.begin(), levels.end());

  std::vector<double> grid;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < c.theta_points; ++i) {
    grid.push_back(two_pi * static_cast<double>(i) / static_cast<double>(c.theta_points - 1));
  }
  const auto rows = phase_portrait(levels, prm, grid, saddle_e);
  {
    auto f = out.open("portrait.csv");
    CsvWriter w(f, {"theta_b", "p_branch1", "p_branch2", "E", "separatrix"});
    for (const auto& r : rows) {
      w << r.theta_b << r.p_branch1 << r.p_branch2 << r.energy << static_cast<long long>(r.separatrix);
      w.end_row();
    }
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& f : fps) {
    j.push_back({{"theta_b", f.theta_b},
                 {"p", f.p},
                 {"kind", to_string(f.kind)},
                 {"energy", f.energy},
                 {"eigenvalues",
                  {{f.eigenvalues(0).real(), f.eigenvalues(0).imag()},
                   {f.eigenvalues(1).real(), f.eigenvalues(1).imag()}}}});
  }
  {
    auto f = out.open("fixed_points.json");
    f << j.dump(2) << "\n";
  }
  log << "phase-portrait: " << fps.size() << " fixed points, " << saddle_e.size()
      << " saddle energies, " << levels.size() << " contours\n";

  if (out.plotting()) {
    std::vector<Series> series;
    for (double e : levels) {
      for (int branch = 0; branch < 2; ++branch) {
        Series s;
        s.label = (branch == 0 ? "E=" + fmt(e) : "");
        bool sep = false;
        for (const auto& r : rows) {
          if (r.energy != e) continue;
          s.x.push_back(r.theta_b);
          s.y.push_back(branch == 0 ? r.p_branch1 : r.p_branch2);
          sep = r.separatrix;
        }
        s.dashed = !sep;
        if (branch == 1 && s.label.empty()) s.label = " ";
        series.push_back(std::move(s));
      }
    }
    write_line_plot(out.path("portrait.svg"), "phase portrait", "theta_b", "p", series);
    out.add("portrait.svg");
  }
}

void run_povm_check(const RunConfig& c, std::ostream& log) {
  const SystemParams prm = c.params(c.dt);
  log << "povm-check gamma_e=" << fmt(c.gamma_e) << " gamma_g=" << fmt(c.gamma_g)
      << " dt=" << fmt(c.dt) << ": photon_counting=" << fmt(photon_counting_povm_residual(prm))
      << " hybrid=" << fmt(hybrid_povm_residual(prm)) << "\n";
}

}  // namespace

std::vector<std::string> run_experiment(const RunConfig& c, std::ostream& log) {
  c.validate();
  Outputs out(c);
  if (c.experiment == "spectrum") {
    run_spectrum(c, out, log);
  } else if (c.experiment == "ensemble" || c.experiment == "sde") {
    run_ensemble_family(c, out, log, false);
  } else if (c.experiment == "compare") {
    run_ensemble_family(c, out, log, true);
  } else if (c.experiment == "optimal-path") {
    run_optimal_path(c, out, log);
  } else if (c.experiment == "phase-portrait") {
    run_phase_portrait(c, out, log);
  } else if (c.experiment == "povm-check") {
    run_povm_check(c, log);
  }

  nlohmann::ordered_json manifest{{"tool", "nhq"},
                                  {"version", kVersion},
                                  {"experiment", c.experiment},
                                  {"seed", c.seed},
                                  {"config", to_json(c)},
                                  {"outputs", out.files()}};
  std::ofstream mf(out.path("manifest.json"), std::ios::binary);
  if (!mf) throw Error("cannot write " + out.path("manifest.json"));
  mf << manifest.dump(2) << "\n";
  return out.files();
}

}  // namespace nhq::cli
