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

#include "nhq/optimal_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "nhq/errors.hpp"

namespace nhq {

namespace {

// Forward-mode dual number with three tangent directions.
struct Dual {
  double v = 0.0;
  std::array<double, 3> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit lift of constants
  static Dual seed(double value, int k) {
    Dual r(value);
    r.d[k] = 1.0;
    return r;
  }
};

inline Dual operator+(const Dual& a, const Dual& b) {
  Dual r(a.v + b.v);
  for (int k = 0; k < 3; ++k) r.d[k] = a.d[k] + b.d[k];
  return r;
}
inline Dual operator-(const Dual& a, const Dual& b) {
  Dual r(a.v - b.v);
  for (int k = 0; k < 3; ++k) r.d[k] = a.d[k] - b.d[k];
  return r;
}
inline Dual operator-(const Dual& a) { return Dual(0.0) - a; }
inline Dual operator*(const Dual& a, const Dual& b) {
  Dual r(a.v * b.v);
  for (int k = 0; k < 3; ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
  return r;
}

template <class T>
struct Vec3T {
  T x, y, z;
};

template <class T>
Vec3T<T> drift_t(const Vec3T<T>& q, const SystemParams& prm, DriveAxis axis) {
  const double hg = 0.5 * prm.gamma_diff();
  const double w2 = 2.0 * prm.omega();
  if (axis == DriveAxis::X) {
    return {hg * q.x * q.z, hg * q.y * q.z - w2 * q.z, hg * (q.z * q.z - 1.0) + w2 * q.y};
  }
  return {w2 * q.z + hg * q.x * q.z, hg * q.y * q.z, hg * (q.z * q.z - 1.0) - w2 * q.x};
}

template <class T>
Vec3T<T> backaction_t(const Vec3T<T>& q, const SystemParams& prm) {
  const double sg = std::sqrt(prm.gamma_e());
  const double c = std::cos(prm.theta());
  const double s = std::sin(prm.theta());
  return {sg * ((1.0 + q.z - q.x * q.x) * c + q.x * q.y * s),
          sg * ((q.y * q.y - q.z - 1.0) * s - q.x * q.y * c),
          sg * (q.y * s - q.x * c) * (q.z + 1.0)};
}

template <class T>
T signal_t(const Vec3T<T>& q, const SystemParams& prm) {
  return std::sqrt(prm.gamma_e()) * (q.x * std::cos(prm.theta()) - q.y * std::sin(prm.theta()));
}

template <class T>
T cost_t(const Vec3T<T>& q, double r, const SystemParams& prm) {
  return -0.5 * r * r - 0.5 * prm.gamma_e() * (1.0 + q.z) - 0.5 * prm.gamma_g() * (1.0 - q.z) +
         r * signal_t(q, prm);
}

template <class T>
T hamiltonian_t(const Vec3T<T>& q, const Eigen::Vector3d& p, double r, const SystemParams& prm,
                DriveAxis axis) {
  const Vec3T<T> a = drift_t(q, prm, axis);
  const Vec3T<T> b = backaction_t(q, prm);
  const T fx = a.x + r * b.x;
  const T fy = a.y + r * b.y;
  const T fz = a.z + r * b.z;
  return p(0) * fx + p(1) * fy + p(2) * fz + cost_t(q, r, prm);
}

Vec3T<double> lift(const BlochVector& q) { return {q.x, q.y, q.z}; }

}  // namespace

double hamiltonian(const BlochVector& q, const Eigen::Vector3d& p, double r, const SystemParams& prm,
                   DriveAxis axis) {
  return hamiltonian_t(lift(q), p, r, prm, axis);
}

double path_cost(const BlochVector& q, double r, const SystemParams& prm) {
  return cost_t(lift(q), r, prm);
}

double hamiltonian_dr(const BlochVector& q, const Eigen::Vector3d& p, double r,
                      const SystemParams& prm) {
  const Vec3T<double> b = backaction_t(lift(q), prm);
  return p(0) * b.x + p(1) * b.y + p(2) * b.z - r + signal_t(lift(q), prm);
}

double optimal_record(const BlochVector& q, const Eigen::Vector3d& p, const SystemParams& prm) {
  const Vec3T<double> b = backaction_t(lift(q), prm);
  return p(0) * b.x + p(1) * b.y + p(2) * b.z + signal_t(lift(q), prm);
}

HamiltonFlow hamilton_rhs(const BlochVector& q, const Eigen::Vector3d& p, const SystemParams& prm,
                          DriveAxis axis) {
  const double r = optimal_record(q, p, prm);
  const Vec3T<double> a = drift_t(lift(q), prm, axis);
  const Vec3T<double> b = backaction_t(lift(q), prm);
  HamiltonFlow f;
  f.q_dot = {a.x + r * b.x, a.y + r * b.y, a.z + r * b.z};
  // dH/dr = 0 at r*, so the total q-gradient equals the partial one at fixed r.
  const Vec3T<Dual> qd{Dual::seed(q.x, 0), Dual::seed(q.y, 1), Dual::seed(q.z, 2)};
  const Dual h = hamiltonian_t(qd, p, r, prm, axis);
  f.p_dot = {-h.d[0], -h.d[1], -h.d[2]};
  return f;
}

namespace {

using State6 = Eigen::Matrix<double, 6, 1>;

State6 flow6(const State6& s, const SystemParams& prm, DriveAxis axis) {
  const HamiltonFlow f = hamilton_rhs({s(0), s(1), s(2)}, s.tail<3>(), prm, axis);
  State6 out;
  out << f.q_dot, f.p_dot;
  return out;
}

State6 rk4(const State6& s, double h, const SystemParams& prm, DriveAxis axis) {
  const State6 k1 = flow6(s, prm, axis);
  const State6 k2 = flow6(s + 0.5 * h * k1, prm, axis);
  const State6 k3 = flow6(s + 0.5 * h * k2, prm, axis);
  const State6 k4 = flow6(s + h * k3, prm, axis);
  return s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::size_t steps_for(double T, double dt) {
  const double n = std::round(T / dt);
  return static_cast<std::size_t>(std::max(1.0, n));
}

// Endpoint q(T) only, for the search objective.
BlochVector endpoint(const BlochVector& q0, const Eigen::Vector3d& p0, double T, double dt,
                     const SystemParams& prm, DriveAxis axis) {
  const std::size_t n = steps_for(T, dt);
  const double h = T / static_cast<double>(n);
  State6 s;
  s << q0.x, q0.y, q0.z, p0;
  for (std::size_t i = 0; i < n; ++i) {
    s = rk4(s, h, prm, axis);
    if (!s.allFinite() || s.tail<3>().cwiseAbs().maxCoeff() > 1e8) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan, nan};
    }
  }
  return {s(0), s(1), s(2)};
}

}  // namespace

PathSolution integrate_path(const BlochVector& q0, const Eigen::Vector3d& p0, double T, double dt,
                            const SystemParams& prm, DriveAxis axis) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ValidationError("integrate_path: T and dt must be > 0");
  const std::size_t n = steps_for(T, dt);
  const double h = T / static_cast<double>(n);
  PathSolution sol;
  sol.grid = TimeGrid{h, n};
  sol.p0 = p0;
  sol.points.reserve(n + 1);
  State6 s;
  s << q0.x, q0.y, q0.z, p0;
  auto store = [&](const State6& st) {
    PhasePoint pt;
    pt.q = {st(0), st(1), st(2)};
    pt.p = st.tail<3>();
    pt.r = optimal_record(pt.q, pt.p, prm);
    sol.points.push_back(pt);
  };
  store(s);
  for (std::size_t i = 0; i < n; ++i) {
    s = rk4(s, h, prm, axis);
    store(s);
  }
  sol.energy_trace.resize(n + 1);
  sol.action_cumulative.assign(n + 1, 0.0);
  double prev_g = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const PhasePoint& pt = sol.points[i];
    sol.energy_trace[i] = hamiltonian(pt, prm, axis);
    const double g = path_cost(pt.q, pt.r, prm);
    if (i > 0) sol.action_cumulative[i] = sol.action_cumulative[i - 1] + 0.5 * h * (prev_g + g);
    prev_g = g;
  }
  sol.energy = sol.energy_trace.front();
  double drift = 0.0;
  for (double e : sol.energy_trace) drift = std::max(drift, std::abs(e - sol.energy));
  sol.energy_drift = std::isfinite(drift) ? drift : std::numeric_limits<double>::infinity();
  sol.action = sol.action_cumulative.back();
  return sol;
}

double path_action(const std::vector<BlochVector>& q, const std::vector<Eigen::Vector3d>& p,
                   double dt, const SystemParams& prm, DriveAxis axis) {
  const std::size_t m = q.size();
  if (m < 3 || p.size() != m) throw ValidationError("path_action: need >= 3 matching points");
  auto qd = [&](std::size_t i) -> Eigen::Vector3d {
    if (i == 0) return (-3.0 * q[0].vec() + 4.0 * q[1].vec() - q[2].vec()) / (2.0 * dt);
    if (i == m - 1) {
      return (3.0 * q[m - 1].vec() - 4.0 * q[m - 2].vec() + q[m - 3].vec()) / (2.0 * dt);
    }
    return (q[i + 1].vec() - q[i - 1].vec()) / (2.0 * dt);
  };
  double s = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = optimal_record(q[i], p[i], prm);
    const double l = -p[i].dot(qd(i)) + hamiltonian(q[i], p[i], r, prm, axis);
    if (i > 0) s += 0.5 * dt * (prev + l);
    prev = l;
  }
  return s;
}

double noise_free_arrival_time(const BlochVector& q_i, const BlochVector& q_f,
                               const SystemParams& prm, DriveAxis axis, double t_lo, double t_hi,
                               double dt) {
  if (!(t_hi > t_lo) || !(t_lo >= 0.0) || !(dt > 0.0)) {
    throw ValidationError("noise_free_arrival_time: need 0 <= t_lo < t_hi and dt > 0");
  }
  // Sample the record-free trajectory on a fine grid; take the first interior
  // local minimum of the distance, else the closest point.
  const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  const PathSolution path = integrate_path(q_i, zero, t_hi, dt, prm, axis);
  std::vector<double> d(path.points.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = distance(path.points[i].q, q_f);
  std::size_t best = d.size();
  for (std::size_t i = 1; i + 1 < d.size(); ++i) {
    if (path.grid.time(i) >= t_lo && d[i] <= d[i - 1] && d[i] < d[i + 1]) {
      best = i;
      break;
    }
  }
  if (best == d.size()) {
    best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (path.grid.time(i) >= t_lo && d[i] < best_d) {
        best_d = d[i];
        best = i;
      }
    }
  }
  auto dist = [&](double T) {
    return T <= 0.0 ? distance(q_i, q_f) : distance(endpoint(q_i, zero, T, dt, prm, axis), q_f);
  };
  double a = std::max(t_lo, path.grid.time(best) - path.grid.dt);
  double b = std::min(t_hi, path.grid.time(best) + path.grid.dt);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    const double c = b - phi * (b - a);
    const double d = a + phi * (b - a);
    if (dist(c) < dist(d)) b = d;
    else a = c;
  }
  return 0.5 * (a + b);
}

std::array<double, 3> halton3(std::uint64_t i) {
  auto radical = [](std::uint64_t n, std::uint64_t base) {
    double f = 1.0;
    double r = 0.0;
    while (n > 0) {
      f /= static_cast<double>(base);
      r += f * static_cast<double>(n % base);
      n /= base;
    }
    return r;
  };
  // Skip the origin of the sequence.
  return {radical(i + 1, 2), radical(i + 1, 3), radical(i + 1, 5)};
}

namespace {

struct Objective {
  BlochVector q_i, q_f;
  double T, dt;
  const SystemParams* prm;
  DriveAxis axis;

  double operator()(const Eigen::Vector3d& p0) const {
    const BlochVector e = endpoint(q_i, p0, T, dt, *prm, axis);
    const double d = distance(e, q_f);
    return std::isfinite(d) ? d : 1e3;
  }
};

double gsl_objective(const gsl_vector* v, void* params) {
  const auto* obj = static_cast<const Objective*>(params);
  return (*obj)(Eigen::Vector3d(gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2)));
}

// Nelder-Mead from p0 with the given initial simplex size.
Eigen::Vector3d nelder_mead(const Objective& obj, const Eigen::Vector3d& p0, double step,
                            double size_tol, double value_tol, int max_iter) {
  gsl_multimin_function fn{&gsl_objective, 3, const_cast<Objective*>(&obj)};
  gsl_vector* x = gsl_vector_alloc(3);
  gsl_vector* ss = gsl_vector_alloc(3);
  for (int k = 0; k < 3; ++k) {
    gsl_vector_set(x, k, p0(k));
    gsl_vector_set(ss, k, step);
  }
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);
  gsl_multimin_fminimizer_set(m, &fn, x, ss);
  for (int it = 0; it < max_iter; ++it) {
    if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (m->fval < value_tol) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), size_tol) == GSL_SUCCESS) break;
  }
  const Eigen::Vector3d out(gsl_vector_get(m->x, 0), gsl_vector_get(m->x, 1),
                            gsl_vector_get(m->x, 2));
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  return out;
}

}  // namespace

PathSolution shoot(const BlochVector& q_i, const BlochVector& q_f, double T,
                   const SystemParams& prm, DriveAxis axis, const ShootOptions& o) {
  if (!(T > 0.0)) throw ValidationError("shoot: T must be > 0");
  if (q_i.norm() > 1.0 + 1e-9 || q_f.norm() > 1.0 + 1e-9) {
    throw ValidationError("shoot: boundary states must lie in the unit ball");
  }
  if (o.starts < 1 || o.refine < 1) throw ValidationError("shoot: need >= 1 start");
  gsl_set_error_handler_off();

  const double coarse_dt = std::min(o.coarse_dt, T / 4.0);
  const double fine_dt = std::min(o.dt, T / 4.0);
  const Objective coarse{q_i, q_f, T, coarse_dt, &prm, axis};
  const Objective fine{q_i, q_f, T, fine_dt, &prm, axis};

  struct Start {
    Eigen::Vector3d p0;
    double value;
  };
  std::vector<Start> starts;
  starts.reserve(static_cast<std::size_t>(o.starts));
  for (int i = 0; i < o.starts; ++i) {
    const auto h = halton3(static_cast<std::uint64_t>(i));
    const Eigen::Vector3d p0((2.0 * h[0] - 1.0) * o.p_box, (2.0 * h[1] - 1.0) * o.p_box,
                             (2.0 * h[2] - 1.0) * o.p_box);
    starts.push_back({p0, coarse(p0)});
  }
  std::stable_sort(starts.begin(), starts.end(),
                   [](const Start& a, const Start& b) { return a.value < b.value; });

  const double polished = o.tolerance * 1e-3;
  std::vector<PathSolution> candidates;
  for (int k = 0; k < std::min<int>(o.refine, static_cast<int>(starts.size())); ++k) {
    Eigen::Vector3d p0 = nelder_mead(coarse, starts[k].p0, 0.5, 1e-6, polished, o.max_iterations);
    p0 = nelder_mead(fine, p0, 0.02, 1e-10, polished * 1e-2, o.max_iterations);
    PathSolution sol = integrate_path(q_i, p0, T, fine_dt, prm, axis);
    sol.endpoint_residual = distance(sol.points.back().q, q_f);
    if (!std::isfinite(sol.endpoint_residual)) continue;
    candidates.push_back(std::move(sol));
  }
  if (candidates.empty()) {
    NoConvergenceError e("shoot: every start diverged");
    e.best_residual = std::numeric_limits<double>::infinity();
    throw e;
  }
  // Residuals below `polished` count as ties, then the smallest |S| wins.
  auto key = [polished](const PathSolution& s) { return std::max(s.endpoint_residual, polished); };
  const auto best = std::min_element(candidates.begin(), candidates.end(),
                                     [&](const PathSolution& a, const PathSolution& b) {
                                       if (key(a) != key(b)) return key(a) < key(b);
                                       return std::abs(a.action) < std::abs(b.action);
                                     });
  if (!(best->endpoint_residual < o.tolerance)) {
    NoConvergenceError e("shoot: best endpoint residual " + std::to_string(best->endpoint_residual) +
                         " exceeds tolerance " + std::to_string(o.tolerance));
    e.best_residual = best->endpoint_residual;
    throw e;
  }
  return std::move(*best);
}

}  // namespace nhq
