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

#include "nhq/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "nhq/errors.hpp"
#include "nhq/kraus.hpp"
#include "rk4.hpp"

namespace nhq {

namespace {

Mat2 qubit_hamiltonian(double omega, DriveAxis axis) {
  Mat2 h;
  if (axis == DriveAxis::X) {
    h << 0.0, omega, omega, 0.0;
  } else {
    h << 0.0, cplx(0.0, -omega), cplx(0.0, omega), 0.0;
  }
  return h;
}

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Mat2 outer(int i, int j) {
  Mat2 m = Mat2::Zero();
  m(i, j) = 1.0;
  return m;
}

}  // namespace

Vec4 vectorize(const Mat2& rho) { return {rho(0, 0), rho(0, 1), rho(1, 0), rho(1, 1)}; }

Mat2 unvectorize(const Vec4& v) {
  Mat2 m;
  m << v(0), v(1), v(2), v(3);
  return m;
}

LiouvillianMatrix build_liouvillian(const SystemParams& p, DriveAxis axis) {
  const Mat2 I = Mat2::Identity();
  const Mat2 H = qubit_hamiltonian(p.omega(), axis);
  const Mat2 Pe = outer(1, 1);
  const Mat2 Pf = outer(0, 0);
  const Mat2 sef = outer(1, 0);  // |e><f|
  const cplx mi(0.0, -1.0);
  Mat4 L = mi * (kron(H, I) - kron(I, H.transpose())) -
           (0.5 * p.gamma_g()) * (kron(Pe, I) + kron(I, Pe)) -
           (0.5 * p.gamma_e()) * (kron(Pf, I) + kron(I, Pf)) + p.gamma_e() * kron(sef, sef);
  return {L, axis, p};
}

EigenDecomposition eigen_decompose(const Mat4& m) {
  Eigen::ComplexEigenSolver<Mat4> es(m, true);
  EigenDecomposition d;
  Mat4 V = es.eigenvectors();
  for (int k = 0; k < 4; ++k) {
    d.eigenvalues[k] = es.eigenvalues()(k);
    V.col(k).normalize();
  }

  // Exact (numerically indistinguishable) eigenvalue clusters: replace the
  // vectors by an orthonormal null-space basis when the cluster is
  // diagonalizable, flag it as defective otherwise.
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  bool defective = false;
  std::array<bool, 4> done{};
  for (int i = 0; i < 4; ++i) {
    if (done[i]) continue;
    std::vector<int> cluster{i};
    for (int j = i + 1; j < 4; ++j) {
      const double tol = 1e-9 * std::max(1.0, std::abs(d.eigenvalues[i]));
      if (!done[j] && std::abs(d.eigenvalues[j] - d.eigenvalues[i]) <= tol) cluster.push_back(j);
    }
    for (int k : cluster) done[k] = true;
    if (cluster.size() < 2) continue;
    cplx mean = 0.0;
    for (int k : cluster) mean += d.eigenvalues[k];
    mean /= static_cast<double>(cluster.size());
    Eigen::JacobiSVD<Mat4> svd(m - mean * Mat4::Identity(), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();  // descending
    int null_dim = 0;
    for (int k = 3; k >= 0 && sv(k) <= 1e-7 * scale; --k) ++null_dim;
    if (null_dim >= static_cast<int>(cluster.size())) {
      for (std::size_t c = 0; c < cluster.size(); ++c) V.col(cluster[c]) = svd.matrixV().col(3 - c);
    } else {
      defective = true;
    }
  }
  d.right = V;
  d.conditioning = defective ? 0.0 : Eigen::JacobiSVD<Mat4>(V).singularValues()(3);
  return d;
}

double eigenvector_overlap(const EigenDecomposition& d, int i, int j) {
  const auto a = d.right.col(i);
  const auto b = d.right.col(j);
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

LiouvillianSpectrum spectral_decompose(const LiouvillianMatrix& L, const Mat2& rho0) {
  const EigenDecomposition d = eigen_decompose(L.entries);
  if (d.conditioning < kEpConditioning) {
    EpDegenerateError e("spectral_decompose: eigenvectors nearly parallel (conditioning " +
                        std::to_string(d.conditioning) +
                        "), too close to an exceptional point; use evolve_ode");
    e.conditioning = d.conditioning;
    throw e;
  }
  const Mat4 W = d.right.inverse();
  const Vec4 v0 = vectorize(rho0);
  LiouvillianSpectrum s;
  s.conditioning = d.conditioning;
  for (int k = 0; k < 4; ++k) {
    s.eigenvalues[k] = d.eigenvalues[k];
    s.right[k] = unvectorize(d.right.col(k));
    // Row k of V^-1 pairs with vec(R) entrywise, so L_k is its reshaped transpose.
    s.left[k] = unvectorize(W.row(k).transpose()).transpose();
    s.weights[k] = (W.row(k) * v0)(0);
  }
  return s;
}

Mat2 evolve_spectral(const LiouvillianSpectrum& s, double t) {
  if (!(t >= 0.0)) throw ValidationError("evolve_spectral: t must be >= 0");
  Mat2 out = Mat2::Zero();
  for (int k = 0; k < 4; ++k) out += s.weights[k] * std::exp(s.eigenvalues[k] * t) * s.right[k];
  return out;
}

std::vector<Mat2> evolve_ode(const LiouvillianMatrix& L, const Mat2& rho0, const TimeGrid& grid,
                             const OdeOptions& opts) {
  const Mat4& A = L.entries;
  auto f = [&A](const Vec4& v) -> Vec4 { return A * v; };
  auto vs = detail::rk4_integrate<Vec4>(vectorize(rho0), grid, f, opts.check_error,
                                        opts.max_local_error, "evolve_ode");
  std::vector<Mat2> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(unvectorize(v));
  return out;
}

std::vector<Mat2> evolve_normalized(const LiouvillianMatrix& L, const Mat2& rho0,
                                    const TimeGrid& grid, const OdeOptions& opts) {
  const cplx tr = rho0.trace();
  if (std::abs(tr) <= 0.0) throw ValidationError("evolve_normalized: rho0 has zero trace");
  const Mat4& A = L.entries;
  const double gg = L.params.gamma_g();
  auto f = [&A, gg](const Vec4& v) -> Vec4 { return A * v + (gg * v(3).real()) * v; };
  auto vs = detail::rk4_integrate<Vec4>(vectorize(Mat2(rho0 / tr)), grid, f, opts.check_error,
                                        opts.max_local_error, "evolve_normalized");
  std::vector<Mat2> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(unvectorize(v));
  return out;
}

Mat3 lindblad_rhs(const Mat3& rho, const SystemParams& p, DriveAxis axis) {
  const Mat3 H = drive_hamiltonian(p.omega(), axis);
  const cplx mi(0.0, -1.0);
  Mat3 out = mi * (H * rho - rho * H);
  auto dissipator = [&rho, &out](int to, int from, double rate) {
    if (rate == 0.0) return;
    const cplx pop = rho(from, from);
    out(to, to) += rate * pop;
    // -1/2 {|from><from|, rho}
    for (int k = 0; k < 3; ++k) {
      out(from, k) -= 0.5 * rate * rho(from, k);
      out(k, from) -= 0.5 * rate * rho(k, from);
    }
  };
  dissipator(kG, kE, p.gamma_g());
  dissipator(kE, kF, p.gamma_e());
  return out;
}

std::vector<Mat3> evolve_lindblad(const SystemParams& p, DriveAxis axis, const Mat3& rho0,
                                  const TimeGrid& grid, const OdeOptions& opts) {
  auto f = [&p, axis](const Mat3& r) -> Mat3 { return lindblad_rhs(r, p, axis); };
  return detail::rk4_integrate<Mat3>(rho0, grid, f, opts.check_error, opts.max_local_error,
                                     "evolve_lindblad");
}

namespace {

struct PairInfo {
  double gap = 0.0;
  double overlap = 0.0;
};

PairInfo most_parallel_pair(const EigenDecomposition& d) {
  PairInfo best{0.0, -1.0};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      const double ov = eigenvector_overlap(d, i, j);
      if (ov > best.overlap) best = {std::abs(d.eigenvalues[i] - d.eigenvalues[j]), ov};
    }
  return best;
}

EigenDecomposition decompose_at(double ge, double gg, double omega, DriveAxis axis) {
  // dt only feeds validation; the Liouvillian itself does not depend on it.
  const SystemParams p(ge, gg, omega, 0.0, 1e-3);
  return eigen_decompose(build_liouvillian(p, axis).entries);
}

}  // namespace

ExceptionalPoint find_ep(double gamma_e, double gamma_g, DriveAxis axis,
                         const EpSearchOptions& o) {
  if (!(o.omega_lo > 0.0) || !(o.omega_hi > o.omega_lo) || o.scan_points < 3) {
    throw ValidationError("find_ep: need 0 < omega_lo < omega_hi and >= 3 scan points");
  }
  auto cond = [&](double w) { return decompose_at(gamma_e, gamma_g, w, axis).conditioning; };

  const int n = o.scan_points;
  const double step = (o.omega_hi - o.omega_lo) / (n - 1);
  int best = 0;
  double best_c = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double c = cond(o.omega_lo + i * step);
    if (c < best_c) {
      best_c = c;
      best = i;
    }
  }
  if (best == 0 || best == n - 1) {
    throw NotFoundError("find_ep: no interior conditioning minimum in the omega range");
  }

  // Golden-section refinement on the bracketing scan cell pair.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = o.omega_lo + (best - 1) * step;
  double b = o.omega_lo + (best + 1) * step;
  double c = b - phi * (b - a);
  double e = a + phi * (b - a);
  double fc = cond(c);
  double fe = cond(e);
  while (b - a > o.tolerance) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - phi * (b - a);
      fc = cond(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + phi * (b - a);
      fe = cond(e);
    }
  }
  const double w = fc <= fe ? c : e;
  const EigenDecomposition d = decompose_at(gamma_e, gamma_g, w, axis);
  const PairInfo pair = most_parallel_pair(d);
  if (!(pair.overlap > o.min_overlap)) {
    throw NotFoundError("find_ep: conditioning minimum at omega=" + std::to_string(w) +
                        " is not a coalescence (overlap " + std::to_string(pair.overlap) + ")");
  }
  return {w, pair.gap, pair.overlap, d.conditioning};
}

SpectrumRow spectrum_row(double gamma_e, double gamma_g, double omega, DriveAxis axis) {
  const EigenDecomposition d = decompose_at(gamma_e, gamma_g, omega, axis);
  SpectrumRow row;
  row.omega = omega;
  row.eigenvalues = d.eigenvalues;
  std::sort(row.eigenvalues.begin(), row.eigenvalues.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  const PairInfo pair = most_parallel_pair(d);
  row.gap = pair.gap;
  row.overlap = pair.overlap;
  row.conditioning = d.conditioning;
  return row;
}

std::vector<SpectrumRow> scan_spectrum(double gamma_e, double gamma_g, double omega_lo,
                                       double omega_hi, int points, DriveAxis axis) {
  if (points < 1) throw ValidationError("scan_spectrum: points must be >= 1");
  std::vector<SpectrumRow> rows;
  rows.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double w = points == 1 ? omega_lo : omega_lo + (omega_hi - omega_lo) * i / (points - 1);
    rows.push_back(spectrum_row(gamma_e, gamma_g, w, axis));
  }
  return rows;
}

}  // namespace nhq
