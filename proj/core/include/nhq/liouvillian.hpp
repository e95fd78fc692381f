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

#include <array>
#include <functional>
#include <vector>

#include "nhq/conventions.hpp"
#include "nhq/params.hpp"

namespace nhq {

/// Generator of d vec(rho)/dt = L vec(rho) for the post-selected qubit, with
/// vec(rho) = (rho_ff, rho_fe, rho_ef, rho_ee).
struct LiouvillianMatrix {
  Mat4 entries;
  DriveAxis axis;
  SystemParams params;
};

LiouvillianMatrix build_liouvillian(const SystemParams& p, DriveAxis axis);

Vec4 vectorize(const Mat2& rho);
Mat2 unvectorize(const Vec4& v);

struct LiouvillianSpectrum {
  std::array<cplx, 4> eigenvalues{};
  /// Right eigenvectors reshaped to 2x2 (unit Frobenius norm).
  std::array<Mat2, 4> right{};
  /// Left eigenvectors as 2x2 matrices with Tr[L_j R_k] = delta_jk.
  std::array<Mat2, 4> left{};
  /// C_k = Tr[L_k rho(0)].
  std::array<cplx, 4> weights{};
  /// Smallest singular value of the unit-column right eigenvector matrix.
  double conditioning = 0.0;
};

/// Eigenpairs and conditioning without initial-condition weights. Never throws
/// for near-defective matrices; exact degenerate clusters that are
/// diagonalizable get an orthonormal eigenbasis.
struct EigenDecomposition {
  std::array<cplx, 4> eigenvalues{};
  Mat4 right;  // columns, unit norm
  double conditioning = 0.0;
};
EigenDecomposition eigen_decompose(const Mat4& m);

/// Pairwise eigenvector overlap |<R_i,R_j>| / (|R_i||R_j|).
double eigenvector_overlap(const EigenDecomposition& d, int i, int j);

/// Throws EpDegenerateError when the conditioning is below kEpConditioning.
LiouvillianSpectrum spectral_decompose(const LiouvillianMatrix& L, const Mat2& rho0);
inline constexpr double kEpConditioning = 1e-6;

/// sum_k C_k exp(lambda_k t) R_k.
Mat2 evolve_spectral(const LiouvillianSpectrum& s, double t);

/// Options for the fixed-step RK4 driver. The local error is estimated by step
/// doubling; a StepSizeError is thrown when it exceeds max_local_error.
struct OdeOptions {
  double max_local_error = 1e-8;
  bool check_error = true;
};

/// Linear qubit evolution, RK4 on the grid. Returns one 2x2 density per grid point.
std::vector<Mat2> evolve_ode(const LiouvillianMatrix& L, const Mat2& rho0, const TimeGrid& grid,
                             const OdeOptions& opts = {});

/// Normalized nonlinear evolution d rho = L rho dt + gamma_g <e|rho|e> rho dt.
std::vector<Mat2> evolve_normalized(const LiouvillianMatrix& L, const Mat2& rho0,
                                    const TimeGrid& grid, const OdeOptions& opts = {});

/// Full three-level Lindblad generator
///   -i[H, rho] + gamma_g D[|g><e|] rho + gamma_e D[|e><f|] rho.
Mat3 lindblad_rhs(const Mat3& rho, const SystemParams& p, DriveAxis axis);

std::vector<Mat3> evolve_lindblad(const SystemParams& p, DriveAxis axis, const Mat3& rho0,
                                  const TimeGrid& grid, const OdeOptions& opts = {});

struct ExceptionalPoint {
  double omega_ep = 0.0;
  /// Gap |lambda_i - lambda_j| of the most parallel eigenvector pair at omega_ep.
  double gap = 0.0;
  /// Their overlap; > 0.999 certifies coalescence.
  double overlap = 0.0;
  double conditioning = 0.0;
};

struct EpSearchOptions {
  double omega_lo = 0.05;
  double omega_hi = 3.0;
  int scan_points = 400;
  double tolerance = 1e-10;
  double min_overlap = 0.999;
};

/// Scans the conditioning of the right-eigenvector matrix over omega, refines
/// the interior minimum by golden-section search and certifies coalescence by
/// eigenvector overlap. Throws NotFoundError otherwise.
ExceptionalPoint find_ep(double gamma_e, double gamma_g, DriveAxis axis,
                         const EpSearchOptions& opts = {});

/// Row of a spectrum scan: eigenvalues sorted by (real, imag), most-parallel
/// pair gap and overlap, conditioning.
struct SpectrumRow {
  double omega = 0.0;
  std::array<cplx, 4> eigenvalues{};
  double gap = 0.0;
  double overlap = 0.0;
  double conditioning = 0.0;
};
SpectrumRow spectrum_row(double gamma_e, double gamma_g, double omega, DriveAxis axis);
std::vector<SpectrumRow> scan_spectrum(double gamma_e, double gamma_g, double omega_lo,
                                       double omega_hi, int points, DriveAxis axis);

}  // namespace nhq
