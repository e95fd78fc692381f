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
#include <complex>
#include <random>

#include <nhq/nhq.hpp>

namespace nhq::testing {

inline std::mt19937_64& test_rng() {
  static std::mt19937_64 g(12345);
  return g;
}

/// Uniformly random pure state on the |f>-|e> manifold, as a Bloch vector.
inline BlochVector random_pure_bloch(std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Vector3d v(n(g), n(g), n(g));
  v.normalize();
  return BlochVector::from(v);
}

/// Random 2x2 density matrix (not necessarily pure) with unit trace.
inline Mat2 random_qubit_density(std::mt19937_64& g) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat2 a;
  a << cplx(n(g), n(g)), cplx(n(g), n(g)), cplx(n(g), n(g)), cplx(n(g), n(g));
  Mat2 r = a * a.adjoint();
  return r / r.trace();
}

/// exp(M) by truncated Taylor series with scaling and squaring.
template <class M>
M expm_taylor(const M& m) {
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm *= 0.5;
    ++squarings;
  }
  const M a = m / std::pow(2.0, squarings);
  M term = M::Identity();
  M sum = M::Identity();
  for (int k = 1; k < 30; ++k) {
    term = (term * a) / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.cwiseAbs().maxCoeff();
}

}  // namespace nhq::testing
