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

#include <stdexcept>
#include <string>

namespace nhq {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter or argument outside its documented domain.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A measurement outcome with vanishing probability was applied.
class ImpossibleOutcomeError : public Error {
 public:
  using Error::Error;
};

/// The |f>-|e> manifold carries no population, so Bloch components are undefined.
class ManifoldDepletedError : public Error {
 public:
  using Error::Error;
};

/// Liouvillian eigenvectors are too close to parallel for a spectral expansion.
class EpDegenerateError : public Error {
 public:
  using Error::Error;
  double conditioning = 0.0;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// Fixed-step integrator local error estimate exceeded its bound.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

/// A Bloch trajectory left the unit ball by more than the configured tolerance.
class NormDriftError : public Error {
 public:
  using Error::Error;
};

class EmptyEnsembleError : public Error {
 public:
  using Error::Error;
};

class NoConvergenceError : public Error {
 public:
  using Error::Error;
  double best_residual = 0.0;
};

}  // namespace nhq
