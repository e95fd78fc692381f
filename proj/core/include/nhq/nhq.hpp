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

#include "nhq/bloch_sde.hpp"
#include "nhq/conventions.hpp"
#include "nhq/csv.hpp"
#include "nhq/density.hpp"
#include "nhq/ensemble.hpp"
#include "nhq/errors.hpp"
#include "nhq/kraus.hpp"
#include "nhq/liouvillian.hpp"
#include "nhq/optimal_path.hpp"
#include "nhq/params.hpp"
#include "nhq/phase_space.hpp"
#include "nhq/random.hpp"
#include "nhq/trajectory.hpp"

namespace nhq {
inline constexpr const char* kVersion = "0.3.0";
}
