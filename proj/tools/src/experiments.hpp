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

#include <ostream>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace nhq::cli {

/// Runs a validated configuration, writing its artifacts and manifest.json
/// into cfg.out. Returns the artifact file names relative to cfg.out.
std::vector<std::string> run_experiment(const RunConfig& cfg, std::ostream& log);

}  // namespace nhq::cli
