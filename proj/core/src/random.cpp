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

#include "nhq/random.hpp"

namespace nhq {

Rng stream_for(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t a = SplitMix64::mix(seed + 0x632BE59BD9B4E019ULL);
  const std::uint64_t b = SplitMix64::mix(a ^ (index * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL));
  return Rng(b);
}

}  // namespace nhq
