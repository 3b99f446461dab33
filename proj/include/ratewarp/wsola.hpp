// Copyright 2026 RateWarp Authors
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

#include <cstddef>
#include <vector>

#include "ratewarp/audio.hpp"

namespace ratewarp {

struct WsolaConfig {
  std::size_t frame_length = 1024;  // samples, must be even
  std::size_t synthesis_hop = 512;  // <= frame_length
  std::size_t tolerance = 512;      // search half-range, <= frame_length
};

// Waveform-similarity overlap-add time-scale modification. Output length is
// exactly target_length(len(input), factor); the sample rate is unchanged.
// `selected_offsets`, when non-null, receives the offset (selected minus
// nominal analysis position) chosen for each synthesis frame.
AudioBuffer wsola(const AudioBuffer& input, double factor,
                  const WsolaConfig& config = {},
                  std::vector<long>* selected_offsets = nullptr);

}  // namespace ratewarp
