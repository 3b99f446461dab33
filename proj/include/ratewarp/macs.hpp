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

#include <cstdint>

namespace ratewarp {

// Multiply-accumulate tally for instrumented runs. Counts are analytic
// (dense layer formulas and actual interpolation taps), not hardware ops.
struct MacCounter {
  std::uint64_t conv = 0;
  std::uint64_t transposed_conv = 0;
  std::uint64_t interp = 0;

  std::uint64_t total() const { return conv + transposed_conv + interp; }

  void reset() { conv = transposed_conv = interp = 0; }
};

}  // namespace ratewarp
