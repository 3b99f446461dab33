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
#include <span>
#include <vector>

namespace ratewarp {

// Dense row-major 2-D float array. Rows are channels / frequency bins,
// columns are time, matching the (C, T) layout used throughout.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, float fill = 0.0f)
      : rows(r), cols(c), data(r * c, fill) {}

  float* row(std::size_t r) { return data.data() + r * cols; }
  const float* row(std::size_t r) const { return data.data() + r * cols; }

  std::span<float> row_span(std::size_t r) { return {row(r), cols}; }
  std::span<const float> row_span(std::size_t r) const { return {row(r), cols}; }

  float& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  bool empty() const { return rows == 0 || cols == 0; }
};

}  // namespace ratewarp
