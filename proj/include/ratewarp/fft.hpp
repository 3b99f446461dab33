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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace ratewarp::fft {

bool is_pow2(std::size_t n);

// In-place forward DFT. Power-of-two sizes run the radix-2 path; anything
// else falls back to a direct O(n^2) transform, so keep analysis sizes at
// powers of two where speed matters.
void fft(std::vector<std::complex<double>>& a);

// In-place inverse DFT, normalized by 1/n.
void ifft(std::vector<std::complex<double>>& a);

// Real-input transform of x zero-padded (or truncated) to n points.
// Returns bins 0..n/2 inclusive.
std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n);
std::vector<std::complex<double>> rfft(std::span<const float> x, std::size_t n);

}  // namespace ratewarp::fft
