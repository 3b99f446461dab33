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

namespace ratewarp {

// Zeroth-order modified Bessel function, power series summed to a relative
// tolerance of 1e-12.
double bessel_i0(double x);

// Periodic Hann window: w[n] = 0.5 - 0.5*cos(2*pi*n/length). Windows at 50%
// overlap sum to 1.
std::vector<double> hann_window(std::size_t length);

// Symmetric Kaiser window, peak-normalized:
// w[n] = I0(beta*sqrt(1 - (2n/(L-1) - 1)^2)) / I0(beta).
std::vector<double> kaiser_window(std::size_t length, double beta);

}  // namespace ratewarp
