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

#include "ratewarp/window.hpp"

#include <cmath>

#include "ratewarp/errors.hpp"

namespace ratewarp {

double bessel_i0(double x) {
  const double half_sq = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= half_sq / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-12 * sum) break;
  }
  return sum;
}

std::vector<double> hann_window(std::size_t length) {
  if (length == 0) throw DataError("hann_window: length must be >= 1");
  std::vector<double> w(length);
  const double step = 2.0 * M_PI / static_cast<double>(length);
  for (std::size_t n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(step * static_cast<double>(n));
  }
  return w;
}

std::vector<double> kaiser_window(std::size_t length, double beta) {
  if (length == 0) throw DataError("kaiser_window: length must be >= 1");
  if (beta < 0.0) throw DataError("kaiser_window: beta must be >= 0");
  std::vector<double> w(length);
  if (length == 1) {
    w[0] = 1.0;
    return w;
  }
  const double denom = bessel_i0(beta);
  const double half = static_cast<double>(length - 1) / 2.0;
  for (std::size_t n = 0; n < length; ++n) {
    const double r = (static_cast<double>(n) - half) / half;
    w[n] = bessel_i0(beta * std::sqrt(1.0 - r * r)) / denom;
  }
  return w;
}

}  // namespace ratewarp
