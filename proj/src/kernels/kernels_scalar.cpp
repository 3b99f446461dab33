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

#include "ratewarp/kernels.hpp"

#include <algorithm>

namespace ratewarp::kernels {
namespace {

float dot_scalar(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_scalar(float* y, const float* x, float alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void leaky_relu_scalar(float* x, std::size_t n, float slope) {
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < 0.0f) x[i] *= slope;
  }
}

void tconv_scatter_scalar(float* out, std::size_t t_out, const float* x,
                          std::size_t t_in, const float* w, std::size_t k,
                          std::size_t stride, std::size_t pad) {
  for (std::size_t t = 0; t < t_in; ++t) {
    const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(t * stride) -
                                static_cast<std::ptrdiff_t>(pad);
    const std::size_t j0 =
        base < 0 ? static_cast<std::size_t>(-base) : std::size_t{0};
    const std::ptrdiff_t jend_s =
        std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(k),
                                 static_cast<std::ptrdiff_t>(t_out) - base);
    if (jend_s <= static_cast<std::ptrdiff_t>(j0)) continue;
    const std::size_t jend = static_cast<std::size_t>(jend_s);
    const float xv = x[t];
    float* o = out + base;
    for (std::size_t j = j0; j < jend; ++j) o[j] += xv * w[j];
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{dot_scalar, axpy_scalar, leaky_relu_scalar,
                                 tconv_scatter_scalar};
  return table;
}

}  // namespace ratewarp::kernels
