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

namespace ratewarp::kernels {

// Inner-loop primitives behind the convolution, resampling, and correlation
// code. Every entry has a scalar reference implementation and may have an
// AVX2 variant; the two are equivalence-tested against a double-precision
// oracle. Dispatch happens once, at first use.
struct KernelTable {
  // sum_i a[i] * b[i]
  float (*dot)(const float* a, const float* b, std::size_t n);

  // y[i] += alpha * x[i]
  void (*axpy)(float* y, const float* x, float alpha, std::size_t n);

  // x[i] = x[i] > 0 ? x[i] : slope * x[i], in place
  void (*leaky_relu)(float* x, std::size_t n, float slope);

  // Scatter pass of a transposed convolution for one (row_in, row_out) pair:
  //   out[t*stride - pad + j] += x[t] * w[j]  for t in [0, t_in), j in [0, k),
  // skipping positions outside [0, t_out).
  void (*tconv_scatter)(float* out, std::size_t t_out, const float* x,
                        std::size_t t_in, const float* w, std::size_t k,
                        std::size_t stride, std::size_t pad);
};

// Reference implementations; always available.
const KernelTable& scalar_table();

// AVX2+FMA implementations, or nullptr when the CPU (or build) lacks them.
const KernelTable* avx2_table();

// Table selected at runtime. RATEWARP_SIMD={auto,scalar,avx2} overrides the
// CPU probe; "avx2" silently falls back to scalar when unsupported.
const KernelTable& active();

// Name of the active table: "scalar" or "avx2".
const char* active_name();

}  // namespace ratewarp::kernels
