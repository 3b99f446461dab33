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

// Built with -mavx2 -mfma; compiles to nothing elsewhere. The dispatcher only
// hands these out after __builtin_cpu_supports confirms the host.

#include "ratewarp/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cstdint>

namespace ratewarp::kernels {
namespace {

float dot_avx2(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  __m256 acc2 = _mm256_setzero_ps();
  __m256 acc3 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 8), _mm256_loadu_ps(b + i + 8), acc1);
    acc2 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 16), _mm256_loadu_ps(b + i + 16), acc2);
    acc3 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i + 24), _mm256_loadu_ps(b + i + 24), acc3);
  }
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc0);
  }
  acc0 = _mm256_add_ps(_mm256_add_ps(acc0, acc1), _mm256_add_ps(acc2, acc3));
  __m128 lo = _mm256_castps256_ps128(acc0);
  __m128 hi = _mm256_extractf128_ps(acc0, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  float acc = _mm_cvtss_f32(lo);
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_avx2(float* y, const float* x, float alpha, std::size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256 y0 = _mm256_loadu_ps(y + i);
    __m256 y1 = _mm256_loadu_ps(y + i + 8);
    y0 = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), y0);
    y1 = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i + 8), y1);
    _mm256_storeu_ps(y + i, y0);
    _mm256_storeu_ps(y + i + 8, y1);
  }
  for (; i + 8 <= n; i += 8) {
    __m256 y0 = _mm256_loadu_ps(y + i);
    y0 = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), y0);
    _mm256_storeu_ps(y + i, y0);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void leaky_relu_avx2(float* x, std::size_t n, float slope) {
  const __m256 vs = _mm256_set1_ps(slope);
  const __m256 zero = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_loadu_ps(x + i);
    __m256 pos = _mm256_max_ps(v, zero);
    __m256 neg = _mm256_min_ps(v, zero);
    _mm256_storeu_ps(x + i, _mm256_fmadd_ps(vs, neg, pos));
  }
  for (; i < n; ++i) {
    if (x[i] < 0.0f) x[i] *= slope;
  }
}

void tconv_edge_scalar(float* out, std::size_t t_out, const float* x,
                       const float* w, std::size_t k, std::size_t stride,
                       std::size_t pad, std::size_t t) {
  const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(t * stride) -
                              static_cast<std::ptrdiff_t>(pad);
  const std::size_t j0 =
      base < 0 ? static_cast<std::size_t>(-base) : std::size_t{0};
  const std::ptrdiff_t jend =
      std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(k),
                               static_cast<std::ptrdiff_t>(t_out) - base);
  const float xv = x[t];
  for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(j0); j < jend; ++j) {
    out[base + j] += xv * w[j];
  }
}

// One (row_in, row_out) scatter pass. k == 16 and k == 4 are the generator's
// shapes; consecutive t overlap by k - stride so the loop stays sequential.
void tconv_scatter_avx2(float* out, std::size_t t_out, const float* x,
                        std::size_t t_in, const float* w, std::size_t k,
                        std::size_t stride, std::size_t pad) {
  if (k != 16 && k != 4) {
    scalar_table().tconv_scatter(out, t_out, x, t_in, w, k, stride, pad);
    return;
  }

  // [t_lo, t_hi): input positions whose whole write window is in range.
  std::size_t t_lo = 0;
  while (t_lo < t_in &&
         static_cast<std::ptrdiff_t>(t_lo * stride) <
             static_cast<std::ptrdiff_t>(pad)) {
    ++t_lo;
  }
  std::size_t t_hi = t_in;
  while (t_hi > t_lo && (t_hi - 1) * stride - pad + k > t_out) --t_hi;

  for (std::size_t t = 0; t < t_lo; ++t) {
    tconv_edge_scalar(out, t_out, x, w, k, stride, pad, t);
  }
  if (k == 16) {
    const __m256 w0 = _mm256_loadu_ps(w);
    const __m256 w1 = _mm256_loadu_ps(w + 8);
    for (std::size_t t = t_lo; t < t_hi; ++t) {
      float* o = out + t * stride - pad;
      const __m256 xv = _mm256_set1_ps(x[t]);
      _mm256_storeu_ps(o, _mm256_fmadd_ps(xv, w0, _mm256_loadu_ps(o)));
      _mm256_storeu_ps(o + 8, _mm256_fmadd_ps(xv, w1, _mm256_loadu_ps(o + 8)));
    }
  } else {
    const __m128 w0 = _mm_loadu_ps(w);
    for (std::size_t t = t_lo; t < t_hi; ++t) {
      float* o = out + t * stride - pad;
      const __m128 xv = _mm_set1_ps(x[t]);
      _mm_storeu_ps(o, _mm_fmadd_ps(xv, w0, _mm_loadu_ps(o)));
    }
  }
  for (std::size_t t = t_hi; t < t_in; ++t) {
    tconv_edge_scalar(out, t_out, x, w, k, stride, pad, t);
  }
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{dot_avx2, axpy_avx2, leaky_relu_avx2,
                                 tconv_scatter_avx2};
  return &table;
}

}  // namespace ratewarp::kernels

#else

namespace ratewarp::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace ratewarp::kernels

#endif
