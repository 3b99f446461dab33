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

#include "ratewarp/fft.hpp"

#include <cmath>

namespace ratewarp::fft {
namespace {

void transform_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * M_PI / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

void transform_direct(std::vector<std::complex<double>>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<std::complex<double>> out(n);
  const double sign = inverse ? 2.0 : -2.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = sign * M_PI * static_cast<double>(k) *
                         static_cast<double>(t) / static_cast<double>(n);
      acc += a[t] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  a = std::move(out);
}

void transform(std::vector<std::complex<double>>& a, bool inverse) {
  if (a.size() <= 1) return;
  if (is_pow2(a.size())) {
    transform_pow2(a, inverse);
  } else {
    transform_direct(a, inverse);
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v *= scale;
  }
}

template <typename T>
std::vector<std::complex<double>> rfft_impl(std::span<const T> x, std::size_t n) {
  std::vector<std::complex<double>> buf(n, {0.0, 0.0});
  const std::size_t m = std::min(n, x.size());
  for (std::size_t i = 0; i < m; ++i) buf[i] = std::complex<double>(x[i], 0.0);
  transform(buf, false);
  buf.resize(n / 2 + 1);
  return buf;
}

}  // namespace

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft(std::vector<std::complex<double>>& a) { transform(a, false); }

void ifft(std::vector<std::complex<double>>& a) { transform(a, true); }

std::vector<std::complex<double>> rfft(std::span<const double> x, std::size_t n) {
  return rfft_impl(x, n);
}

std::vector<std::complex<double>> rfft(std::span<const float> x, std::size_t n) {
  return rfft_impl(x, n);
}

}  // namespace ratewarp::fft
