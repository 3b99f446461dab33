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

// Reference implementations kept deliberately naive and structurally
// different from the library code they check.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "ratewarp/fft.hpp"
#include "ratewarp/mat.hpp"
#include "ratewarp/window.hpp"

namespace oracles {

// Modified Bessel I0 via the integral definition (midpoint rule), fully
// independent of the power-series implementation under test.
inline double bessel_i0_integral(double x) {
  constexpr int kSteps = 4000;
  double acc = 0.0;
  for (int i = 0; i < kSteps; ++i) {
    const double theta = (i + 0.5) * std::numbers::pi / kSteps;
    acc += std::exp(x * std::cos(theta));
  }
  return acc / kSteps;
}

// Direct-sum complex DFT.
inline std::vector<std::complex<double>> naive_dft(
    const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k) *
                       static_cast<double>(t) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = acc;
  }
  return out;
}

// Cross-correlation convolution, nested loops, double accumulation.
// weight layout (C_out, C_in, K).
inline ratewarp::Mat naive_conv1d(const ratewarp::Mat& x,
                                  const std::vector<float>& w,
                                  const std::vector<float>& b,
                                  std::size_t c_out, std::size_t k,
                                  std::size_t stride, std::size_t dilation,
                                  std::size_t padding) {
  const std::size_t c_in = x.rows;
  const std::ptrdiff_t t_in = static_cast<std::ptrdiff_t>(x.cols);
  const std::ptrdiff_t numer = t_in + 2 * static_cast<std::ptrdiff_t>(padding) -
                               static_cast<std::ptrdiff_t>(dilation * (k - 1)) -
                               1;
  const std::size_t t_out =
      static_cast<std::size_t>(numer / static_cast<std::ptrdiff_t>(stride)) + 1;
  ratewarp::Mat out(c_out, t_out);
  for (std::size_t co = 0; co < c_out; ++co) {
    for (std::size_t t = 0; t < t_out; ++t) {
      double acc = b[co];
      for (std::size_t ci = 0; ci < c_in; ++ci) {
        for (std::size_t kk = 0; kk < k; ++kk) {
          const std::ptrdiff_t src =
              static_cast<std::ptrdiff_t>(t * stride + kk * dilation) -
              static_cast<std::ptrdiff_t>(padding);
          if (src >= 0 && src < t_in) {
            acc += static_cast<double>(w[(co * c_in + ci) * k + kk]) *
                   x.at(ci, static_cast<std::size_t>(src));
          }
        }
      }
      out.at(co, t) = static_cast<float>(acc);
    }
  }
  return out;
}

// Transposed convolution in gather form: out[t] collects every (t_in, k)
// with t_in*stride - padding + k == t. weight layout (C_in, C_out, K).
inline ratewarp::Mat naive_transposed_conv1d(const ratewarp::Mat& x,
                                             const std::vector<float>& w,
                                             const std::vector<float>& b,
                                             std::size_t c_out, std::size_t k,
                                             std::size_t stride,
                                             std::size_t padding) {
  const std::size_t c_in = x.rows;
  const std::size_t t_out =
      (x.cols - 1) * stride + k - 2 * padding;
  ratewarp::Mat out(c_out, t_out);
  for (std::size_t co = 0; co < c_out; ++co) {
    for (std::size_t t = 0; t < t_out; ++t) {
      double acc = b[co];
      for (std::size_t kk = 0; kk < k; ++kk) {
        const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(t + padding) -
                                   static_cast<std::ptrdiff_t>(kk);
        if (pos < 0 || pos % static_cast<std::ptrdiff_t>(stride) != 0) continue;
        const std::ptrdiff_t ti = pos / static_cast<std::ptrdiff_t>(stride);
        if (ti >= static_cast<std::ptrdiff_t>(x.cols)) continue;
        for (std::size_t ci = 0; ci < c_in; ++ci) {
          acc += static_cast<double>(w[(ci * c_out + co) * k + kk]) *
                 x.at(ci, static_cast<std::size_t>(ti));
        }
      }
      out.at(co, t) = static_cast<float>(acc);
    }
  }
  return out;
}

// Exhaustive minimal DTW cost by enumerating every monotone path over a
// precomputed distance matrix. Exponential; callers keep Ta, Tb <= 6.
inline double brute_force_dtw_cost(const ratewarp::Mat& a,
                                   const ratewarp::Mat& b) {
  const std::size_t n = a.cols;
  const std::size_t m = b.cols;
  std::vector<double> dist(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double sq = 0.0;
      for (std::size_t d = 0; d < a.rows; ++d) {
        const double diff = static_cast<double>(a.at(d, i)) - b.at(d, j);
        sq += diff * diff;
      }
      dist[i * m + j] = std::sqrt(sq);
    }
  }
  struct Rec {
    const std::vector<double>& dist;
    std::size_t n, m;
    double best(std::size_t i, std::size_t j) const {
      const double d = dist[i * m + j];
      if (i + 1 == n && j + 1 == m) return d;
      double tail = std::numeric_limits<double>::infinity();
      if (i + 1 < n && j + 1 < m) tail = std::min(tail, best(i + 1, j + 1));
      if (i + 1 < n) tail = std::min(tail, best(i + 1, j));
      if (j + 1 < m) tail = std::min(tail, best(i, j + 1));
      return d + tail;
    }
  };
  return Rec{dist, n, m}.best(0, 0);
}

// Orthonormal DCT-II rows k = 1..n_coeffs, direct formula.
inline ratewarp::Mat naive_dct(const ratewarp::Mat& x, std::size_t n_coeffs) {
  const std::size_t mdim = x.rows;
  ratewarp::Mat out(n_coeffs, x.cols);
  const double norm = std::sqrt(2.0 / static_cast<double>(mdim));
  for (std::size_t t = 0; t < x.cols; ++t) {
    for (std::size_t k = 1; k <= n_coeffs; ++k) {
      double acc = 0.0;
      for (std::size_t mm = 0; mm < mdim; ++mm) {
        acc += static_cast<double>(x.at(mm, t)) *
               std::cos(std::numbers::pi * static_cast<double>(k) *
                        (static_cast<double>(mm) + 0.5) /
                        static_cast<double>(mdim));
      }
      out.at(k - 1, t) = static_cast<float>(norm * acc);
    }
  }
  return out;
}

inline std::vector<float> sine(double freq_hz, double sample_rate,
                               std::size_t n, double amplitude = 0.5) {
  std::vector<float> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<float>(
        amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                             static_cast<double>(i) / sample_rate));
  }
  return x;
}

// Dominant rfft bin of a Hann-windowed slice (DC excluded).
inline std::size_t peak_bin(const std::vector<float>& x, std::size_t offset,
                            std::size_t n_fft) {
  std::vector<double> frame(n_fft);
  const std::vector<double> win = ratewarp::hann_window(n_fft);
  for (std::size_t i = 0; i < n_fft; ++i) {
    frame[i] = static_cast<double>(x[offset + i]) * win[i];
  }
  const auto spec = ratewarp::fft::rfft(std::span<const double>(frame), n_fft);
  std::size_t best = 1;
  double best_mag = 0.0;
  for (std::size_t k = 1; k < spec.size(); ++k) {
    const double mag = std::abs(spec[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return best;
}

inline double snr_db(const float* ref, const float* test, std::size_t n) {
  double sig = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ref[i];
    const double d = r - test[i];
    sig += r * r;
    err += d * d;
  }
  if (err == 0.0) return 300.0;
  return 10.0 * std::log10(sig / err);
}

}  // namespace oracles
