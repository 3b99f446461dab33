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

#include "ratewarp/interp.hpp"

#include <algorithm>
#include <cmath>

#include "ratewarp/errors.hpp"
#include "ratewarp/kernels.hpp"
#include "ratewarp/window.hpp"

namespace ratewarp {
namespace {

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = M_PI * x;
  return std::sin(px) / px;
}

struct SincKernel {
  double cutoff;       // cycles per input sample
  double half_width;   // input samples
  double beta;
  double i0_beta;

  // h(tau): windowed-sinc tap at offset tau from the output instant,
  // normalized so the DC gain over an integer tap grid is ~1.
  double operator()(double tau) const {
    const double s = tau / half_width;
    const double arg = 1.0 - s * s;
    if (arg < 0.0) return 0.0;
    const double window = bessel_i0(beta * std::sqrt(arg)) / i0_beta;
    return 2.0 * cutoff * sinc(2.0 * cutoff * tau) * window;
  }
};

// Finds a small denominator q with in/out ~= p/q, enabling a polyphase
// evaluation where only q distinct tap vectors exist. Returns 0 when the
// ratio is not (near-)rational with q <= 1024.
std::size_t rational_denominator(double ratio) {
  for (std::size_t q = 1; q <= 1024; ++q) {
    const double scaled = ratio * static_cast<double>(q);
    if (std::abs(scaled - std::round(scaled)) <= 1e-12 * std::max(1.0, scaled)) {
      return q;
    }
  }
  return 0;
}

}  // namespace

std::size_t target_length(std::size_t source_length, double factor) {
  if (source_length == 0) throw DataError("target_length: source_length must be >= 1");
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DataError("target_length: factor must be positive and finite");
  }
  const long long r = std::llround(static_cast<double>(source_length) / factor);
  return static_cast<std::size_t>(std::max(1LL, r));
}

std::vector<float> resample_bandlimited(const std::vector<float>& signal,
                                        double in_rate, double out_rate,
                                        const KaiserResampleParams& params,
                                        MacCounter* macs) {
  if (!(in_rate > 0.0) || !(out_rate > 0.0)) {
    throw DataError("resample_bandlimited: rates must be positive");
  }
  if (signal.empty()) throw DataError("resample_bandlimited: empty signal");
  if (params.zero_crossings < 1 || !(params.rolloff > 0.0) ||
      params.rolloff > 1.0 || params.beta < 0.0) {
    throw DataError("resample_bandlimited: invalid params");
  }
  if (in_rate == out_rate) return signal;

  const std::size_t n = signal.size();
  const std::size_t out_len = static_cast<std::size_t>(std::max(
      1LL, std::llround(static_cast<double>(n) * out_rate / in_rate)));

  const double ratio = in_rate / out_rate;  // input samples per output sample
  const double half_width = static_cast<double>(params.zero_crossings);
  const SincKernel h{params.rolloff * std::min(in_rate, out_rate) / (2.0 * in_rate),
                     half_width, params.beta, bessel_i0(params.beta)};

  const auto& kt = kernels::active();
  std::vector<float> out(out_len, 0.0f);
  std::uint64_t taps_used = 0;

  const auto emit = [&](std::size_t m, double t, const float* kern,
                        std::ptrdiff_t i_start, std::size_t n_taps) {
    (void)t;
    std::ptrdiff_t lo = std::max<std::ptrdiff_t>(i_start, 0);
    std::ptrdiff_t hi = std::min<std::ptrdiff_t>(
        i_start + static_cast<std::ptrdiff_t>(n_taps), static_cast<std::ptrdiff_t>(n));
    if (hi <= lo) return;
    const std::size_t count = static_cast<std::size_t>(hi - lo);
    out[m] = kt.dot(kern + (lo - i_start), signal.data() + lo, count);
    taps_used += count;
  };

  const std::size_t q = rational_denominator(ratio);
  if (q != 0) {
    const long long p = std::llround(ratio * static_cast<double>(q));
    // Tap vectors for the q phases; phase r covers t = r*p/q + integer.
    std::vector<std::vector<float>> kernels_by_phase(q);
    std::vector<std::ptrdiff_t> start_by_phase(q);
    for (std::size_t r = 0; r < q; ++r) {
      const double t = static_cast<double>(r) * static_cast<double>(p) /
                       static_cast<double>(q);
      const std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::ceil(t - half_width));
      const std::ptrdiff_t i1 = static_cast<std::ptrdiff_t>(std::floor(t + half_width));
      start_by_phase[r] = i0;
      auto& kern = kernels_by_phase[r];
      kern.resize(static_cast<std::size_t>(i1 - i0 + 1));
      for (std::ptrdiff_t i = i0; i <= i1; ++i) {
        kern[static_cast<std::size_t>(i - i0)] =
            static_cast<float>(h(t - static_cast<double>(i)));
      }
    }
    for (std::size_t m = 0; m < out_len; ++m) {
      const std::size_t r = m % q;
      const long long block = static_cast<long long>(m / q);
      const std::ptrdiff_t base = static_cast<std::ptrdiff_t>(block * p);
      emit(m, 0.0, kernels_by_phase[r].data(), base + start_by_phase[r],
           kernels_by_phase[r].size());
    }
  } else {
    std::vector<float> kern;
    for (std::size_t m = 0; m < out_len; ++m) {
      const double t = static_cast<double>(m) * ratio;
      const std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::ceil(t - half_width));
      const std::ptrdiff_t i1 = static_cast<std::ptrdiff_t>(std::floor(t + half_width));
      kern.resize(static_cast<std::size_t>(i1 - i0 + 1));
      for (std::ptrdiff_t i = i0; i <= i1; ++i) {
        kern[static_cast<std::size_t>(i - i0)] =
            static_cast<float>(h(t - static_cast<double>(i)));
      }
      emit(m, t, kern.data(), i0, kern.size());
    }
  }

  if (macs != nullptr) macs->interp += taps_used;
  return out;
}

Mat stretch_time_bandlimited(const Mat& feature, double factor,
                             const KaiserResampleParams& params,
                             MacCounter* macs) {
  if (feature.cols == 0) throw DataError("stretch_time_bandlimited: T must be >= 1");
  const std::size_t t_out = target_length(feature.cols, factor);

  Mat out(feature.rows, t_out);
  std::vector<float> row(feature.cols);
  for (std::size_t c = 0; c < feature.rows; ++c) {
    std::copy_n(feature.row(c), feature.cols, row.begin());
    std::vector<float> res = resample_bandlimited(row, factor, 1.0, params, macs);
    res.resize(t_out, 0.0f);
    std::copy_n(res.begin(), t_out, out.row(c));
  }
  return out;
}

Mat stretch_time_linear(const Mat& feature, double factor, MacCounter* macs) {
  if (feature.cols == 0) throw DataError("stretch_time_linear: T must be >= 1");
  const std::size_t t_in = feature.cols;
  const std::size_t t_out = target_length(t_in, factor);

  Mat out(feature.rows, t_out);
  for (std::size_t j = 0; j < t_out; ++j) {
    const double p = t_out == 1 ? 0.0
                                : static_cast<double>(j) *
                                      static_cast<double>(t_in - 1) /
                                      static_cast<double>(t_out - 1);
    const std::size_t lo = static_cast<std::size_t>(p);
    const std::size_t hi = std::min(lo + 1, t_in - 1);
    const float w = static_cast<float>(p - static_cast<double>(lo));
    for (std::size_t c = 0; c < feature.rows; ++c) {
      out.at(c, j) = (1.0f - w) * feature.at(c, lo) + w * feature.at(c, hi);
    }
  }
  if (macs != nullptr) {
    macs->interp += static_cast<std::uint64_t>(feature.rows) * t_out * 2;
  }
  return out;
}

}  // namespace ratewarp
