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

#include "ratewarp/mel.hpp"

#include <algorithm>
#include <cmath>

#include "ratewarp/errors.hpp"
#include "ratewarp/fft.hpp"
#include "ratewarp/kernels.hpp"
#include "ratewarp/window.hpp"

namespace ratewarp {
namespace {

constexpr float kLogFloor = 1e-5f;

double hz_to_mel(double f) { return 2595.0 * std::log10(1.0 + f / 700.0); }
double mel_to_hz(double m) { return 700.0 * (std::pow(10.0, m / 2595.0) - 1.0); }

// Mirror an index into [0, n) without repeating the edge sample.
std::size_t reflect_index(std::ptrdiff_t idx, std::size_t n) {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * (static_cast<std::ptrdiff_t>(n) - 1);
  std::ptrdiff_t k = idx % period;
  if (k < 0) k += period;
  if (k >= static_cast<std::ptrdiff_t>(n)) k = period - k;
  return static_cast<std::size_t>(k);
}

}  // namespace

void MelConfig::validate() const {
  if (sample_rate_hz == 0) throw DataError("MelConfig: sample_rate_hz must be > 0");
  if (n_fft == 0 || win_length == 0 || hop_length == 0 || n_mels == 0) {
    throw DataError("MelConfig: sizes must be positive");
  }
  if (win_length > n_fft) throw DataError("MelConfig: win_length > n_fft");
  if (hop_length > win_length) throw DataError("MelConfig: hop_length > win_length");
  if (fmin_hz < 0.0 || fmin_hz >= fmax_hz) {
    throw DataError("MelConfig: need 0 <= fmin < fmax");
  }
  if (fmax_hz > sample_rate_hz / 2.0) {
    throw DataError("MelConfig: fmax beyond Nyquist");
  }
}

Mat stft_magnitude(const AudioBuffer& buffer, const MelConfig& config) {
  config.validate();
  if (buffer.samples.empty()) throw DataError("stft_magnitude: empty buffer");

  const std::size_t n = buffer.samples.size();
  const std::size_t n_fft = config.n_fft;
  const std::size_t pad = n_fft / 2;
  const std::size_t n_frames = 1 + n / config.hop_length;
  const std::size_t n_bins = n_fft / 2 + 1;

  const std::vector<double> win = hann_window(config.win_length);
  const std::size_t win_off = (n_fft - config.win_length) / 2;

  Mat out(n_bins, n_frames);
  std::vector<double> frame(n_fft);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::ptrdiff_t start = static_cast<std::ptrdiff_t>(f * config.hop_length) -
                                 static_cast<std::ptrdiff_t>(pad);
    std::fill(frame.begin(), frame.end(), 0.0);
    for (std::size_t j = 0; j < config.win_length; ++j) {
      const std::size_t src = reflect_index(start + static_cast<std::ptrdiff_t>(win_off + j), n);
      frame[win_off + j] = buffer.samples[src] * win[j];
    }
    auto spec = fft::rfft(std::span<const double>(frame), n_fft);
    for (std::size_t b = 0; b < n_bins; ++b) {
      out.at(b, f) = static_cast<float>(std::abs(spec[b]));
    }
  }
  return out;
}

Mat mel_filterbank(const MelConfig& config) {
  config.validate();
  const std::size_t n_bins = config.n_fft / 2 + 1;
  const double mel_lo = hz_to_mel(config.fmin_hz);
  const double mel_hi = hz_to_mel(config.fmax_hz);
  const double mel_step = (mel_hi - mel_lo) / static_cast<double>(config.n_mels + 1);

  std::vector<double> edges(config.n_mels + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + mel_step * static_cast<double>(i));
  }

  const double bin_hz = static_cast<double>(config.sample_rate_hz) /
                        static_cast<double>(config.n_fft);
  Mat fb(config.n_mels, n_bins);
  for (std::size_t m = 0; m < config.n_mels; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    bool any = false;
    for (std::size_t b = 0; b < n_bins; ++b) {
      const double f = bin_hz * static_cast<double>(b);
      double w = 0.0;
      if (f > lo && f < hi) {
        w = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
      }
      fb.at(m, b) = static_cast<float>(w);
      any = any || w > 0.0;
    }
    if (!any) {
      throw DataError("mel_filterbank: filter " + std::to_string(m) +
                      " covers no FFT bin; reduce n_mels or raise n_fft");
    }
  }
  return fb;
}

MelSpectrogram mel_spectrogram(const AudioBuffer& buffer, const MelConfig& config) {
  const Mat spec = stft_magnitude(buffer, config);
  const Mat fb = mel_filterbank(config);
  const auto& k = kernels::active();

  Mat mel(config.n_mels, spec.cols);
  for (std::size_t m = 0; m < config.n_mels; ++m) {
    // Accumulate over the filter's support only; rows are zero elsewhere.
    std::size_t lo = 0, hi = spec.rows;
    const float* fbrow = fb.row(m);
    while (lo < spec.rows && fbrow[lo] == 0.0f) ++lo;
    while (hi > lo && fbrow[hi - 1] == 0.0f) --hi;
    float* dst = mel.row(m);
    for (std::size_t b = lo; b < hi; ++b) {
      if (fbrow[b] != 0.0f) k.axpy(dst, spec.row(b), fbrow[b], spec.cols);
    }
  }
  for (auto& v : mel.data) v = std::log(std::max(v, kLogFloor));
  return MelSpectrogram{std::move(mel), config};
}

Mat mel_cepstrum(const MelSpectrogram& mel, std::size_t n_coeffs) {
  const std::size_t m = mel.n_mels();
  if (n_coeffs < 1 || n_coeffs >= m) {
    throw DataError("mel_cepstrum: n_coeffs must be in [1, n_mels - 1]");
  }
  const std::size_t t = mel.n_frames();
  const double norm = std::sqrt(2.0 / static_cast<double>(m));

  // Orthonormal DCT-II basis for coefficients 1..n_coeffs.
  Mat basis(n_coeffs, m);
  for (std::size_t k = 0; k < n_coeffs; ++k) {
    for (std::size_t n = 0; n < m; ++n) {
      basis.at(k, n) = static_cast<float>(
          norm * std::cos(M_PI * static_cast<double>(k + 1) *
                          (2.0 * static_cast<double>(n) + 1.0) /
                          (2.0 * static_cast<double>(m))));
    }
  }

  Mat out(n_coeffs, t);
  for (std::size_t k = 0; k < n_coeffs; ++k) {
    for (std::size_t j = 0; j < t; ++j) {
      double acc = 0.0;
      for (std::size_t n = 0; n < m; ++n) {
        acc += static_cast<double>(basis.at(k, n)) * mel.data.at(n, j);
      }
      out.at(k, j) = static_cast<float>(acc);
    }
  }
  return out;
}

}  // namespace ratewarp
