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

#include <cstdint>

#include "ratewarp/audio.hpp"
#include "ratewarp/mat.hpp"

namespace ratewarp {

// Analysis settings for the log-mel frontend. Defaults follow the common
// 22.05 kHz vocoder convention; hop_length times nothing else must line up
// with the generator's total upsampling (256 here).
struct MelConfig {
  std::uint32_t sample_rate_hz = 22050;
  std::size_t n_fft = 1024;
  std::size_t win_length = 1024;
  std::size_t hop_length = 256;
  std::size_t n_mels = 80;
  double fmin_hz = 0.0;
  double fmax_hz = 8000.0;

  // Throws DataError when hop > win, win > n_fft, fmin/fmax are out of
  // order, or fmax exceeds Nyquist.
  void validate() const;
};

// Natural-log mel magnitudes, shape (n_mels, n_frames), one frame per
// hop_length input samples.
struct MelSpectrogram {
  Mat data;
  MelConfig config;

  std::size_t n_mels() const { return data.rows; }
  std::size_t n_frames() const { return data.cols; }
};

// Magnitude STFT with centered frames (reflect padding of n_fft/2 on both
// ends) and a periodic Hann window of win_length zero-padded to n_fft.
// Output shape (n_fft/2 + 1, 1 + floor(n_samples/hop)).
Mat stft_magnitude(const AudioBuffer& buffer, const MelConfig& config);

// Triangular filters on the HTK mel scale, band edges equally spaced in mel
// between fmin and fmax. Shape (n_mels, n_fft/2 + 1).
Mat mel_filterbank(const MelConfig& config);

// ln(max(filterbank * stft_magnitude, 1e-5)).
MelSpectrogram mel_spectrogram(const AudioBuffer& buffer, const MelConfig& config);

// Orthonormal DCT-II over the mel axis per frame, returning coefficients
// 1..n_coeffs (the 0th is excluded). Requires 1 <= n_coeffs <= n_mels - 1.
Mat mel_cepstrum(const MelSpectrogram& mel, std::size_t n_coeffs);

}  // namespace ratewarp
