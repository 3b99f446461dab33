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

#include "ratewarp/macs.hpp"
#include "ratewarp/mat.hpp"

namespace ratewarp {

enum class InterpolationMethod { BandlimitedKaiser, Linear };

// Kaiser-windowed sinc resampler settings. zero_crossings is the filter
// half-width in input samples; rolloff scales the cutoff below the
// theoretical min(in, out)/2.
struct KaiserResampleParams {
  int zero_crossings = 16;
  double beta = 8.555;
  double rolloff = 0.99;
};

// max(1, round(source_length / factor)), rounding half away from zero.
// factor = t_src / t_tgt, so factor > 1 shortens.
std::size_t target_length(std::size_t source_length, double factor);

// Bandlimited resampling: y[m] = sum_n x[n] * h(m*in/out - n) with h a
// Kaiser-windowed sinc cut off at rolloff*min(in, out)/2. Samples outside
// the signal count as zero. Equal rates return the input unchanged.
// Output length = max(1, round(len * out_rate / in_rate)).
std::vector<float> resample_bandlimited(const std::vector<float>& signal,
                                        double in_rate, double out_rate,
                                        const KaiserResampleParams& params = {},
                                        MacCounter* macs = nullptr);

// Per-channel bandlimited resampling of the time axis to
// target_length(T, factor) columns.
Mat stretch_time_bandlimited(const Mat& feature, double factor,
                             const KaiserResampleParams& params = {},
                             MacCounter* macs = nullptr);

// Align-corners linear interpolation of the time axis: column j samples
// input position j*(T-1)/(T'-1); first and last columns are preserved
// exactly.
Mat stretch_time_linear(const Mat& feature, double factor,
                        MacCounter* macs = nullptr);

}  // namespace ratewarp
