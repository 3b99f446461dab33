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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ratewarp/audio.hpp"
#include "ratewarp/interp.hpp"
#include "ratewarp/macs.hpp"
#include "ratewarp/mat.hpp"
#include "ratewarp/mel.hpp"
#include "ratewarp/phase_clock.hpp"

namespace ratewarp {

// Desk-scale HiFi-GAN-style generator, forward pass only. Channel width is
// reduced from the published 512 to keep iteration fast; the residual stack
// uses one dilated conv per residual unit (one dilation triple per kernel
// size), a documented simplification of the published generator.
struct GeneratorConfig {
  std::size_t mel_channels = 80;
  std::size_t base_channels = 128;
  std::vector<std::size_t> upsample_rates = {8, 8, 2, 2};
  std::vector<std::size_t> upsample_kernel_sizes = {16, 16, 4, 4};
  std::vector<std::size_t> resblock_kernel_sizes = {3, 7, 11};
  std::vector<std::vector<std::size_t>> resblock_dilations = {
      {1, 3, 5}, {1, 3, 5}, {1, 3, 5}};
  float leaky_slope = 0.1f;

  void validate() const;  // throws DataError on violated invariants
  std::size_t num_blocks() const { return upsample_rates.size(); }
  std::size_t total_upsampling() const;
  // Channel count entering block i (0-based); block output has half that.
  std::size_t channels_into_block(std::size_t i) const {
    return base_channels >> i;
  }
};

enum class InsertionPoint { Mel, AfterBlock1, AfterBlock2, AfterBlock3, AfterBlock4 };

// f = t_src / t_tgt: factor > 1 shortens the output, factor < 1 lengthens it.
struct RateConversionSpec {
  double factor = 1.0;
  InsertionPoint insertion = InsertionPoint::Mel;
  InterpolationMethod method = InterpolationMethod::Linear;
};

struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<float> data;

  std::size_t size() const {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
  }
};

struct WeightStore {
  GeneratorConfig config;
  std::vector<Tensor> tensors;  // manifest order

  const Tensor& get(std::string_view name) const;  // DataError if absent
  bool has(std::string_view name) const;
};

// Canonical (name, shape) manifest implied by a config, in storage order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> expected_manifest(
    const GeneratorConfig& config);

// weight shape (C_out, C_in, K); cross-correlation convolution.
Mat conv1d(const Mat& input, const Tensor& weight, const Tensor& bias,
           std::size_t stride = 1, std::size_t dilation = 1,
           std::size_t padding = 0, MacCounter* macs = nullptr);

// weight shape (C_in, C_out, K); T_out = (T - 1) * stride - 2 * padding + K.
Mat transposed_conv1d(const Mat& input, const Tensor& weight,
                      const Tensor& bias, std::size_t stride,
                      std::size_t padding, MacCounter* macs = nullptr);

// Reproducible across platforms: each tensor is filled from a splitmix64
// stream seeded with seed XOR FNV-1a64(tensor name), shaped into
// normal(0, std 0.01) deviates via Box-Muller.
WeightStore init_random(const GeneratorConfig& config, std::uint64_t seed);

void save_weights(const WeightStore& store, const std::string& path);
WeightStore load_weights(const std::string& path);

AudioBuffer forward(const MelSpectrogram& mel, const WeightStore& store,
                    MacCounter* macs = nullptr);

// Runs forward with the interpolation layer applied at spec.insertion.
// Output sample counts: Mel insertion gives target_length(T, f) * R where
// R = total upsampling; AfterBlock_i gives target_length(T * U_i, f) * (R / U_i)
// with U_i the product of the first i upsample rates.
AudioBuffer forward_with_rate(const MelSpectrogram& mel,
                              const RateConversionSpec& spec,
                              const WeightStore& store,
                              MacCounter* macs = nullptr,
                              PhaseClock* clock = nullptr);

}  // namespace ratewarp
