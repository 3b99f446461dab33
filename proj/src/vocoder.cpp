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

#include "ratewarp/vocoder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ratewarp/errors.hpp"
#include "ratewarp/kernels.hpp"

namespace ratewarp {
namespace {

void check_weight(const Tensor& weight, const Tensor& bias,
                  std::size_t c_in_expected) {
  if (weight.shape.size() != 3) {
    throw DataError("conv: weight must be rank 3: " + weight.name);
  }
  if (bias.shape.size() != 1) {
    throw DataError("conv: bias must be rank 1: " + bias.name);
  }
  if (weight.data.size() != weight.size() || bias.data.size() != bias.size()) {
    throw DataError("conv: tensor data does not match shape: " + weight.name);
  }
  if (c_in_expected != 0 && weight.shape[1] != c_in_expected) {
    // conv1d layout; transposed_conv1d checks shape[0] itself.
    throw DataError("conv: input channel mismatch for " + weight.name);
  }
}

Mat stretch(const Mat& m, const RateConversionSpec& spec, MacCounter* macs) {
  if (spec.method == InterpolationMethod::Linear) {
    return stretch_time_linear(m, spec.factor, macs);
  }
  return stretch_time_bandlimited(m, spec.factor, {}, macs);
}

std::size_t insertion_index(InsertionPoint p) {
  switch (p) {
    case InsertionPoint::Mel: return 0;
    case InsertionPoint::AfterBlock1: return 1;
    case InsertionPoint::AfterBlock2: return 2;
    case InsertionPoint::AfterBlock3: return 3;
    case InsertionPoint::AfterBlock4: return 4;
  }
  throw DataError("invalid insertion point");
}

void leaky_inplace(Mat& m, float slope) {
  kernels::active().leaky_relu(m.data.data(), m.data.size(), slope);
}

// One multi-kernel residual stack: per kernel size, a chain of dilated
// residual units (x += conv(leaky(x))); branches averaged over kernel count.
Mat residual_stack(const Mat& x, const WeightStore& store, std::size_t block,
                   MacCounter* macs) {
  const GeneratorConfig& cfg = store.config;
  const auto& kt = kernels::active();
  Mat sum(x.rows, x.cols, 0.0f);
  Mat branch(x.rows, x.cols);
  Mat unit(x.rows, x.cols);
  for (std::size_t k = 0; k < cfg.resblock_kernel_sizes.size(); ++k) {
    branch.data = x.data;
    const std::size_t kernel = cfg.resblock_kernel_sizes[k];
    for (std::size_t d = 0; d < cfg.resblock_dilations[k].size(); ++d) {
      const std::size_t dilation = cfg.resblock_dilations[k][d];
      const std::string prefix = "res." + std::to_string(block) + "." +
                                 std::to_string(k) + "." + std::to_string(d);
      unit.data = branch.data;
      leaky_inplace(unit, cfg.leaky_slope);
      Mat conv = conv1d(unit, store.get(prefix + ".weight"),
                        store.get(prefix + ".bias"), 1, dilation,
                        dilation * (kernel - 1) / 2, macs);
      kt.axpy(branch.data.data(), conv.data.data(), 1.0f, branch.data.size());
    }
    kt.axpy(sum.data.data(), branch.data.data(), 1.0f, sum.data.size());
  }
  const float inv = 1.0f / static_cast<float>(cfg.resblock_kernel_sizes.size());
  for (float& v : sum.data) v *= inv;
  return sum;
}

AudioBuffer generate(const MelSpectrogram& mel, const WeightStore& store,
                     const RateConversionSpec* rate, MacCounter* macs,
                     PhaseClock* clock) {
  const GeneratorConfig& cfg = store.config;
  cfg.validate();
  if (mel.data.rows != cfg.mel_channels) {
    throw DataError("forward: mel channel count does not match config");
  }
  if (mel.data.cols == 0) throw DataError("forward: empty mel");
  if (mel.config.hop_length != cfg.total_upsampling()) {
    throw DataError("forward: mel hop_length must equal total upsampling");
  }
  std::size_t insert_at = 0;
  if (rate != nullptr) {
    if (!(rate->factor > 0.0) || !std::isfinite(rate->factor)) {
      throw DataError("forward: factor must be positive and finite");
    }
    insert_at = insertion_index(rate->insertion);
    if (insert_at > cfg.num_blocks()) {
      throw DataError("forward: insertion point beyond last block");
    }
  }

  Mat x;
  if (rate != nullptr && insert_at == 0) {
    PhaseClock::Scope s(clock, PhaseClock::Phase::Conversion);
    x = stretch(mel.data, *rate, macs);
  } else {
    x = mel.data;
  }

  {
    PhaseClock::Scope s(clock, PhaseClock::Phase::Generation);
    x = conv1d(x, store.get("conv_pre.weight"), store.get("conv_pre.bias"), 1,
               1, 3, macs);
  }
  for (std::size_t i = 0; i < cfg.num_blocks(); ++i) {
    {
      PhaseClock::Scope s(clock, PhaseClock::Phase::Generation);
      leaky_inplace(x, cfg.leaky_slope);
      const std::string prefix = "ups." + std::to_string(i);
      const std::size_t u = cfg.upsample_rates[i];
      x = transposed_conv1d(x, store.get(prefix + ".weight"),
                            store.get(prefix + ".bias"), u, u / 2, macs);
      x = residual_stack(x, store, i, macs);
    }
    if (rate != nullptr && insert_at == i + 1) {
      PhaseClock::Scope s(clock, PhaseClock::Phase::Conversion);
      x = stretch(x, *rate, macs);
    }
  }

  PhaseClock::Scope s(clock, PhaseClock::Phase::Generation);
  leaky_inplace(x, cfg.leaky_slope);
  x = conv1d(x, store.get("conv_post.weight"), store.get("conv_post.bias"), 1,
             1, 3, macs);

  AudioBuffer out;
  out.sample_rate_hz = static_cast<std::uint32_t>(mel.config.sample_rate_hz);
  out.samples.resize(x.cols);
  for (std::size_t t = 0; t < x.cols; ++t) {
    out.samples[t] = std::tanh(x.at(0, t));
  }
  return out;
}

}  // namespace

Mat conv1d(const Mat& input, const Tensor& weight, const Tensor& bias,
           std::size_t stride, std::size_t dilation, std::size_t padding,
           MacCounter* macs) {
  check_weight(weight, bias, input.rows);
  if (stride == 0 || dilation == 0) {
    throw DataError("conv1d: stride and dilation must be >= 1");
  }
  const std::size_t c_out = weight.shape[0];
  const std::size_t c_in = weight.shape[1];
  const std::size_t k = weight.shape[2];
  if (bias.shape[0] != c_out) throw DataError("conv1d: bias length mismatch");
  const std::ptrdiff_t t_in = static_cast<std::ptrdiff_t>(input.cols);
  const std::ptrdiff_t span =
      static_cast<std::ptrdiff_t>(dilation) * static_cast<std::ptrdiff_t>(k - 1);
  const std::ptrdiff_t numer =
      t_in + 2 * static_cast<std::ptrdiff_t>(padding) - span - 1;
  if (numer < 0) throw DataError("conv1d: output would be empty");
  const std::size_t t_out =
      static_cast<std::size_t>(numer / static_cast<std::ptrdiff_t>(stride)) + 1;

  Mat out(c_out, t_out);
  const auto& kt = kernels::active();
  for (std::size_t co = 0; co < c_out; ++co) {
    float* out_row = out.row(co);
    std::fill_n(out_row, t_out, bias.data[co]);
    if (stride == 1) {
      for (std::size_t ci = 0; ci < c_in; ++ci) {
        const float* in_row = input.row(ci);
        const float* w = weight.data.data() + (co * c_in + ci) * k;
        for (std::size_t kk = 0; kk < k; ++kk) {
          const std::ptrdiff_t shift =
              static_cast<std::ptrdiff_t>(kk * dilation) -
              static_cast<std::ptrdiff_t>(padding);
          const std::ptrdiff_t t0 = std::max<std::ptrdiff_t>(0, -shift);
          const std::ptrdiff_t t1 = std::min<std::ptrdiff_t>(
              static_cast<std::ptrdiff_t>(t_out), t_in - shift);
          if (t1 > t0) {
            kt.axpy(out_row + t0, in_row + t0 + shift, w[kk],
                    static_cast<std::size_t>(t1 - t0));
          }
        }
      }
    } else {
      for (std::size_t ci = 0; ci < c_in; ++ci) {
        const float* in_row = input.row(ci);
        const float* w = weight.data.data() + (co * c_in + ci) * k;
        for (std::size_t t = 0; t < t_out; ++t) {
          double acc = 0.0;
          for (std::size_t kk = 0; kk < k; ++kk) {
            const std::ptrdiff_t src =
                static_cast<std::ptrdiff_t>(t * stride + kk * dilation) -
                static_cast<std::ptrdiff_t>(padding);
            if (src >= 0 && src < t_in) acc += w[kk] * in_row[src];
          }
          out_row[t] += static_cast<float>(acc);
        }
      }
    }
  }
  if (macs != nullptr) {
    macs->conv += static_cast<std::uint64_t>(c_out) * c_in * k * t_out;
  }
  return out;
}

Mat transposed_conv1d(const Mat& input, const Tensor& weight,
                      const Tensor& bias, std::size_t stride,
                      std::size_t padding, MacCounter* macs) {
  check_weight(weight, bias, 0);
  if (stride == 0) throw DataError("transposed_conv1d: stride must be >= 1");
  const std::size_t c_in = weight.shape[0];
  const std::size_t c_out = weight.shape[1];
  const std::size_t k = weight.shape[2];
  if (input.rows != c_in) {
    throw DataError("transposed_conv1d: input channel mismatch");
  }
  if (bias.shape[0] != c_out) {
    throw DataError("transposed_conv1d: bias length mismatch");
  }
  const std::ptrdiff_t t_out_signed =
      (static_cast<std::ptrdiff_t>(input.cols) - 1) *
          static_cast<std::ptrdiff_t>(stride) -
      2 * static_cast<std::ptrdiff_t>(padding) + static_cast<std::ptrdiff_t>(k);
  if (t_out_signed < 1) {
    throw DataError("transposed_conv1d: output would be empty");
  }
  const std::size_t t_out = static_cast<std::size_t>(t_out_signed);

  Mat out(c_out, t_out);
  const auto& kt = kernels::active();
  for (std::size_t co = 0; co < c_out; ++co) {
    std::fill_n(out.row(co), t_out, bias.data[co]);
  }
  for (std::size_t ci = 0; ci < c_in; ++ci) {
    const float* in_row = input.row(ci);
    for (std::size_t co = 0; co < c_out; ++co) {
      const float* w = weight.data.data() + (ci * c_out + co) * k;
      kt.tconv_scatter(out.row(co), t_out, in_row, input.cols, w, k, stride,
                       padding);
    }
  }
  if (macs != nullptr) {
    macs->transposed_conv +=
        static_cast<std::uint64_t>(c_in) * c_out * k * input.cols;
  }
  return out;
}

AudioBuffer forward(const MelSpectrogram& mel, const WeightStore& store,
                    MacCounter* macs) {
  return generate(mel, store, nullptr, macs, nullptr);
}

AudioBuffer forward_with_rate(const MelSpectrogram& mel,
                              const RateConversionSpec& spec,
                              const WeightStore& store, MacCounter* macs,
                              PhaseClock* clock) {
  return generate(mel, store, &spec, macs, clock);
}

}  // namespace ratewarp
