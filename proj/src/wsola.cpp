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

#include "ratewarp/wsola.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ratewarp/errors.hpp"
#include "ratewarp/interp.hpp"
#include "ratewarp/kernels.hpp"
#include "ratewarp/window.hpp"

namespace ratewarp {
namespace {

void validate(const WsolaConfig& c) {
  if (c.frame_length == 0 || c.frame_length % 2 != 0) {
    throw DataError("wsola: frame_length must be positive and even");
  }
  if (c.synthesis_hop == 0 || c.synthesis_hop > c.frame_length) {
    throw DataError("wsola: synthesis_hop must be in [1, frame_length]");
  }
  if (c.tolerance > c.frame_length) {
    throw DataError("wsola: tolerance must be <= frame_length");
  }
}

// Copies input[pos, pos+len) into dst, zero-filling out-of-range reads.
void read_frame(const std::vector<float>& x, std::ptrdiff_t pos,
                std::size_t len, float* dst) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  for (std::size_t i = 0; i < len; ++i) {
    const std::ptrdiff_t s = pos + static_cast<std::ptrdiff_t>(i);
    dst[i] = (s >= 0 && s < n) ? x[static_cast<std::size_t>(s)] : 0.0f;
  }
}

double ncc(const float* a, const float* b, std::size_t n) {
  const auto& kt = kernels::active();
  const double num = kt.dot(a, b, n);
  const double ea = kt.dot(a, a, n);
  const double eb = kt.dot(b, b, n);
  const double denom = std::sqrt(ea * eb);
  if (denom < 1e-12) return 0.0;
  return num / denom;
}

}  // namespace

AudioBuffer wsola(const AudioBuffer& input, double factor,
                  const WsolaConfig& config,
                  std::vector<long>* selected_offsets) {
  validate(config);
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw DataError("wsola: factor must be positive and finite");
  }
  const std::vector<float>& x = input.samples;
  const std::size_t n = x.size();
  const std::size_t frame = config.frame_length;
  const std::size_t hop = config.synthesis_hop;
  if (n < frame) throw DataError("wsola: input shorter than one frame");

  const std::size_t out_len = target_length(n, factor);
  const double analysis_hop = static_cast<double>(hop) * factor;
  const std::ptrdiff_t max_pos = static_cast<std::ptrdiff_t>(n - frame);
  const std::ptrdiff_t tol = static_cast<std::ptrdiff_t>(config.tolerance);

  const std::vector<double> win_d = hann_window(frame);
  std::vector<float> win(frame);
  for (std::size_t i = 0; i < frame; ++i) win[i] = static_cast<float>(win_d[i]);

  const std::size_t n_synth =
      std::max<std::size_t>(1, (out_len + hop - 1) / hop);
  std::vector<float> acc(n_synth * hop + frame, 0.0f);
  std::vector<float> wsum(acc.size(), 0.0f);
  std::vector<float> natural(frame);
  std::vector<float> candidate(frame);
  if (selected_offsets != nullptr) {
    selected_offsets->clear();
    selected_offsets->reserve(n_synth);
  }

  std::ptrdiff_t prev_selected = 0;
  for (std::size_t k = 0; k < n_synth; ++k) {
    const std::ptrdiff_t nominal = std::clamp<std::ptrdiff_t>(
        std::llround(static_cast<double>(k) * analysis_hop), 0, max_pos);
    std::ptrdiff_t selected = nominal;
    if (k > 0 && tol > 0) {
      read_frame(x, prev_selected + static_cast<std::ptrdiff_t>(hop), frame,
                 natural.data());
      double best = -std::numeric_limits<double>::infinity();
      // Offsets visited smallest-|offset| first, negative before positive,
      // with a strict-improvement update: ties resolve to the earliest
      // visited offset, matching the documented tie-break.
      for (std::ptrdiff_t d = 0; d <= tol; ++d) {
        const std::ptrdiff_t offsets[2] = {-d, d};
        const int n_off = d == 0 ? 1 : 2;
        for (int oi = 0; oi < n_off; ++oi) {
          const std::ptrdiff_t pos = nominal + offsets[oi];
          if (pos < 0 || pos > max_pos) continue;
          read_frame(x, pos, frame, candidate.data());
          const double score = ncc(candidate.data(), natural.data(), frame);
          if (score > best) {
            best = score;
            selected = pos;
          }
        }
      }
    }
    if (selected_offsets != nullptr) {
      selected_offsets->push_back(static_cast<long>(selected - nominal));
    }
    read_frame(x, selected, frame, candidate.data());
    const std::size_t out_pos = k * hop;
    for (std::size_t i = 0; i < frame; ++i) {
      acc[out_pos + i] += candidate[i] * win[i];
      wsum[out_pos + i] += win[i];
    }
    prev_selected = selected;
  }

  AudioBuffer out;
  out.sample_rate_hz = input.sample_rate_hz;
  out.samples.assign(out_len, 0.0f);
  for (std::size_t i = 0; i < out_len && i < acc.size(); ++i) {
    out.samples[i] = wsum[i] > 1e-6f ? acc[i] / wsum[i] : acc[i];
  }
  return out;
}

}  // namespace ratewarp
