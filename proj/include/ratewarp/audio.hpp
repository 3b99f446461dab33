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
#include <vector>

namespace ratewarp {

// Mono waveform. Samples are nominally in [-1, 1]; sample_rate_hz > 0.
struct AudioBuffer {
  std::vector<float> samples;
  std::uint32_t sample_rate_hz = 0;

  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

enum class WavFormat { Pcm16, Float32 };

// Reads a RIFF/WAVE file holding PCM16 or IEEE float32, 1 or 2 channels.
// Stereo is downmixed by averaging; PCM16 is scaled by 1/32768.
// Throws IoError on unreadable files and DataError on unsupported or
// malformed content (including a zero-length data chunk).
AudioBuffer load_wav(const std::string& path);

// Writes mono little-endian WAV. Out-of-range samples are hard-clipped to
// [-1, 1]. Float32 round-trips bit-exactly; PCM16 within 1/32768 per sample.
void save_wav(const AudioBuffer& buffer, const std::string& path,
              WavFormat format = WavFormat::Pcm16);

}  // namespace ratewarp
