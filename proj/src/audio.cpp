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

#include "ratewarp/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "ratewarp/errors.hpp"

namespace ratewarp {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void append_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void append_u16(std::string& s, std::uint16_t v) {
  s.push_back(static_cast<char>(v & 0xFF));
  s.push_back(static_cast<char>((v >> 8) & 0xFF));
}

float clip1(float x) { return std::min(1.0f, std::max(-1.0f, x)); }

}  // namespace

AudioBuffer load_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_wav: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("load_wav: read failure on " + path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw DataError("load_wav: not a RIFF/WAVE file: " + path);
  }

  bool have_fmt = false;
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
  std::size_t data_pos = 0;
  std::size_t data_len = 0;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
    const std::uint32_t chunk_len = read_u32(bytes.data() + pos + 4);
    const std::size_t body = pos + 8;
    if (body + chunk_len > bytes.size()) {
      throw DataError("load_wav: truncated chunk in " + path);
    }
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_len < 16) throw DataError("load_wav: short fmt chunk");
      format = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      sample_rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      if (format == kFormatExtensible && chunk_len >= 40) {
        // SubFormat GUID starts with the base format code.
        format = read_u16(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data_pos = body;
      data_len = chunk_len;
      have_data = true;
    }
    pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || !have_data) {
    throw DataError("load_wav: missing fmt or data chunk in " + path);
  }
  if (sample_rate == 0) throw DataError("load_wav: zero sample rate");
  if (channels != 1 && channels != 2) {
    throw DataError("load_wav: unsupported channel count " +
                    std::to_string(channels));
  }
  const bool pcm16 = format == kFormatPcm && bits == 16;
  const bool f32 = format == kFormatFloat && bits == 32;
  if (!pcm16 && !f32) {
    throw DataError("load_wav: unsupported codec (format " +
                    std::to_string(format) + ", " + std::to_string(bits) +
                    " bits)");
  }
  if (data_len == 0) throw DataError("load_wav: zero-length data chunk");

  const std::size_t bytes_per_sample = pcm16 ? 2 : 4;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n_frames = data_len / frame_bytes;
  const unsigned char* d = bytes.data() + data_pos;

  AudioBuffer out;
  out.sample_rate_hz = sample_rate;
  out.samples.resize(n_frames);
  for (std::size_t i = 0; i < n_frames; ++i) {
    double acc = 0.0;
    for (std::uint16_t c = 0; c < channels; ++c) {
      const unsigned char* p = d + i * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        acc += static_cast<double>(v) / 32768.0;
      } else {
        float v;
        std::memcpy(&v, p, 4);
        acc += v;
      }
    }
    out.samples[i] = static_cast<float>(acc / channels);
  }
  return out;
}

void save_wav(const AudioBuffer& buffer, const std::string& path,
              WavFormat format) {
  if (buffer.sample_rate_hz == 0) throw DataError("save_wav: zero sample rate");
  const std::uint32_t n = static_cast<std::uint32_t>(buffer.samples.size());
  const bool f32 = format == WavFormat::Float32;
  const std::uint16_t bytes_per_sample = f32 ? 4 : 2;
  const std::uint32_t data_len = n * bytes_per_sample;

  std::string blob;
  blob.reserve(64 + data_len);
  blob += "RIFF";
  // fmt(16) + [fact(4) for float] + data; sizes filled as we go.
  const std::uint32_t fact_bytes = f32 ? 12 : 0;
  append_u32(blob, 4 + 24 + fact_bytes + 8 + data_len);
  blob += "WAVE";
  blob += "fmt ";
  append_u32(blob, 16);
  append_u16(blob, f32 ? kFormatFloat : kFormatPcm);
  append_u16(blob, 1);
  append_u32(blob, buffer.sample_rate_hz);
  append_u32(blob, buffer.sample_rate_hz * bytes_per_sample);
  append_u16(blob, bytes_per_sample);
  append_u16(blob, f32 ? 32 : 16);
  if (f32) {
    blob += "fact";
    append_u32(blob, 4);
    append_u32(blob, n);
  }
  blob += "data";
  append_u32(blob, data_len);
  for (std::uint32_t i = 0; i < n; ++i) {
    const float x = clip1(buffer.samples[i]);
    if (f32) {
      char raw[4];
      std::memcpy(raw, &x, 4);
      blob.append(raw, 4);
    } else {
      const long q = std::lround(static_cast<double>(x) * 32768.0);
      const std::int16_t v = static_cast<std::int16_t>(
          std::min<long>(32767, std::max<long>(-32768, q)));
      append_u16(blob, static_cast<std::uint16_t>(v));
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("save_wav: cannot open " + path + " for writing");
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw IoError("save_wav: write failure on " + path);
}

}  // namespace ratewarp
