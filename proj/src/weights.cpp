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

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

#include "json.hpp"
#include "ratewarp/errors.hpp"
#include "ratewarp/vocoder.hpp"

namespace ratewarp {
namespace {

constexpr char kMagic[4] = {'R', 'W', 'V', '1'};

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// (0, 1]: zero is excluded so log() below is finite.
double unit_open(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

void fill_normal(Tensor& t, std::uint64_t seed, double stddev) {
  std::uint64_t state = seed ^ fnv1a64(t.name);
  const std::size_t n = t.size();
  t.data.resize(n);
  for (std::size_t i = 0; i < n; i += 2) {
    const double u1 = unit_open(splitmix64(state));
    const double u2 = unit_open(splitmix64(state));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    t.data[i] = static_cast<float>(stddev * r * std::cos(a));
    if (i + 1 < n) t.data[i + 1] = static_cast<float>(stddev * r * std::sin(a));
  }
}

nlohmann::json config_to_json(const GeneratorConfig& c) {
  return nlohmann::json{{"mel_channels", c.mel_channels},
                        {"base_channels", c.base_channels},
                        {"upsample_rates", c.upsample_rates},
                        {"upsample_kernel_sizes", c.upsample_kernel_sizes},
                        {"resblock_kernel_sizes", c.resblock_kernel_sizes},
                        {"resblock_dilations", c.resblock_dilations},
                        {"leaky_slope", c.leaky_slope}};
}

GeneratorConfig config_from_json(const nlohmann::json& j) {
  GeneratorConfig c;
  c.mel_channels = j.at("mel_channels").get<std::size_t>();
  c.base_channels = j.at("base_channels").get<std::size_t>();
  c.upsample_rates = j.at("upsample_rates").get<std::vector<std::size_t>>();
  c.upsample_kernel_sizes =
      j.at("upsample_kernel_sizes").get<std::vector<std::size_t>>();
  c.resblock_kernel_sizes =
      j.at("resblock_kernel_sizes").get<std::vector<std::size_t>>();
  c.resblock_dilations =
      j.at("resblock_dilations").get<std::vector<std::vector<std::size_t>>>();
  c.leaky_slope = j.at("leaky_slope").get<float>();
  return c;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (mel_channels == 0) throw DataError("config: mel_channels must be >= 1");
  if (base_channels == 0) throw DataError("config: base_channels must be >= 1");
  if (upsample_rates.empty()) {
    throw DataError("config: at least one upsample block required");
  }
  if (upsample_rates.size() != upsample_kernel_sizes.size()) {
    throw DataError("config: upsample rates/kernels length mismatch");
  }
  for (std::size_t i = 0; i < upsample_rates.size(); ++i) {
    const std::size_t u = upsample_rates[i];
    if (u == 0 || u % 2 != 0) {
      throw DataError("config: upsample rates must be positive and even");
    }
    if (upsample_kernel_sizes[i] != 2 * u) {
      throw DataError("config: upsample kernel size must equal 2 * rate");
    }
  }
  if (base_channels >> upsample_rates.size() == 0) {
    throw DataError("config: channels halve per block and must stay >= 1");
  }
  if (resblock_kernel_sizes.empty() ||
      resblock_kernel_sizes.size() != resblock_dilations.size()) {
    throw DataError("config: resblock kernels/dilations length mismatch");
  }
  for (std::size_t k = 0; k < resblock_kernel_sizes.size(); ++k) {
    if (resblock_kernel_sizes[k] % 2 != 1) {
      throw DataError("config: resblock kernel sizes must be odd");
    }
    if (resblock_dilations[k].empty()) {
      throw DataError("config: each resblock needs at least one dilation");
    }
    for (std::size_t d : resblock_dilations[k]) {
      if (d == 0) throw DataError("config: dilations must be >= 1");
    }
  }
  if (!(leaky_slope >= 0.0f)) throw DataError("config: leaky_slope must be >= 0");
}

std::size_t GeneratorConfig::total_upsampling() const {
  std::size_t r = 1;
  for (std::size_t u : upsample_rates) r *= u;
  return r;
}

const Tensor& WeightStore::get(std::string_view name) const {
  for (const Tensor& t : tensors) {
    if (t.name == name) return t;
  }
  throw DataError("weights: missing tensor " + std::string(name));
}

bool WeightStore::has(std::string_view name) const {
  for (const Tensor& t : tensors) {
    if (t.name == name) return true;
  }
  return false;
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> expected_manifest(
    const GeneratorConfig& config) {
  config.validate();
  std::vector<std::pair<std::string, std::vector<std::size_t>>> manifest;
  manifest.emplace_back("conv_pre.weight", std::vector<std::size_t>{
                                               config.base_channels,
                                               config.mel_channels, 7});
  manifest.emplace_back("conv_pre.bias",
                        std::vector<std::size_t>{config.base_channels});
  for (std::size_t i = 0; i < config.num_blocks(); ++i) {
    const std::size_t c_in = config.channels_into_block(i);
    const std::size_t c_out = c_in / 2;
    const std::string prefix = "ups." + std::to_string(i);
    manifest.emplace_back(prefix + ".weight",
                          std::vector<std::size_t>{
                              c_in, c_out, config.upsample_kernel_sizes[i]});
    manifest.emplace_back(prefix + ".bias", std::vector<std::size_t>{c_out});
    for (std::size_t k = 0; k < config.resblock_kernel_sizes.size(); ++k) {
      for (std::size_t d = 0; d < config.resblock_dilations[k].size(); ++d) {
        const std::string res = "res." + std::to_string(i) + "." +
                                std::to_string(k) + "." + std::to_string(d);
        manifest.emplace_back(
            res + ".weight",
            std::vector<std::size_t>{c_out, c_out,
                                     config.resblock_kernel_sizes[k]});
        manifest.emplace_back(res + ".bias", std::vector<std::size_t>{c_out});
      }
    }
  }
  const std::size_t c_last =
      config.base_channels >> config.num_blocks();
  manifest.emplace_back("conv_post.weight",
                        std::vector<std::size_t>{1, c_last, 7});
  manifest.emplace_back("conv_post.bias", std::vector<std::size_t>{1});
  return manifest;
}

WeightStore init_random(const GeneratorConfig& config, std::uint64_t seed) {
  WeightStore store;
  store.config = config;
  for (auto& [name, shape] : expected_manifest(config)) {
    Tensor t;
    t.name = name;
    t.shape = shape;
    fill_normal(t, seed, 0.01);
    store.tensors.push_back(std::move(t));
  }
  return store;
}

void save_weights(const WeightStore& store, const std::string& path) {
  nlohmann::json manifest = nlohmann::json::array();
  std::size_t offset = 0;
  for (const Tensor& t : store.tensors) {
    manifest.push_back({{"name", t.name},
                        {"shape", t.shape},
                        {"dtype", "f32"},
                        {"offset", offset}});
    offset += t.size() * sizeof(float);
  }
  const nlohmann::json header = {{"config", config_to_json(store.config)},
                                 {"tensors", manifest}};
  const std::string header_str = header.dump();

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(kMagic, 4);
  const std::uint32_t header_len = static_cast<std::uint32_t>(header_str.size());
  unsigned char len_le[4] = {
      static_cast<unsigned char>(header_len & 0xff),
      static_cast<unsigned char>((header_len >> 8) & 0xff),
      static_cast<unsigned char>((header_len >> 16) & 0xff),
      static_cast<unsigned char>((header_len >> 24) & 0xff)};
  f.write(reinterpret_cast<const char*>(len_le), 4);
  f.write(header_str.data(),
          static_cast<std::streamsize>(header_str.size()));
  for (const Tensor& t : store.tensors) {
    f.write(reinterpret_cast<const char*>(t.data.data()),
            static_cast<std::streamsize>(t.data.size() * sizeof(float)));
  }
  if (!f) throw IoError("write failed: " + path);
}

WeightStore load_weights(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  char magic[4];
  if (!f.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw DataError("weights: corrupt header (bad magic): " + path);
  }
  unsigned char len_le[4];
  if (!f.read(reinterpret_cast<char*>(len_le), 4)) {
    throw DataError("weights: corrupt header (truncated length): " + path);
  }
  const std::uint32_t header_len =
      static_cast<std::uint32_t>(len_le[0]) |
      (static_cast<std::uint32_t>(len_le[1]) << 8) |
      (static_cast<std::uint32_t>(len_le[2]) << 16) |
      (static_cast<std::uint32_t>(len_le[3]) << 24);
  std::string header_str(header_len, '\0');
  if (!f.read(header_str.data(), header_len)) {
    throw DataError("weights: corrupt header (truncated JSON): " + path);
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_str);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("weights: corrupt header (bad JSON): ") +
                    e.what());
  }

  WeightStore store;
  try {
    store.config = config_from_json(header.at("config"));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("weights: corrupt header (bad config): ") +
                    e.what());
  }

  // The declared manifest must match the config-derived expectation before
  // any payload bytes are consumed.
  const auto expected = expected_manifest(store.config);
  const nlohmann::json& listed = header.at("tensors");
  std::size_t cursor = 0;
  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> layout;
  for (const auto& [name, shape] : expected) {
    const nlohmann::json* found = nullptr;
    for (const auto& entry : listed) {
      if (entry.at("name").get<std::string>() == name) {
        found = &entry;
        break;
      }
    }
    if (found == nullptr) {
      throw DataError("weights: missing tensor " + name);
    }
    const auto got_shape = found->at("shape").get<std::vector<std::size_t>>();
    if (got_shape != shape) {
      throw DataError("weights: shape mismatch for " + name);
    }
    if (found->at("dtype").get<std::string>() != "f32") {
      throw DataError("weights: unsupported dtype for " + name);
    }
    if (found->at("offset").get<std::size_t>() != cursor) {
      throw DataError("weights: non-contiguous offset for " + name);
    }
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    layout.emplace_back(shape, n);
    cursor += n * sizeof(float);
  }
  if (listed.size() != expected.size()) {
    throw DataError("weights: manifest lists unexpected extra tensors");
  }

  for (std::size_t i = 0; i < expected.size(); ++i) {
    Tensor t;
    t.name = expected[i].first;
    t.shape = layout[i].first;
    t.data.resize(layout[i].second);
    if (!f.read(reinterpret_cast<char*>(t.data.data()),
                static_cast<std::streamsize>(t.data.size() * sizeof(float)))) {
      throw DataError("weights: truncated payload at " + t.name);
    }
    store.tensors.push_back(std::move(t));
  }
  return store;
}

}  // namespace ratewarp
