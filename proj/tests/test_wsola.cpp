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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "ratewarp/errors.hpp"
#include "ratewarp/interp.hpp"
#include "ratewarp/wsola.hpp"

using namespace ratewarp;

namespace {

AudioBuffer tone(double freq, std::size_t n, double amplitude = 0.5) {
  AudioBuffer b;
  b.sample_rate_hz = 22050;
  b.samples = oracles::sine(freq, 22050.0, n, amplitude);
  return b;
}

double rms(const float* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(x[i]) * x[i];
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace

TEST_CASE("wsola output length equals target_length for many N and f") {
  std::mt19937 rng(41);
  std::uniform_int_distribution<std::size_t> n_dist(1024, 30000);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = n_dist(rng);
    const AudioBuffer in = tone(220.0, n);
    for (double f : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 3.0, 4.0}) {
      const AudioBuffer out = wsola(in, f);
      CHECK(out.samples.size() == target_length(n, f));
      CHECK(out.sample_rate_hz == in.sample_rate_hz);
    }
  }
}

TEST_CASE("wsola factor 1 with zero tolerance reconstructs the input") {
  const AudioBuffer in = tone(220.0, 22050);
  WsolaConfig cfg;
  cfg.tolerance = 0;
  const AudioBuffer out = wsola(in, 1.0, cfg);
  REQUIRE(out.samples.size() == in.samples.size());
  const std::size_t skip = cfg.frame_length;
  const double snr = oracles::snr_db(in.samples.data() + skip,
                                     out.samples.data() + skip,
                                     in.samples.size() - 2 * skip);
  CHECK(snr >= 40.0);
}

TEST_CASE("wsola preserves pitch while scaling duration") {
  const double freq = 220.0;
  const AudioBuffer in = tone(freq, 22050);
  const std::size_t n_fft = 8192;
  for (double f : {0.5, 0.7, 1.5, 2.0}) {
    const AudioBuffer out = wsola(in, f);
    REQUIRE(out.samples.size() == target_length(in.samples.size(), f));
    REQUIRE(out.samples.size() >= 1024 + n_fft);
    const std::size_t peak = oracles::peak_bin(out.samples, 1024, n_fft);
    const auto want = static_cast<std::ptrdiff_t>(
        std::llround(freq * n_fft / 22050.0));
    CHECK(std::abs(static_cast<std::ptrdiff_t>(peak) - want) <= 1);
  }
}

TEST_CASE("wsola keeps tone energy within a factor of two") {
  const AudioBuffer in = tone(220.0, 22050);
  const double in_rms = rms(in.samples.data() + 1024, in.samples.size() - 2048);
  for (double f : {0.5, 1.5, 2.0}) {
    const AudioBuffer out = wsola(in, f);
    const double out_rms =
        rms(out.samples.data() + 1024, out.samples.size() - 2048);
    CHECK(out_rms >= in_rms / 2.0);
    CHECK(out_rms <= in_rms * 2.0);
  }
}

TEST_CASE("wsola selected offsets stay inside the tolerance") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<float> dist(-0.5f, 0.5f);
  AudioBuffer in;
  in.sample_rate_hz = 22050;
  in.samples.resize(20000);
  for (float& v : in.samples) v = dist(rng);

  WsolaConfig cfg;
  cfg.tolerance = 300;
  std::vector<long> offsets;
  (void)wsola(in, 1.7, cfg, &offsets);
  REQUIRE(!offsets.empty());
  CHECK(offsets[0] == 0);  // frame 0 is forced to the nominal position
  for (long off : offsets) {
    CHECK(off >= -300);
    CHECK(off <= 300);
  }
}

TEST_CASE("wsola is deterministic") {
  const AudioBuffer in = tone(330.0, 9000);
  const AudioBuffer a = wsola(in, 1.3);
  const AudioBuffer b = wsola(in, 1.3);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i] == b.samples[i]);
  }
}

TEST_CASE("wsola input and config validation") {
  const AudioBuffer sh = tone(220.0, 512);
  CHECK_THROWS_AS(wsola(sh, 1.0), DataError);

  const AudioBuffer ok = tone(220.0, 4096);
  CHECK_THROWS_AS(wsola(ok, 0.0), DataError);
  CHECK_THROWS_AS(wsola(ok, -2.0), DataError);

  WsolaConfig bad;
  bad.frame_length = 1023;  // odd
  CHECK_THROWS_AS(wsola(ok, 1.0, bad), DataError);
  bad = {};
  bad.synthesis_hop = 2048;  // > frame
  CHECK_THROWS_AS(wsola(ok, 1.0, bad), DataError);
  bad = {};
  bad.tolerance = 4096;  // > frame
  CHECK_THROWS_AS(wsola(ok, 1.0, bad), DataError);
}
