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
#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "ratewarp/errors.hpp"
#include "ratewarp/eval.hpp"

using namespace ratewarp;

namespace {

Mat random_mat(std::size_t rows, std::size_t cols, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> dist(-1.0f, 1.0f);
  Mat m(rows, cols);
  for (float& v : m.data) v = dist(rng);
  return m;
}

AudioBuffer tone(double seconds, float amplitude = 0.5f,
                 std::size_t rate = 22050) {
  AudioBuffer b;
  b.sample_rate_hz = rate;
  const auto n = static_cast<std::size_t>(seconds * static_cast<double>(rate));
  b.samples = oracles::sine(220.0, static_cast<double>(rate), n, amplitude);
  return b;
}

AudioBuffer silence(double seconds, std::size_t rate = 22050) {
  AudioBuffer b;
  b.sample_rate_hz = rate;
  b.samples.assign(static_cast<std::size_t>(seconds * rate), 0.0f);
  return b;
}

AudioBuffer concat(const AudioBuffer& a, const AudioBuffer& b) {
  AudioBuffer out = a;
  out.samples.insert(out.samples.end(), b.samples.begin(), b.samples.end());
  return out;
}

void spin_sleep(double seconds) {
  // sleep_for can undershoot under load; busy-wait keeps the budget honest.
  const auto end = std::chrono::steady_clock::now() +
                   std::chrono::duration<double>(seconds);
  while (std::chrono::steady_clock::now() < end) {
  }
}

bool valid_dtw_path(const DtwPath& path, std::size_t ta, std::size_t tb) {
  if (path.pairs.empty()) return false;
  if (path.pairs.front() != std::pair<std::size_t, std::size_t>{0, 0})
    return false;
  if (path.pairs.back() != std::pair<std::size_t, std::size_t>{ta - 1, tb - 1})
    return false;
  for (std::size_t i = 1; i < path.pairs.size(); ++i) {
    const std::size_t di = path.pairs[i].first - path.pairs[i - 1].first;
    const std::size_t dj = path.pairs[i].second - path.pairs[i - 1].second;
    if (di > 1 || dj > 1 || (di == 0 && dj == 0)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("dtw on identical sequences is the zero-cost diagonal") {
  const Mat a = random_mat(4, 6, 1);
  const DtwPath path = dtw_align(a, a);
  CHECK(path.total_cost == 0.0);
  REQUIRE(path.pairs.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(path.pairs[i].first == i);
    CHECK(path.pairs[i].second == i);
  }
}

TEST_CASE("dtw absorbs a repeated frame at zero cost") {
  Mat a(2, 3);
  Mat b(2, 4);
  const float frames[3][2] = {{0.0f, 1.0f}, {2.0f, -1.0f}, {0.5f, 0.5f}};
  for (std::size_t t = 0; t < 3; ++t) {
    a.at(0, t) = frames[t][0];
    a.at(1, t) = frames[t][1];
  }
  const std::size_t dup[4] = {0, 1, 1, 2};  // b repeats the middle frame
  for (std::size_t t = 0; t < 4; ++t) {
    b.at(0, t) = frames[dup[t]][0];
    b.at(1, t) = frames[dup[t]][1];
  }
  const DtwPath path = dtw_align(a, b);
  CHECK(path.total_cost == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(valid_dtw_path(path, 3, 4));
}

TEST_CASE("dtw cost matches brute force enumeration") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t ta = len(rng), tb = len(rng);
    const Mat a = random_mat(3, ta, 100 + trial);
    const Mat b = random_mat(3, tb, 900 + trial);
    const DtwPath path = dtw_align(a, b);
    const double want = oracles::brute_force_dtw_cost(a, b);
    CHECK(path.total_cost == doctest::Approx(want).epsilon(1e-9));
    CHECK(valid_dtw_path(path, ta, tb));
  }
}

TEST_CASE("dtw path cost equals the sum of its own frame distances") {
  const Mat a = random_mat(4, 9, 21);
  const Mat b = random_mat(4, 7, 22);
  const DtwPath path = dtw_align(a, b);
  double sum = 0.0;
  for (const auto& [i, j] : path.pairs) {
    double sq = 0.0;
    for (std::size_t d = 0; d < 4; ++d) {
      const double diff = static_cast<double>(a.at(d, i)) - b.at(d, j);
      sq += diff * diff;
    }
    sum += std::sqrt(sq);
  }
  CHECK(path.total_cost == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("dtw rejects empty or mismatched inputs") {
  const Mat a = random_mat(3, 4, 31);
  CHECK_THROWS_AS(dtw_align(a, Mat(3, 0)), DataError);
  CHECK_THROWS_AS(dtw_align(Mat(3, 0), a), DataError);
  CHECK_THROWS_AS(dtw_align(a, random_mat(2, 4, 32)), DataError);
}

TEST_CASE("mcd fixtures") {
  const Mat a = random_mat(13, 20, 41);

  SUBCASE("self distance is exactly zero") { CHECK(mcd(a, a) == 0.0); }

  SUBCASE("unit difference in one coefficient") {
    Mat x(13, 1);
    Mat y(13, 1);
    y.at(4, 0) = 1.0f;
    CHECK(std::abs(mcd(x, y) - 6.1421) <= 1e-3);
  }

  SUBCASE("symmetry") {
    const Mat b = random_mat(13, 24, 42);
    CHECK(mcd(a, b) == doctest::Approx(mcd(b, a)).epsilon(1e-12));
  }

  SUBCASE("constant offset across one coefficient row") {
    Mat x(13, 5);
    Mat y(13, 5);
    for (std::size_t t = 0; t < 5; ++t) y.at(0, t) = 2.0f;
    // every aligned pair differs by 2 in one dim: 2 * (10/ln10) * sqrt(2)
    CHECK(mcd(x, y) == doctest::Approx(2.0 * 6.142051).epsilon(1e-4));
  }
}

TEST_CASE("conversion factor") {
  CHECK(conversion_factor(3.0, 2.0) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(conversion_factor(2.0, 2.0) == 1.0);
  CHECK(conversion_factor(1.0, 4.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(conversion_factor(0.0, 2.0), DataError);
  CHECK_THROWS_AS(conversion_factor(2.0, 0.0), DataError);
  CHECK_THROWS_AS(conversion_factor(-1.0, 2.0), DataError);
}

TEST_CASE("voiced duration on a padded tone") {
  const AudioBuffer clip =
      concat(concat(silence(0.5), tone(1.0)), silence(0.5));
  const double voiced = voiced_duration(clip);
  CHECK(voiced >= 0.9);
  CHECK(voiced <= 1.2);
}

TEST_CASE("hangover bridges a 50 ms gap") {
  const AudioBuffer clip = concat(concat(tone(0.5), silence(0.05)), tone(0.5));
  const double with_hangover = voiced_duration(clip);
  CHECK(with_hangover >= 1.0);
  CHECK(with_hangover <= 1.2);

  VadConfig no_hangover;
  no_hangover.hangover_frames = 0;
  CHECK(voiced_duration(clip, no_hangover) < with_hangover);
}

TEST_CASE("voiced duration is scale invariant within a frame of slack") {
  const AudioBuffer clip =
      concat(concat(silence(0.3), tone(0.8)), silence(0.3));
  AudioBuffer quiet = clip;
  for (float& v : quiet.samples) v *= 0.01f;
  const double a = voiced_duration(clip);
  const double b = voiced_duration(quiet);
  CHECK(std::abs(a - b) <= 0.07);
}

TEST_CASE("voiced duration edge cases") {
  CHECK(voiced_duration(silence(1.0)) == 0.0);
  CHECK(voiced_duration(AudioBuffer{}) == 0.0);

  AudioBuffer blip = silence(0.01);  // shorter than one frame
  const double v = voiced_duration(blip);
  CHECK(v == 0.0);

  std::mt19937 rng(55);
  std::uniform_real_distribution<float> dist(-0.3f, 0.3f);
  AudioBuffer noise;
  noise.sample_rate_hz = 22050;
  noise.samples.resize(22050 * 2);
  for (float& s : noise.samples) s = dist(rng);
  const double dur = static_cast<double>(noise.samples.size()) / 22050.0;
  CHECK(voiced_duration(noise) <= dur + 1e-9);
}

TEST_CASE("speaking rate") {
  const AudioBuffer five_seconds = tone(5.0);

  SUBCASE("30 morae over a 5 s voiced tone is near 6 mora/s") {
    const SpeakingRate r = speaking_rate(30, five_seconds);
    CHECK(r.mora_count == 30);
    CHECK(r.voiced_seconds == doctest::Approx(5.0).epsilon(0.03));
    CHECK(r.mora_per_second == doctest::Approx(6.0).epsilon(0.05));
  }

  SUBCASE("doubling the mora count doubles the rate exactly") {
    const SpeakingRate r1 = speaking_rate(30, five_seconds);
    const SpeakingRate r2 = speaking_rate(60, five_seconds);
    CHECK(r2.mora_per_second ==
          doctest::Approx(2.0 * r1.mora_per_second).epsilon(1e-12));
  }

  SUBCASE("silent audio cannot carry a rate") {
    CHECK_THROWS_AS(speaking_rate(10, silence(2.0)), DataError);
  }

  SUBCASE("zero morae is rejected") {
    CHECK_THROWS_AS(speaking_rate(0, five_seconds), DataError);
  }
}

TEST_CASE("median_of") {
  CHECK(median_of({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median_of({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK(median_of({7.0}) == 7.0);

  std::mt19937 rng(66);
  std::vector<double> vals = {0.5, -2.0, 3.25, 9.0, 1.0, 1.0, -4.5};
  const double want = median_of(vals);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(vals.begin(), vals.end(), rng);
    CHECK(median_of(vals) == want);
  }
  CHECK_THROWS_AS(median_of({}), DataError);
}

TEST_CASE("measure_rtf timing and attribution") {
  const RtfTask task = [](PhaseClock& clock) {
    {
      PhaseClock::Scope scope(&clock, PhaseClock::Phase::Generation);
      spin_sleep(0.06);
    }
    {
      PhaseClock::Scope scope(&clock, PhaseClock::Phase::Conversion);
      spin_sleep(0.04);
    }
    AudioBuffer out;
    out.sample_rate_hz = 22050;
    out.samples.resize(22050);
    return out;
  };

  SUBCASE("rtf is compute over audio and the breakdown sums to the total") {
    const RtfReport r = measure_rtf(task, 1.0, 3);
    CHECK(r.audio_seconds == 1.0);
    CHECK(r.compute_seconds >= 0.095);
    CHECK(r.compute_seconds <= 0.5);
    CHECK(r.rtf == doctest::Approx(r.compute_seconds / r.audio_seconds)
                       .epsilon(1e-12));
    CHECK(r.generation_seconds >= 0.05);
    CHECK(r.conversion_seconds >= 0.03);
    CHECK(r.generation_seconds + r.conversion_seconds ==
          doctest::Approx(r.compute_seconds).epsilon(1e-9));
  }

  SUBCASE("single repeat works") {
    const RtfReport r = measure_rtf(task, 1.0, 1);
    CHECK(r.compute_seconds >= 0.095);
  }

  SUBCASE("even repeat count averages the two middle runs") {
    const RtfReport r = measure_rtf(task, 1.0, 2);
    CHECK(r.compute_seconds >= 0.095);
    CHECK(r.generation_seconds + r.conversion_seconds ==
          doctest::Approx(r.compute_seconds).epsilon(1e-9));
  }

  SUBCASE("rtf scales inversely with the audio duration") {
    const RtfReport short_audio = measure_rtf(task, 0.5, 1);
    const RtfReport long_audio = measure_rtf(task, 2.0, 1);
    const double ratio = short_audio.rtf / long_audio.rtf;
    CHECK(ratio >= 2.0);  // 4x nominal; sleeps jitter but not that much
    CHECK(ratio <= 8.0);
  }

  SUBCASE("zero repeats or nonpositive audio is rejected") {
    CHECK_THROWS_AS(measure_rtf(task, 1.0, 0), DataError);
    CHECK_THROWS_AS(measure_rtf(task, 0.0, 3), DataError);
  }
}

TEST_CASE("untimed task time lands in the generation bucket") {
  const RtfTask task = [](PhaseClock&) {
    spin_sleep(0.05);  // no scopes at all
    AudioBuffer out;
    out.sample_rate_hz = 22050;
    out.samples.resize(2205);
    return out;
  };
  const RtfReport r = measure_rtf(task, 0.1, 1);
  CHECK(r.generation_seconds >= 0.045);
  CHECK(r.conversion_seconds == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(r.generation_seconds + r.conversion_seconds ==
        doctest::Approx(r.compute_seconds).epsilon(1e-9));
}

TEST_CASE("eval report serializes to a single well-typed JSON object") {
  EvalReport report;
  report.mcd_db = 5.25;
  report.rtf = 0.125;
  report.generation_s = 0.75;
  report.conversion_s = 0.25;
  report.mora_per_s = 6.5;
  report.factor = 1.5;
  report.insertion = "after_block2";
  report.method = "kaiser";

  const std::string line = to_json_line(report);
  CHECK(line.find('\n') == std::string::npos);

  const nlohmann::json j = nlohmann::json::parse(line);
  REQUIRE(j.is_object());
  CHECK(j.size() == 8);
  CHECK(j.at("mcd_db").get<double>() == doctest::Approx(5.25));
  CHECK(j.at("rtf").get<double>() == doctest::Approx(0.125));
  CHECK(j.at("generation_s").get<double>() == doctest::Approx(0.75));
  CHECK(j.at("conversion_s").get<double>() == doctest::Approx(0.25));
  CHECK(j.at("mora_per_s").get<double>() == doctest::Approx(6.5));
  CHECK(j.at("factor").get<double>() == doctest::Approx(1.5));
  CHECK(j.at("insertion").get<std::string>() == "after_block2");
  CHECK(j.at("method").get<std::string>() == "kaiser");
}
