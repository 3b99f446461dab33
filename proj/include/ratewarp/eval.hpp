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
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ratewarp/audio.hpp"
#include "ratewarp/mat.hpp"
#include "ratewarp/phase_clock.hpp"

namespace ratewarp {

struct DtwPath {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double total_cost = 0.0;
};

// Minimal-cost alignment of (D, Ta) against (D, Tb) under Euclidean frame
// distance with steps {(1,0),(0,1),(1,1)}; backtrace ties prefer (1,1),
// then (1,0).
DtwPath dtw_align(const Mat& a, const Mat& b);

// Mean over the DTW path of (10/ln 10) * sqrt(2 * sum_d diff^2), in dB.
double mcd(const Mat& cep_a, const Mat& cep_b);

double conversion_factor(double t_src_seconds, double t_tgt_seconds);

struct VadConfig {
  double frame_ms = 30.0;
  double hop_ms = 10.0;       // <= frame_ms
  double threshold_db = -40.0;  // relative to the peak frame energy
  std::size_t hangover_frames = 5;
};

// Voiced seconds = voiced-frame count * hop_ms / 1000. Frames are voiced
// when their energy exceeds threshold_db relative to the loudest frame; a
// trailing hangover keeps short gaps voiced. All-silent input gives 0.
double voiced_duration(const AudioBuffer& buffer, const VadConfig& config = {});

struct SpeakingRate {
  double mora_per_second = 0.0;
  std::size_t mora_count = 0;
  double voiced_seconds = 0.0;
};

SpeakingRate speaking_rate(std::size_t mora_count, const AudioBuffer& buffer,
                           const VadConfig& vad = {});

struct RtfReport {
  double compute_seconds = 0.0;
  double audio_seconds = 0.0;
  double rtf = 0.0;
  double generation_seconds = 0.0;
  double conversion_seconds = 0.0;
};

using RtfTask = std::function<AudioBuffer(PhaseClock&)>;

// Runs the task once as a warm-up, then `repeats` measured times, and
// reports the median run (by total wall-clock). Un-attributed run time goes
// to the generation bucket so the breakdown always sums to the total.
// Must run on the calling thread with no concurrent benchmark in process.
RtfReport measure_rtf(const RtfTask& task, double audio_seconds_out,
                      std::size_t repeats);

// Median with even-count averaging; order of inputs is irrelevant.
double median_of(std::vector<double> values);

struct EvalReport {
  double mcd_db = 0.0;
  double rtf = 0.0;
  double generation_s = 0.0;
  double conversion_s = 0.0;
  double mora_per_s = 0.0;
  double factor = 1.0;
  std::string insertion;
  std::string method;
};

// One JSON object, no trailing newline, stable keys.
std::string to_json_line(const EvalReport& report);

}  // namespace ratewarp
