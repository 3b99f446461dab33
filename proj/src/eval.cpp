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

#include "ratewarp/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "ratewarp/errors.hpp"

namespace ratewarp {
namespace {

double frame_distance(const Mat& a, const Mat& b, std::size_t i,
                      std::size_t j) {
  double acc = 0.0;
  for (std::size_t d = 0; d < a.rows; ++d) {
    const double diff = static_cast<double>(a.at(d, i)) - b.at(d, j);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace

DtwPath dtw_align(const Mat& a, const Mat& b) {
  if (a.rows != b.rows) throw DataError("dtw: feature dimension mismatch");
  if (a.cols == 0 || b.cols == 0) throw DataError("dtw: empty sequence");
  const std::size_t n = a.cols;
  const std::size_t m = b.cols;

  std::vector<double> dp(n * m);
  const auto at = [&](std::size_t i, std::size_t j) -> double& {
    return dp[i * m + j];
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double d = frame_distance(a, b, i, j);
      double best = 0.0;
      if (i == 0 && j == 0) {
        best = 0.0;
      } else if (i == 0) {
        best = at(0, j - 1);
      } else if (j == 0) {
        best = at(i - 1, 0);
      } else {
        best = std::min({at(i - 1, j - 1), at(i - 1, j), at(i, j - 1)});
      }
      at(i, j) = d + best;
    }
  }

  DtwPath path;
  std::size_t i = n - 1;
  std::size_t j = m - 1;
  path.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      // Tie preference: diagonal, then (1,0), then (0,1).
      const double diag = at(i - 1, j - 1);
      const double up = at(i - 1, j);
      const double left = at(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    path.pairs.emplace_back(i, j);
  }
  std::reverse(path.pairs.begin(), path.pairs.end());
  for (const auto& [pi, pj] : path.pairs) {
    path.total_cost += frame_distance(a, b, pi, pj);
  }
  return path;
}

double mcd(const Mat& cep_a, const Mat& cep_b) {
  if (cep_a.empty() || cep_b.empty()) throw DataError("mcd: empty input");
  const DtwPath path = dtw_align(cep_a, cep_b);
  const double k = 10.0 / std::log(10.0);
  double acc = 0.0;
  for (const auto& [i, j] : path.pairs) {
    double sq = 0.0;
    for (std::size_t d = 0; d < cep_a.rows; ++d) {
      const double diff = static_cast<double>(cep_a.at(d, i)) - cep_b.at(d, j);
      sq += diff * diff;
    }
    acc += k * std::sqrt(2.0 * sq);
  }
  return acc / static_cast<double>(path.pairs.size());
}

double conversion_factor(double t_src_seconds, double t_tgt_seconds) {
  if (!(t_src_seconds > 0.0) || !(t_tgt_seconds > 0.0)) {
    throw DataError("conversion_factor: durations must be positive");
  }
  return t_src_seconds / t_tgt_seconds;
}

double voiced_duration(const AudioBuffer& buffer, const VadConfig& config) {
  if (!(config.frame_ms > 0.0) || !(config.hop_ms > 0.0) ||
      config.hop_ms > config.frame_ms) {
    throw DataError("vad: need 0 < hop_ms <= frame_ms");
  }
  if (buffer.samples.empty()) return 0.0;
  const double sr = static_cast<double>(buffer.sample_rate_hz);
  const std::size_t frame = static_cast<std::size_t>(
      std::max(1.0, std::round(config.frame_ms * sr / 1000.0)));
  const std::size_t hop = static_cast<std::size_t>(
      std::max(1.0, std::round(config.hop_ms * sr / 1000.0)));
  if (buffer.samples.size() < frame) return 0.0;
  const std::size_t n_frames = 1 + (buffer.samples.size() - frame) / hop;

  std::vector<double> energy(n_frames);
  double peak = 0.0;
  for (std::size_t i = 0; i < n_frames; ++i) {
    double e = 0.0;
    const float* x = buffer.samples.data() + i * hop;
    for (std::size_t t = 0; t < frame; ++t) {
      e += static_cast<double>(x[t]) * x[t];
    }
    energy[i] = e;
    peak = std::max(peak, e);
  }
  if (peak <= 0.0) return 0.0;

  std::size_t voiced = 0;
  std::size_t hangover = 0;
  for (std::size_t i = 0; i < n_frames; ++i) {
    const double db = 10.0 * std::log10(energy[i] / peak);
    if (db > config.threshold_db) {
      ++voiced;
      hangover = config.hangover_frames;
    } else if (hangover > 0) {
      ++voiced;
      --hangover;
    }
  }
  return static_cast<double>(voiced) * config.hop_ms / 1000.0;
}

SpeakingRate speaking_rate(std::size_t mora_count, const AudioBuffer& buffer,
                           const VadConfig& vad) {
  if (mora_count == 0) throw DataError("speaking_rate: mora_count must be >= 1");
  const double voiced = voiced_duration(buffer, vad);
  if (!(voiced > 0.0)) throw DataError("speaking_rate: zero voiced duration");
  SpeakingRate r;
  r.mora_count = mora_count;
  r.voiced_seconds = voiced;
  r.mora_per_second = static_cast<double>(mora_count) / voiced;
  return r;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw DataError("median_of: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

RtfReport measure_rtf(const RtfTask& task, double audio_seconds_out,
                      std::size_t repeats) {
  if (repeats == 0) throw DataError("measure_rtf: repeats must be >= 1");
  if (!(audio_seconds_out > 0.0)) {
    throw DataError("measure_rtf: audio_seconds_out must be positive");
  }

  struct Run {
    double total;
    double generation;
    double conversion;
  };
  const auto run_once = [&]() -> Run {
    PhaseClock clock;
    const auto t0 = std::chrono::steady_clock::now();
    (void)task(clock);
    const auto t1 = std::chrono::steady_clock::now();
    Run r;
    r.total = std::chrono::duration<double>(t1 - t0).count();
    r.generation = clock.generation_seconds();
    r.conversion = clock.conversion_seconds();
    const double residual = r.total - r.generation - r.conversion;
    if (residual > 0.0) r.generation += residual;
    // Scope overhead can make the buckets exceed the outer total; pin the
    // invariant generation + conversion = total either way.
    r.total = r.generation + r.conversion;
    return r;
  };

  (void)run_once();  // warm-up
  std::vector<Run> runs;
  runs.reserve(repeats);
  for (std::size_t i = 0; i < repeats; ++i) runs.push_back(run_once());
  std::sort(runs.begin(), runs.end(),
            [](const Run& x, const Run& y) { return x.total < y.total; });

  Run med;
  if (repeats % 2 == 1) {
    med = runs[repeats / 2];
  } else {
    const Run& lo = runs[repeats / 2 - 1];
    const Run& hi = runs[repeats / 2];
    med.total = 0.5 * (lo.total + hi.total);
    med.generation = 0.5 * (lo.generation + hi.generation);
    med.conversion = 0.5 * (lo.conversion + hi.conversion);
  }

  RtfReport report;
  report.compute_seconds = med.total;
  report.audio_seconds = audio_seconds_out;
  report.rtf = med.total / audio_seconds_out;
  report.generation_seconds = med.generation;
  report.conversion_seconds = med.conversion;
  return report;
}

std::string to_json_line(const EvalReport& report) {
  const nlohmann::json j = {
      {"mcd_db", report.mcd_db},
      {"rtf", report.rtf},
      {"generation_s", report.generation_s},
      {"conversion_s", report.conversion_s},
      {"mora_per_s", report.mora_per_s},
      {"factor", report.factor},
      {"insertion", report.insertion},
      {"method", report.method}};
  return j.dump();
}

}  // namespace ratewarp
