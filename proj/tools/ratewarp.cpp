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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ratewarp/audio.hpp"
#include "ratewarp/errors.hpp"
#include "ratewarp/eval.hpp"
#include "ratewarp/interp.hpp"
#include "ratewarp/mel.hpp"
#include "ratewarp/vocoder.hpp"
#include "ratewarp/wsola.hpp"

namespace rw = ratewarp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitData = 3;

constexpr double kStandardFactors[] = {0.25, 0.5, 0.75, 1.25, 1.5, 1.75, 2.0};

rw::MelConfig mel_config_for(const rw::AudioBuffer& audio) {
  rw::MelConfig cfg;
  cfg.sample_rate_hz = audio.sample_rate_hz;
  cfg.fmax_hz = std::min(cfg.fmax_hz, audio.sample_rate_hz / 2.0);
  return cfg;
}

rw::InsertionPoint parse_insertion(const std::string& s) {
  if (s == "mel") return rw::InsertionPoint::Mel;
  if (s == "1") return rw::InsertionPoint::AfterBlock1;
  if (s == "2") return rw::InsertionPoint::AfterBlock2;
  if (s == "3") return rw::InsertionPoint::AfterBlock3;
  if (s == "4") return rw::InsertionPoint::AfterBlock4;
  throw rw::DataError("insertion must be one of mel|1|2|3|4");
}

rw::InterpolationMethod parse_method(const std::string& s) {
  if (s == "linear") return rw::InterpolationMethod::Linear;
  if (s == "kaiser") return rw::InterpolationMethod::BandlimitedKaiser;
  throw rw::DataError("method must be linear or kaiser");
}

std::string insertion_token(rw::InsertionPoint p) {
  switch (p) {
    case rw::InsertionPoint::Mel: return "mel";
    case rw::InsertionPoint::AfterBlock1: return "1";
    case rw::InsertionPoint::AfterBlock2: return "2";
    case rw::InsertionPoint::AfterBlock3: return "3";
    case rw::InsertionPoint::AfterBlock4: return "4";
  }
  return "?";
}

rw::WeightStore resolve_weights(const std::string& weights_path,
                                std::uint64_t seed) {
  if (!weights_path.empty()) return rw::load_weights(weights_path);
  rw::GeneratorConfig cfg;
  return rw::init_random(cfg, seed);
}

// Sidecar convention: <utt>.wav is accompanied by <utt>.mora holding one
// integer. Falls back to 1 so rate readings degrade to 1/voiced_seconds.
std::size_t mora_count_for(const std::string& wav_path) {
  std::filesystem::path p(wav_path);
  p.replace_extension(".mora");
  std::ifstream f(p);
  long long v = 0;
  if (f && (f >> v) && v > 0) return static_cast<std::size_t>(v);
  return 1;
}

std::size_t thread_budget() {
  const char* env = std::getenv("RATEWARP_THREADS");
  if (env == nullptr) return 1;
  const long v = std::strtol(env, nullptr, 10);
  if (v < 1) return 1;
  return static_cast<std::size_t>(v);
}

rw::Mat cepstra_of(const rw::AudioBuffer& audio, std::size_t n_coeffs) {
  const rw::MelSpectrogram mel = rw::mel_spectrogram(audio, mel_config_for(audio));
  return rw::mel_cepstrum(mel, n_coeffs);
}

struct WsolaArgs {
  double factor = 1.0;
  std::string in_path;
  std::string out_path;
  rw::WsolaConfig config;
};

int run_wsola(const WsolaArgs& a) {
  const rw::AudioBuffer in = rw::load_wav(a.in_path);
  const rw::AudioBuffer out = rw::wsola(in, a.factor, a.config);
  rw::save_wav(out, a.out_path);
  return kExitOk;
}

struct WarpArgs {
  double factor = 1.0;
  std::string insertion = "mel";
  std::string method = "linear";
  std::string weights;
  std::uint64_t seed = 0;
  std::string in_path;
  std::string out_path;
};

int run_warp(const WarpArgs& a) {
  const rw::AudioBuffer in = rw::load_wav(a.in_path);
  const rw::WeightStore store = resolve_weights(a.weights, a.seed);
  const rw::MelSpectrogram mel = rw::mel_spectrogram(in, mel_config_for(in));
  rw::RateConversionSpec spec;
  spec.factor = a.factor;
  spec.insertion = parse_insertion(a.insertion);
  spec.method = parse_method(a.method);
  const rw::AudioBuffer out = rw::forward_with_rate(mel, spec, store);
  rw::save_wav(out, a.out_path);
  return kExitOk;
}

struct ResampleArgs {
  std::uint32_t rate = 22050;
  std::string in_path;
  std::string out_path;
  rw::KaiserResampleParams params;
};

int run_resample(const ResampleArgs& a) {
  const rw::AudioBuffer in = rw::load_wav(a.in_path);
  rw::AudioBuffer out;
  out.sample_rate_hz = a.rate;
  out.samples = rw::resample_bandlimited(in.samples, in.sample_rate_hz,
                                         a.rate, a.params);
  rw::save_wav(out, a.out_path);
  return kExitOk;
}

struct MelArgs {
  std::string in_path;
  std::string out_path;
};

int run_mel(const MelArgs& a) {
  const rw::AudioBuffer in = rw::load_wav(a.in_path);
  const rw::MelSpectrogram mel = rw::mel_spectrogram(in, mel_config_for(in));
  nlohmann::json frames = nlohmann::json::array();
  for (std::size_t t = 0; t < mel.data.cols; ++t) {
    nlohmann::json frame = nlohmann::json::array();
    for (std::size_t c = 0; c < mel.data.rows; ++c) {
      frame.push_back(mel.data.at(c, t));
    }
    frames.push_back(std::move(frame));
  }
  const nlohmann::json j = {{"sample_rate_hz", mel.config.sample_rate_hz},
                            {"n_mels", mel.config.n_mels},
                            {"hop_length", mel.config.hop_length},
                            {"n_frames", mel.data.cols},
                            {"frames", frames}};
  std::ofstream f(a.out_path);
  if (!f) throw rw::IoError("cannot open for writing: " + a.out_path);
  f << j.dump() << "\n";
  if (!f) throw rw::IoError("write failed: " + a.out_path);
  return kExitOk;
}

struct GenInitArgs {
  std::uint64_t seed = 0;
  std::string out_path;
};

int run_gen_init(const GenInitArgs& a) {
  rw::GeneratorConfig cfg;
  rw::save_weights(rw::init_random(cfg, a.seed), a.out_path);
  return kExitOk;
}

struct EvalMcdArgs {
  std::string a_path;
  std::string b_path;
  std::size_t coeffs = 13;
};

int run_eval_mcd(const EvalMcdArgs& a) {
  const rw::AudioBuffer wa = rw::load_wav(a.a_path);
  const rw::AudioBuffer wb = rw::load_wav(a.b_path);
  const double v = rw::mcd(cepstra_of(wa, a.coeffs), cepstra_of(wb, a.coeffs));
  std::cout << nlohmann::json{{"mcd_db", v}}.dump() << "\n";
  return kExitOk;
}

struct EvalRtfArgs {
  double factor = 1.0;
  std::string insertion = "mel";
  std::string method = "linear";
  std::string weights;
  std::uint64_t seed = 0;
  std::size_t repeats = 3;
  std::string in_path;
};

int run_eval_rtf(const EvalRtfArgs& a) {
  const rw::AudioBuffer in = rw::load_wav(a.in_path);
  const rw::WeightStore store = resolve_weights(a.weights, a.seed);
  const rw::MelSpectrogram mel = rw::mel_spectrogram(in, mel_config_for(in));
  rw::RateConversionSpec spec;
  spec.factor = a.factor;
  spec.insertion = parse_insertion(a.insertion);
  spec.method = parse_method(a.method);

  const rw::AudioBuffer probe = rw::forward_with_rate(mel, spec, store);
  const double audio_s = probe.duration_seconds();
  const rw::RtfReport r = rw::measure_rtf(
      [&](rw::PhaseClock& clock) {
        return rw::forward_with_rate(mel, spec, store, nullptr, &clock);
      },
      audio_s, a.repeats);
  std::cout << nlohmann::json{{"rtf", r.rtf},
                              {"compute_s", r.compute_seconds},
                              {"generation_s", r.generation_seconds},
                              {"conversion_s", r.conversion_seconds},
                              {"audio_s", r.audio_seconds}}
                   .dump()
            << "\n";
  return kExitOk;
}

struct EvalRateArgs {
  std::string in_path;
  std::size_t mora = 0;  // 0 = sidecar or 1
};

int run_eval_rate(const EvalRateArgs& a) {
  const rw::AudioBuffer in = rw::load_wav(a.in_path);
  const std::size_t mora = a.mora > 0 ? a.mora : mora_count_for(a.in_path);
  const rw::SpeakingRate r = rw::speaking_rate(mora, in);
  std::cout << nlohmann::json{{"mora_per_s", r.mora_per_second},
                              {"mora_count", r.mora_count},
                              {"voiced_s", r.voiced_seconds}}
                   .dump()
            << "\n";
  return kExitOk;
}

struct MatrixArgs {
  std::string in_path;
  std::string out_path;
  std::vector<double> factors;
  std::string weights;
  std::uint64_t seed = 0;
  std::size_t repeats = 3;
  std::size_t coeffs = 13;
};

struct MatrixJob {
  double factor = 1.0;
  bool is_wsola = false;
  rw::RateConversionSpec spec;
};

int run_matrix(const MatrixArgs& a) {
  const rw::AudioBuffer in = rw::load_wav(a.in_path);
  const rw::WeightStore store = resolve_weights(a.weights, a.seed);
  const rw::MelSpectrogram mel = rw::mel_spectrogram(in, mel_config_for(in));
  const rw::Mat cep_src = cepstra_of(in, a.coeffs);
  const std::size_t mora = mora_count_for(a.in_path);

  std::vector<MatrixJob> jobs;
  for (const char* method : {"linear", "kaiser"}) {
    for (const char* insertion : {"mel", "1", "2", "3", "4"}) {
      for (double f : a.factors) {
        MatrixJob j;
        j.factor = f;
        j.spec.factor = f;
        j.spec.insertion = parse_insertion(insertion);
        j.spec.method = parse_method(method);
        jobs.push_back(j);
      }
    }
  }
  for (double f : a.factors) {
    MatrixJob j;
    j.factor = f;
    j.is_wsola = true;
    jobs.push_back(j);
  }

  const auto synthesize = [&](const MatrixJob& job,
                              rw::PhaseClock* clock) -> rw::AudioBuffer {
    if (job.is_wsola) {
      rw::AudioBuffer base;
      {
        rw::PhaseClock::Scope s(clock, rw::PhaseClock::Phase::Generation);
        base = rw::forward(mel, store);
      }
      rw::PhaseClock::Scope s(clock, rw::PhaseClock::Phase::Conversion);
      return rw::wsola(base, job.factor);
    }
    return rw::forward_with_rate(mel, job.spec, store, nullptr, clock);
  };

  // Phase 1 (parallelizable): synthesis and signal metrics.
  std::vector<rw::EvalReport> reports(jobs.size());
  std::vector<double> audio_seconds(jobs.size(), 0.0);
  const auto run_job = [&](std::size_t idx) {
    const MatrixJob& job = jobs[idx];
    const rw::AudioBuffer out = synthesize(job, nullptr);
    rw::EvalReport rep;
    rep.factor = job.factor;
    rep.insertion = job.is_wsola ? "waveform" : insertion_token(job.spec.insertion);
    rep.method = job.is_wsola
                     ? "wsola"
                     : (job.spec.method == rw::InterpolationMethod::Linear
                            ? "linear"
                            : "kaiser");
    rep.mcd_db = rw::mcd(cep_src, cepstra_of(out, a.coeffs));
    const double voiced = rw::voiced_duration(out);
    rep.mora_per_s = voiced > 0.0 ? static_cast<double>(mora) / voiced : 0.0;
    reports[idx] = rep;
    audio_seconds[idx] = out.duration_seconds();
  };

  const std::size_t workers = std::min(thread_budget(), jobs.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < jobs.size(); i += workers) run_job(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  // Phase 2 (serialized): wall-clock timing.
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const rw::RtfReport r = rw::measure_rtf(
        [&](rw::PhaseClock& clock) { return synthesize(jobs[i], &clock); },
        audio_seconds[i], a.repeats);
    reports[i].rtf = r.rtf;
    reports[i].generation_s = r.generation_seconds;
    reports[i].conversion_s = r.conversion_seconds;
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!a.out_path.empty()) {
    file.open(a.out_path);
    if (!file) throw rw::IoError("cannot open for writing: " + a.out_path);
    out = &file;
  }
  for (const rw::EvalReport& rep : reports) {
    (*out) << rw::to_json_line(rep) << "\n";
  }
  if (!*out) throw rw::IoError("write failed");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speaking-rate conversion inside a neural vocoder"};
  app.require_subcommand(1);
  const auto factor_range = CLI::Range(0.05, 20.0);

  WsolaArgs wsola_args;
  CLI::App* c_wsola = app.add_subcommand("wsola", "time-scale modification baseline");
  c_wsola->add_option("--factor", wsola_args.factor, "conversion factor t_src/t_tgt")
      ->required()->check(factor_range);
  c_wsola->add_option("--frame-length", wsola_args.config.frame_length);
  c_wsola->add_option("--hop", wsola_args.config.synthesis_hop);
  c_wsola->add_option("--tolerance", wsola_args.config.tolerance);
  c_wsola->add_option("input", wsola_args.in_path, "input wav")->required();
  c_wsola->add_option("output", wsola_args.out_path, "output wav")->required();

  WarpArgs warp_args;
  CLI::App* c_warp = app.add_subcommand("warp", "rate conversion inside the generator");
  c_warp->add_option("--factor", warp_args.factor)->required()->check(factor_range);
  c_warp->add_option("--insertion", warp_args.insertion, "mel|1|2|3|4")
      ->check(CLI::IsMember({"mel", "1", "2", "3", "4"}));
  c_warp->add_option("--method", warp_args.method, "linear or kaiser")
      ->check(CLI::IsMember({"linear", "kaiser"}));
  c_warp->add_option("--weights", warp_args.weights, "weight container path");
  c_warp->add_option("--seed", warp_args.seed, "seed when no weights given");
  c_warp->add_option("input", warp_args.in_path)->required();
  c_warp->add_option("output", warp_args.out_path)->required();

  ResampleArgs resample_args;
  CLI::App* c_resample = app.add_subcommand("resample", "bandlimited resampling");
  c_resample->add_option("--rate", resample_args.rate, "target sample rate")
      ->required()->check(CLI::PositiveNumber);
  c_resample->add_option("--zero-crossings", resample_args.params.zero_crossings);
  c_resample->add_option("--beta", resample_args.params.beta);
  c_resample->add_option("--rolloff", resample_args.params.rolloff);
  c_resample->add_option("input", resample_args.in_path)->required();
  c_resample->add_option("output", resample_args.out_path)->required();

  MelArgs mel_args;
  CLI::App* c_mel = app.add_subcommand("mel", "mel-spectrogram extraction to JSON");
  c_mel->add_option("input", mel_args.in_path)->required();
  c_mel->add_option("output", mel_args.out_path)->required();

  GenInitArgs gen_args;
  CLI::App* c_gen = app.add_subcommand("gen-init", "write seeded random weights");
  c_gen->add_option("--seed", gen_args.seed);
  c_gen->add_option("--out", gen_args.out_path)->required();

  EvalMcdArgs mcd_args;
  CLI::App* c_mcd = app.add_subcommand("eval-mcd", "mel-cepstral distortion");
  c_mcd->add_option("--coeffs", mcd_args.coeffs)->check(CLI::PositiveNumber);
  c_mcd->add_option("a", mcd_args.a_path)->required();
  c_mcd->add_option("b", mcd_args.b_path)->required();

  EvalRtfArgs rtf_args;
  CLI::App* c_rtf = app.add_subcommand("eval-rtf", "real-time factor");
  c_rtf->add_option("--factor", rtf_args.factor)->required()->check(factor_range);
  c_rtf->add_option("--insertion", rtf_args.insertion)
      ->check(CLI::IsMember({"mel", "1", "2", "3", "4"}));
  c_rtf->add_option("--method", rtf_args.method)
      ->check(CLI::IsMember({"linear", "kaiser"}));
  c_rtf->add_option("--weights", rtf_args.weights);
  c_rtf->add_option("--seed", rtf_args.seed);
  c_rtf->add_option("--repeats", rtf_args.repeats)->check(CLI::PositiveNumber);
  c_rtf->add_option("input", rtf_args.in_path)->required();

  EvalRateArgs rate_args;
  CLI::App* c_rate = app.add_subcommand("eval-rate", "speaking rate via VAD");
  c_rate->add_option("--mora", rate_args.mora, "override mora count");
  c_rate->add_option("input", rate_args.in_path)->required();

  MatrixArgs matrix_args;
  CLI::App* c_matrix = app.add_subcommand("matrix", "full evaluation matrix");
  c_matrix->add_option("--factors", matrix_args.factors, "comma-separated factors")
      ->delimiter(',')->check(factor_range);
  c_matrix->add_option("--weights", matrix_args.weights);
  c_matrix->add_option("--seed", matrix_args.seed);
  c_matrix->add_option("--repeats", matrix_args.repeats)->check(CLI::PositiveNumber);
  c_matrix->add_option("--coeffs", matrix_args.coeffs)->check(CLI::PositiveNumber);
  c_matrix->add_option("--out", matrix_args.out_path, "JSONL path (stdout if absent)");
  c_matrix->add_option("input", matrix_args.in_path)->required();

  try {
    app.parse(argc, argv);
    if (matrix_args.factors.empty()) {
      matrix_args.factors.assign(std::begin(kStandardFactors),
                                 std::end(kStandardFactors));
    }
    if (app.got_subcommand(c_wsola)) return run_wsola(wsola_args);
    if (app.got_subcommand(c_warp)) return run_warp(warp_args);
    if (app.got_subcommand(c_resample)) return run_resample(resample_args);
    if (app.got_subcommand(c_mel)) return run_mel(mel_args);
    if (app.got_subcommand(c_gen)) return run_gen_init(gen_args);
    if (app.got_subcommand(c_mcd)) return run_eval_mcd(mcd_args);
    if (app.got_subcommand(c_rtf)) return run_eval_rtf(rtf_args);
    if (app.got_subcommand(c_rate)) return run_eval_rate(rate_args);
    if (app.got_subcommand(c_matrix)) return run_matrix(matrix_args);
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const rw::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const rw::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
