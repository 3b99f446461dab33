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

#include <chrono>

namespace ratewarp {

// Accumulates wall-clock time split into a generation phase and a
// conversion phase. Scopes tolerate a null clock so instrumented code paths
// can run untimed.
class PhaseClock {
 public:
  enum class Phase { Generation, Conversion };

  class Scope {
   public:
    Scope(PhaseClock* clock, Phase phase)
        : clock_(clock), phase_(phase),
          start_(std::chrono::steady_clock::now()) {}
    ~Scope() {
      if (clock_ == nullptr) return;
      const double s = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start_)
                           .count();
      if (phase_ == Phase::Generation) {
        clock_->generation_s_ += s;
      } else {
        clock_->conversion_s_ += s;
      }
    }
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

   private:
    PhaseClock* clock_;
    Phase phase_;
    std::chrono::steady_clock::time_point start_;
  };

  double generation_seconds() const { return generation_s_; }
  double conversion_seconds() const { return conversion_s_; }
  void add_generation_seconds(double s) { generation_s_ += s; }
  void reset() {
    generation_s_ = 0.0;
    conversion_s_ = 0.0;
  }

 private:
  double generation_s_ = 0.0;
  double conversion_s_ = 0.0;
};

}  // namespace ratewarp
