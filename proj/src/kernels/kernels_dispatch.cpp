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

#include "ratewarp/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace ratewarp::kernels {
namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct Selection {
  const KernelTable* table;
  const char* name;
};

Selection select() {
  const char* mode = std::getenv("RATEWARP_SIMD");
  const bool want_scalar = mode != nullptr && std::strcmp(mode, "scalar") == 0;
  const KernelTable* simd = avx2_table();
  if (!want_scalar && simd != nullptr && cpu_has_avx2_fma()) {
    return {simd, "avx2"};
  }
  return {&scalar_table(), "scalar"};
}

const Selection& selection() {
  static const Selection s = select();
  return s;
}

}  // namespace

const KernelTable& active() { return *selection().table; }

const char* active_name() { return selection().name; }

}  // namespace ratewarp::kernels
