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
#include <vector>

#include "doctest.h"
#include "ratewarp/kernels.hpp"

using ratewarp::kernels::avx2_table;
using ratewarp::kernels::KernelTable;
using ratewarp::kernels::scalar_table;

namespace {

std::vector<float> random_vec(std::mt19937& rng, std::size_t n,
                              float lo = -1.0f, float hi = 1.0f) {
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> v(n);
  for (float& x : v) x = dist(rng);
  return v;
}

double dot_ref(const std::vector<float>& a, const std::vector<float>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc += static_cast<double>(a[i]) * b[i];
  }
  return acc;
}

// Independent scatter-add over every (t, j) pair, double accumulation.
std::vector<float> tconv_ref(const std::vector<float>& x,
                             const std::vector<float>& w, std::size_t t_out,
                             std::size_t stride, std::size_t pad) {
  std::vector<double> out(t_out, 0.0);
  for (std::size_t t = 0; t < x.size(); ++t) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      const std::ptrdiff_t o = static_cast<std::ptrdiff_t>(t * stride + j) -
                               static_cast<std::ptrdiff_t>(pad);
      if (o >= 0 && o < static_cast<std::ptrdiff_t>(t_out)) {
        out[static_cast<std::size_t>(o)] +=
            static_cast<double>(x[t]) * w[j];
      }
    }
  }
  std::vector<float> outf(t_out);
  for (std::size_t i = 0; i < t_out; ++i) outf[i] = static_cast<float>(out[i]);
  return outf;
}

void check_table(const KernelTable& kt) {
  std::mt19937 rng(17);

  SUBCASE("dot matches double reference") {
    for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{7},
                          std::size_t{16}, std::size_t{33}, std::size_t{100},
                          std::size_t{1024}}) {
      const auto a = random_vec(rng, n);
      const auto b = random_vec(rng, n);
      const double ref = dot_ref(a, b);
      const double got = kt.dot(a.data(), b.data(), n);
      CHECK(std::abs(got - ref) <=
            1e-5 * std::max(1.0, std::abs(ref)) + 1e-4);
    }
  }

  SUBCASE("axpy matches double reference") {
    for (std::size_t n : {std::size_t{1}, std::size_t{5}, std::size_t{16},
                          std::size_t{31}, std::size_t{257}}) {
      const auto x = random_vec(rng, n);
      auto y = random_vec(rng, n);
      const auto y0 = y;
      const float alpha = 0.37f;
      kt.axpy(y.data(), x.data(), alpha, n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(y[i] == doctest::Approx(y0[i] + alpha * x[i]).epsilon(1e-5));
      }
    }
  }

  SUBCASE("leaky_relu keeps positives and scales negatives") {
    auto x = random_vec(rng, 333, -2.0f, 2.0f);
    const auto x0 = x;
    kt.leaky_relu(x.data(), x.size(), 0.1f);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const float want = x0[i] < 0.0f ? x0[i] * 0.1f : x0[i];
      CHECK(x[i] == doctest::Approx(want).epsilon(1e-7));
    }
  }

  SUBCASE("tconv_scatter matches gather reference") {
    std::uniform_int_distribution<std::size_t> t_dist(1, 40);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t t_in = t_dist(rng);
      const std::size_t stride = 1 + trial % 4;
      const std::size_t k =
          (trial % 3 == 0) ? 16 : (trial % 3 == 1 ? 4 : 1 + trial % 9);
      const std::size_t pad = trial % std::max<std::size_t>(1, k);
      const std::ptrdiff_t t_out_s =
          static_cast<std::ptrdiff_t>((t_in - 1) * stride + k) -
          2 * static_cast<std::ptrdiff_t>(pad);
      if (t_out_s < 1) continue;
      const std::size_t t_out = static_cast<std::size_t>(t_out_s);
      const auto x = random_vec(rng, t_in);
      const auto w = random_vec(rng, k);
      std::vector<float> out(t_out, 0.0f);
      kt.tconv_scatter(out.data(), t_out, x.data(), t_in, w.data(), k, stride,
                       pad);
      const auto ref = tconv_ref(x, w, t_out, stride, pad);
      for (std::size_t i = 0; i < t_out; ++i) {
        CHECK(std::abs(out[i] - ref[i]) <= 1e-5f);
      }
    }
  }

  SUBCASE("tconv_scatter accumulates on top of existing output") {
    const auto x = random_vec(rng, 10);
    const auto w = random_vec(rng, 4);
    const std::size_t t_out = (10 - 1) * 2 + 4 - 2;
    std::vector<float> out(t_out, 1.0f);
    kt.tconv_scatter(out.data(), t_out, x.data(), 10, w.data(), 4, 2, 1);
    auto ref = tconv_ref(x, w, t_out, 2, 1);
    for (std::size_t i = 0; i < t_out; ++i) {
      CHECK(out[i] == doctest::Approx(1.0f + ref[i]).epsilon(1e-5));
    }
  }
}

}  // namespace

TEST_CASE("scalar kernel table") { check_table(scalar_table()); }

TEST_CASE("avx2 kernel table when available") {
  const KernelTable* kt = avx2_table();
  if (kt == nullptr) {
    MESSAGE("avx2 not available in this build/CPU; skipping");
    return;
  }
  check_table(*kt);
}

TEST_CASE("avx2 and scalar agree on identical inputs") {
  const KernelTable* vec = avx2_table();
  if (vec == nullptr) return;
  const KernelTable& ref = scalar_table();
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> n_dist(1, 500);
    const std::size_t n = n_dist(rng);
    const auto a = random_vec(rng, n);
    const auto b = random_vec(rng, n);
    const float d1 = ref.dot(a.data(), b.data(), n);
    const float d2 = vec->dot(a.data(), b.data(), n);
    CHECK(std::abs(d1 - d2) <= 1e-4f * std::max(1.0f, std::abs(d1)) + 1e-5f);

    auto y1 = random_vec(rng, n);
    auto y2 = y1;
    ref.axpy(y1.data(), a.data(), 0.5f, n);
    vec->axpy(y2.data(), a.data(), 0.5f, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(y1[i] == y2[i]);

    auto l1 = a;
    auto l2 = a;
    ref.leaky_relu(l1.data(), n, 0.1f);
    vec->leaky_relu(l2.data(), n, 0.1f);
    for (std::size_t i = 0; i < n; ++i) CHECK(l1[i] == l2[i]);
  }
}

TEST_CASE("active table reports a known name") {
  const char* name = ratewarp::kernels::active_name();
  const bool known = std::string_view(name) == "scalar" ||
                     std::string_view(name) == "avx2";
  CHECK(known);
  CHECK(ratewarp::kernels::active().dot != nullptr);
}
