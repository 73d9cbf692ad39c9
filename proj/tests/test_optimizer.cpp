/*
 * Copyright 2026 The MannLab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers/gradcheck.hpp"
#include "mann/optimizer.hpp"

using namespace mann;

TEST_CASE("global-norm clipping") {
  SUBCASE("norm 10 against threshold 5 halves the gradient") {
    ParameterStore store;
    auto& p = store.add("p", 2, 1);
    p.grad[0] = 6.0;
    p.grad[1] = 8.0;
    const double pre = clip_global_norm(store, 5.0);
    CHECK(pre == doctest::Approx(10.0));
    CHECK(p.grad[0] == doctest::Approx(3.0));
    CHECK(p.grad[1] == doctest::Approx(4.0));
  }

  SUBCASE("norm below the threshold is untouched") {
    ParameterStore store;
    auto& p = store.add("p", 2, 1);
    p.grad[0] = 3.0;
    p.grad[1] = 0.0;
    clip_global_norm(store, 5.0);
    CHECK(p.grad[0] == 3.0);
    CHECK(p.grad[1] == 0.0);
  }

  SUBCASE("all-zero gradients stay zero") {
    ParameterStore store;
    store.add("a", 3, 2);
    store.add("b", 1, 4);
    clip_global_norm(store, 5.0);
    for (const auto& p : store.all())
      for (int i = 0; i < p.size(); ++i) CHECK(p.grad[i] == 0.0);
  }

  SUBCASE("the norm is global across parameters") {
    ParameterStore store;
    auto& a = store.add("a", 1, 1);
    auto& b = store.add("b", 1, 1);
    a.grad[0] = 6.0;
    b.grad[0] = 8.0;
    clip_global_norm(store, 5.0);
    CHECK(a.grad[0] == doctest::Approx(3.0));
    CHECK(b.grad[0] == doctest::Approx(4.0));
  }

  SUBCASE("idempotent, and the post-clip norm never exceeds threshold + 1e-9") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
      ParameterStore store;
      auto& p = store.add("p", 5, 3);
      for (int i = 0; i < p.size(); ++i) p.grad[i] = rng.uniform(-4.0, 4.0);
      clip_global_norm(store, 2.5);
      Tensor once = p.grad;
      double norm_sq = 0;
      for (int i = 0; i < p.size(); ++i) norm_sq += p.grad[i] * p.grad[i];
      CHECK(std::sqrt(norm_sq) <= 2.5 + 1e-9);
      clip_global_norm(store, 2.5);
      for (int i = 0; i < p.size(); ++i) CHECK(p.grad[i] == doctest::Approx(once[i]).epsilon(1e-12));
    }
  }

  SUBCASE("non-positive threshold rejected") {
    ParameterStore store;
    store.add("p", 1, 1);
    CHECK_THROWS_AS(clip_global_norm(store, 0.0), std::invalid_argument);
  }
}

TEST_CASE("rmsprop update") {
  RmspropConfig cfg;  // lr 1e-4, momentum 0.9, decay 0.95, damping 1e-4

  SUBCASE("zero gradient decays the momentum buffer") {
    ParameterStore store;
    auto& p = store.add("p", 1, 1);
    p.delta[0] = 1.0;
    p.value[0] = 0.0;
    rmsprop_step(store, cfg);
    CHECK(p.delta[0] == doctest::Approx(0.9).epsilon(1e-15));
    CHECK(p.value[0] == doctest::Approx(0.9).epsilon(1e-15));
  }

  SUBCASE("first step from zero state matches the hand-derived value") {
    ParameterStore store;
    auto& p = store.add("p", 1, 1);
    p.grad[0] = 1.0;
    rmsprop_step(store, cfg);
    // n = 0.05, m = 0.05, denom = sqrt(0.05 - 0.0025 + 1e-4)
    const double denom = std::sqrt(0.05 - 0.0025 + 1e-4);
    const double want = -1e-4 / denom;
    CHECK(p.value[0] == doctest::Approx(want).epsilon(1e-12));
    CHECK(std::fabs(p.value[0] - want) < 1e-8);
    CHECK(p.rms_n[0] == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(p.rms_m[0] == doctest::Approx(0.05).epsilon(1e-15));
    // gradient accumulator reset
    CHECK(p.grad[0] == 0.0);
  }

  SUBCASE("identical parameters with identical gradients update identically") {
    ParameterStore store;
    auto& a = store.add("a", 2, 1);
    auto& b = store.add("b", 2, 1);
    Rng rng(3);
    for (int i = 0; i < 2; ++i) {
      const double v = rng.uniform(-1, 1), g = rng.uniform(-1, 1);
      a.value[i] = b.value[i] = v;
      a.grad[i] = b.grad[i] = g;
    }
    for (int step = 0; step < 5; ++step) {
      rmsprop_step(store, cfg);
      for (int i = 0; i < 2; ++i) {
        CHECK(a.value[i] == b.value[i]);
        a.grad[i] = b.grad[i] = 0.1 * (step + 1);
      }
    }
  }

  SUBCASE("a long constant-gradient run keeps the step bounded by lr-scale") {
    ParameterStore store;
    auto& p = store.add("p", 1, 1);
    for (int step = 0; step < 200; ++step) {
      p.grad[0] = 1.0;
      rmsprop_step(store, cfg);
      CHECK(std::isfinite(p.value[0]));
    }
    // centered term keeps the denominator near the damping floor
    CHECK(p.value[0] < 0.0);
  }
}
