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
#include <cstdio>
#include <fstream>

#include "mann/parameters.hpp"

using namespace mann;

TEST_CASE("param_count sums entries, optionally by prefix") {
  ParameterStore store;
  CHECK(store.param_count() == 0);
  store.add("controller.W_xh", 128, 9);
  store.add("controller.W_rh", 128, 20);
  store.add("controller.W_hh", 128, 128);
  store.add("controller.b", 128, 1);
  store.add("output.W_y", 8, 148);
  CHECK(store.param_count("controller.") == 20224);
  CHECK(store.param_count() == 20224 + 8 * 148);
  CHECK(store.param_count("heads.") == 0);
}

TEST_CASE("duplicate names are rejected") {
  ParameterStore store;
  store.add("w", 2, 2);
  CHECK_THROWS_AS(store.add("w", 2, 2), std::invalid_argument);
}

TEST_CASE("init: biases zero, weights bounded by the fan rule, deterministic") {
  ParameterStore a, b;
  for (auto* s : {&a, &b}) {
    s->add("W", 30, 20);
    s->add("b", 30, 1);
  }
  Rng ra(77), rb(77);
  a.init(ra);
  b.init(rb);

  const double bound = std::sqrt(6.0 / (30 + 20));
  for (int i = 0; i < a.find("W")->size(); ++i) {
    CHECK(std::fabs(a.find("W")->value[i]) <= bound);
    CHECK(a.find("W")->value[i] == b.find("W")->value[i]);
  }
  bool any_nonzero = false;
  for (int i = 0; i < a.find("W")->size(); ++i) any_nonzero |= a.find("W")->value[i] != 0.0;
  CHECK(any_nonzero);
  for (int i = 0; i < 30; ++i) CHECK(a.find("b")->value[i] == 0.0);
}

TEST_CASE("checkpoint round-trip is bit-exact including optimizer slots") {
  ParameterStore store;
  store.add("controller.W_xh", 7, 5);
  store.add("controller.b", 7, 1);
  Rng rng(5);
  store.init(rng);
  for (auto& p : store.all())
    for (int i = 0; i < p.size(); ++i) {
      p.rms_n[i] = rng.uniform(0, 1);
      p.rms_m[i] = rng.uniform(-1, 1);
      p.delta[i] = rng.uniform(-1, 1);
    }

  const std::string path = "ckpt_test.bin";
  save_checkpoint(store, path);

  ParameterStore loaded;
  loaded.add("controller.W_xh", 7, 5);
  loaded.add("controller.b", 7, 1);
  load_checkpoint(loaded, path);

  for (size_t pi = 0; pi < store.all().size(); ++pi) {
    const auto& orig = store.all()[pi];
    const auto& back = loaded.all()[pi];
    CHECK(orig.value == back.value);
    CHECK(orig.rms_n == back.rms_n);
    CHECK(orig.rms_m == back.rms_m);
    CHECK(orig.delta == back.delta);
  }
  std::remove(path.c_str());
}

TEST_CASE("checkpoint loading validates magic, names and shapes") {
  const std::string path = "ckpt_bad.bin";
  {
    std::ofstream out(path, std::ios::binary);
    out << "NOTMAGIC!";
  }
  ParameterStore store;
  store.add("w", 1, 1);
  CHECK_THROWS_AS(load_checkpoint(store, path), std::runtime_error);
  std::remove(path.c_str());

  ParameterStore source;
  source.add("w", 2, 2);
  save_checkpoint(source, path);

  ParameterStore wrong_shape;
  wrong_shape.add("w", 3, 2);
  CHECK_THROWS_AS(load_checkpoint(wrong_shape, path), std::runtime_error);

  ParameterStore wrong_name;
  wrong_name.add("v", 2, 2);
  CHECK_THROWS_AS(load_checkpoint(wrong_name, path), std::runtime_error);
  std::remove(path.c_str());
}

TEST_CASE("snapshots restore values and slots") {
  ParameterStore store;
  store.add("w", 3, 3);
  Rng rng(6);
  store.init(rng);
  Snapshot snap = take_snapshot(store);
  Tensor orig = store.find("w")->value;
  store.find("w")->value.fill(42.0);
  store.find("w")->delta.fill(-1.0);
  restore_snapshot(store, snap);
  CHECK(store.find("w")->value == orig);
  for (int i = 0; i < 9; ++i) CHECK(store.find("w")->delta[i] == 0.0);
}
