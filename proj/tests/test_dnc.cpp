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
#include <vector>

#include "helpers/dnc_oracles.hpp"
#include "helpers/gradcheck.hpp"
#include "mann/dnc.hpp"
#include "mann/ntm.hpp"

using namespace mann;
using mann::testing::allocation_oracle;
using mann::testing::link_update_oracle;
using mann::testing::random_tensor;

namespace {

Tensor scalar(double v) { return Tensor::full(1, 1, v); }

std::vector<double> as_vec(const Tensor& t) {
  return std::vector<double>(t.data(), t.data() + t.size());
}

}  // namespace

TEST_CASE("retention vector") {
  Tape t;
  SUBCASE("no free gates means nothing is freed") {
    Tensor psi = dnc_retention(t, {scalar(0.0), scalar(0.0)},
                               {Tensor::onehot(4, 1), Tensor::onehot(4, 2)});
    for (int i = 0; i < 4; ++i) CHECK(psi[i] == 1.0);
  }
  SUBCASE("one fully-open gate frees exactly the read address") {
    Tensor psi = dnc_retention(t, {scalar(1.0)}, {Tensor::onehot(4, 2)});
    CHECK(psi[2] == 0.0);
    CHECK(psi[0] == 1.0);
    CHECK(psi[1] == 1.0);
    CHECK(psi[3] == 1.0);
  }
  SUBCASE("two half-open gates over uniform reads") {
    Tensor w = Tensor::column({0.5, 0.5});
    Tensor psi = dnc_retention(t, {scalar(0.5), scalar(0.5)}, {w, w});
    CHECK(psi[0] == doctest::Approx(0.5625).epsilon(1e-12));
    CHECK(psi[1] == doctest::Approx(0.5625).epsilon(1e-12));
  }
}

TEST_CASE("usage update") {
  Tape t;
  SUBCASE("nothing used, nothing written") {
    Tensor u = dnc_usage(t, Tensor::zeros(3, 1), Tensor::zeros(3, 1), Tensor::ones(3, 1));
    for (int i = 0; i < 3; ++i) CHECK(u[i] == 0.0);
  }
  SUBCASE("full usage is absorbing while retained") {
    Tensor w = Tensor::column({0.7, 0.2, 0.0});
    Tensor u = dnc_usage(t, Tensor::ones(3, 1), w, Tensor::ones(3, 1));
    for (int i = 0; i < 3; ++i) CHECK(u[i] == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("worked scalar example") {
    Tensor u = dnc_usage(t, Tensor::column({0.5}), Tensor::column({0.5}), Tensor::column({1.0}));
    CHECK(u[0] == doctest::Approx(0.75).epsilon(1e-15));
  }
}

TEST_CASE("allocation weighting") {
  Tape t;
  SUBCASE("fully used memory allocates nothing") {
    Tensor a = dnc_allocation(t, Tensor::ones(4, 1));
    for (int i = 0; i < 4; ++i) CHECK(a[i] == 0.0);
  }
  SUBCASE("a single free slot takes everything") {
    Tensor a = dnc_allocation(t, Tensor::column({0.0, 1.0, 1.0}));
    CHECK(a[0] == 1.0);
    CHECK(a[1] == 0.0);
    CHECK(a[2] == 0.0);
  }
  SUBCASE("worked example") {
    Tensor a = dnc_allocation(t, Tensor::column({0.5, 0.25, 1.0}));
    CHECK(a[0] == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(a[1] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(a[2] == doctest::Approx(0.0));
  }
  SUBCASE("matches the brute-force oracle across sizes") {
    Rng rng(31);
    for (int n = 2; n <= 6; ++n) {
      for (int trial = 0; trial < 2000; ++trial) {
        Tensor u(n, 1);
        for (int i = 0; i < n; ++i) u[i] = rng.uniform();
        if (trial % 7 == 0) u[rng.index(n)] = u[rng.index(n)];  // provoke ties
        Tape local;
        Tensor a = dnc_allocation(local, u);
        auto want = allocation_oracle(as_vec(u));
        for (int i = 0; i < n; ++i) REQUIRE(std::fabs(a[i] - want[i]) <= 1e-12);
      }
    }
  }
  SUBCASE("sums stay at most one") {
    Rng rng(32);
    for (int trial = 0; trial < 200; ++trial) {
      Tensor u(8, 1);
      for (int i = 0; i < 8; ++i) u[i] = rng.uniform();
      Tape local;
      Tensor a = dnc_allocation(local, u);
      double total = 0;
      for (int i = 0; i < 8; ++i) {
        CHECK(a[i] >= 0.0);
        CHECK(a[i] <= 1.0);
        total += a[i];
      }
      CHECK(total <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("write weighting") {
  Tape t;
  Tensor a = Tensor::column({1.0, 0.0});
  Tensor c = Tensor::column({0.0, 1.0});
  SUBCASE("closed write gate writes nowhere") {
    Tensor w = dnc_write_weighting(t, scalar(0.0), scalar(0.7), a, c);
    CHECK(w[0] == 0.0);
    CHECK(w[1] == 0.0);
  }
  SUBCASE("pure allocation") {
    Tensor w = dnc_write_weighting(t, scalar(1.0), scalar(1.0), a, c);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 0.0);
  }
  SUBCASE("even blend") {
    Tensor w = dnc_write_weighting(t, scalar(0.5), scalar(0.5), a, c);
    CHECK(w[0] == doctest::Approx(0.25));
    CHECK(w[1] == doctest::Approx(0.25));
  }
}

TEST_CASE("precedence update") {
  Tape t;
  SUBCASE("no write keeps the history") {
    Tensor p = dnc_precedence(t, Tensor::column({0.3, 0.2}), Tensor::zeros(2, 1));
    CHECK(p[0] == doctest::Approx(0.3));
    CHECK(p[1] == doctest::Approx(0.2));
  }
  SUBCASE("a full write erases the history") {
    Tensor p = dnc_precedence(t, Tensor::column({0.3, 0.2}), Tensor::column({0.0, 1.0}));
    CHECK(p[0] == doctest::Approx(0.0));
    CHECK(p[1] == doctest::Approx(1.0));
  }
  SUBCASE("worked example") {
    Tensor p = dnc_precedence(t, Tensor::column({1.0, 0.0}), Tensor::column({0.0, 0.5}));
    CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("link matrix update") {
  Tape t;
  SUBCASE("no write keeps the links") {
    Rng rng(41);
    Tensor L(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) L.at(i, j) = i == j ? 0.0 : rng.uniform();
    Tensor out = dnc_link_update(t, L, Tensor::zeros(4, 1), Tensor::zeros(4, 1));
    for (int i = 0; i < 16; ++i) CHECK(out[i] == doctest::Approx(L[i]).epsilon(1e-15));
  }
  SUBCASE("two one-hot writes create a single link") {
    const int i = 1, j = 3;
    Tensor L0 = Tensor::zeros(4, 4);
    Tensor p0 = Tensor::zeros(4, 1);
    Tensor L1 = dnc_link_update(t, L0, Tensor::onehot(4, i), p0);
    Tensor p1 = dnc_precedence(t, p0, Tensor::onehot(4, i));
    Tensor L2 = dnc_link_update(t, L1, Tensor::onehot(4, j), p1);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        CHECK(L2.at(a, b) == doctest::Approx(a == j && b == i ? 1.0 : 0.0));
  }
  SUBCASE("random triples match the two-nested-loop oracle") {
    Rng rng(42);
    for (int trial = 0; trial < 300; ++trial) {
      const int n = rng.range(2, 8);
      Tensor L(n, n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) L.at(a, b) = a == b ? 0.0 : rng.uniform();
      // sub-stochastic w and p
      Tensor w(n, 1), p(n, 1);
      double ws = 0, ps = 0;
      for (int a = 0; a < n; ++a) {
        w[a] = rng.uniform();
        ws += w[a];
        p[a] = rng.uniform();
        ps += p[a];
      }
      for (int a = 0; a < n; ++a) {
        w[a] /= std::max(1.0, ws);
        p[a] /= std::max(1.0, ps);
      }
      Tape local;
      Tensor got = dnc_link_update(local, L, w, p);
      Tensor want = link_update_oracle(L, as_vec(w), as_vec(p));
      for (int idx = 0; idx < n * n; ++idx)
        REQUIRE(got[idx] == doctest::Approx(want[idx]).epsilon(1e-12));
      for (int a = 0; a < n; ++a) CHECK(got.at(a, a) == 0.0);
    }
  }
}

TEST_CASE("forward and backward weights") {
  Tape t;
  SUBCASE("zero links read nothing") {
    auto [f, b] = dnc_forward_backward(t, Tensor::zeros(3, 3), Tensor::onehot(3, 1));
    for (int i = 0; i < 3; ++i) {
      CHECK(f[i] == 0.0);
      CHECK(b[i] == 0.0);
    }
  }
  SUBCASE("a single link L[j,i]=1 maps one-hots across it") {
    const int i = 0, j = 2;
    Tensor L = Tensor::zeros(3, 3);
    L.at(j, i) = 1.0;
    auto [f1, b1] = dnc_forward_backward(t, L, Tensor::onehot(3, i));
    CHECK(f1[j] == 1.0);
    CHECK(f1[i] == 0.0);
    for (int a = 0; a < 3; ++a) CHECK(b1[a] == 0.0);

    auto [f2, b2] = dnc_forward_backward(t, L, Tensor::onehot(3, j));
    CHECK(b2[i] == 1.0);
    for (int a = 0; a < 3; ++a) CHECK(f2[a] == 0.0);
  }
}

TEST_CASE("read weighting mixes the three modes") {
  Tape t;
  Rng rng(51);
  Tensor b = random_tensor(rng, 4, 1, 0.0, 0.25);
  Tensor c = random_tensor(rng, 4, 1, 0.0, 0.25);
  Tensor f = random_tensor(rng, 4, 1, 0.0, 0.25);

  Tensor pure_c = dnc_read_weighting(t, Tensor::column({0, 1, 0}), b, c, f);
  for (int i = 0; i < 4; ++i) CHECK(pure_c[i] == doctest::Approx(c[i]).epsilon(1e-15));

  Tensor pure_b = dnc_read_weighting(t, Tensor::column({1, 0, 0}), b, c, f);
  for (int i = 0; i < 4; ++i) CHECK(pure_b[i] == doctest::Approx(b[i]).epsilon(1e-15));

  Tensor common = dnc_read_weighting(t, Tensor::column({1.0 / 3, 1.0 / 3, 1.0 / 3}), c, c, c);
  for (int i = 0; i < 4; ++i) CHECK(common[i] == doctest::Approx(c[i]).epsilon(1e-12));
}

TEST_CASE("state invariants hold over random rollouts") {
  Rng rng(61);
  const int N = 8, R = 2;
  Tensor u = Tensor::zeros(N, 1), p = Tensor::zeros(N, 1), L = Tensor::zeros(N, N);
  Tensor w_w = Tensor::zeros(N, 1);
  std::vector<Tensor> w_r(R, Tensor::zeros(N, 1));
  Tensor M = random_tensor(rng, N, 4, -1.0, 1.0);

  for (int step = 0; step < 300; ++step) {
    Tape t;
    std::vector<Tensor> gates;
    for (int i = 0; i < R; ++i)
      gates.push_back(ops::sigmoid(t, random_tensor(rng, 1, 1, -3.0, 3.0)));
    Tensor psi = dnc_retention(t, gates, w_r);
    Tensor u_new = dnc_usage(t, u, w_w, psi);
    Tensor a = dnc_allocation(t, u_new);
    Tensor c_w = ntm_content_address(t, M, random_tensor(rng, 4, 1, -2.0, 2.0),
                                     oneplus(t, random_tensor(rng, 1, 1, -3.0, 3.0)));
    Tensor w_new = dnc_write_weighting(t, ops::sigmoid(t, random_tensor(rng, 1, 1, -3.0, 3.0)),
                                       ops::sigmoid(t, random_tensor(rng, 1, 1, -3.0, 3.0)), a,
                                       c_w);
    Tensor L_new = dnc_link_update(t, L, w_new, p);
    Tensor p_new = dnc_precedence(t, p, w_new);

    std::vector<Tensor> w_r_new;
    for (int i = 0; i < R; ++i) {
      auto [fwd, bwd] = dnc_forward_backward(t, L_new, w_r[i]);
      Tensor c_r = ntm_content_address(t, M, random_tensor(rng, 4, 1, -2.0, 2.0),
                                       oneplus(t, random_tensor(rng, 1, 1, -3.0, 3.0)));
      Tensor pi = ops::softmax(t, random_tensor(rng, 3, 1, -3.0, 3.0));
      w_r_new.push_back(dnc_read_weighting(t, pi, bwd, c_r, fwd));
    }

    // invariants
    double usum = 0, wsum = 0, psum = 0;
    for (int i = 0; i < N; ++i) {
      CHECK(u_new[i] >= 0.0);
      CHECK(u_new[i] <= 1.0);
      usum += u_new[i];
      CHECK(w_new[i] >= 0.0);
      wsum += w_new[i];
      psum += p_new[i];
    }
    CHECK(wsum <= 1.0 + 1e-9);
    CHECK(psum <= 1.0 + 1e-9);
    for (int i = 0; i < N; ++i) {
      CHECK(L_new.at(i, i) == 0.0);
      double row = 0, col = 0;
      for (int j = 0; j < N; ++j) {
        CHECK(L_new.at(i, j) >= 0.0);
        CHECK(L_new.at(i, j) <= 1.0);
        row += L_new.at(i, j);
        col += L_new.at(j, i);
      }
      CHECK(row <= 1.0 + 1e-6);
      CHECK(col <= 1.0 + 1e-6);
    }
    for (int i = 0; i < R; ++i) {
      double rsum = 0;
      for (int j = 0; j < N; ++j) {
        CHECK(w_r_new[i][j] >= 0.0);
        rsum += w_r_new[i][j];
      }
      CHECK(rsum <= 1.0 + 1e-9);
    }

    auto strip = [](Tensor v) {
      v.node = -1;
      v.tape_id = 0;
      return v;
    };
    u = strip(u_new);
    p = strip(p_new);
    L = strip(L_new);
    w_w = strip(w_new);
    for (int i = 0; i < R; ++i) w_r[i] = strip(w_r_new[i]);
  }
}

TEST_CASE("allocation is differentiable with the sort held fixed") {
  Rng rng(71);
  ParameterStore store;
  auto& U = store.add("u", 6, 1);
  // well-separated usages keep the permutation stable under the probe step
  for (int i = 0; i < 6; ++i) U.value[i] = 0.1 + 0.13 * i;
  Tensor probe = random_tensor(rng, 6, 1);

  auto build = [&](Tape& t) {
    Tensor a = dnc_allocation(t, ops::sigmoid(t, t.leaf(U)));
    return ops::sum(t, ops::hadamard(t, a, probe));
  };
  store.zero_grads();
  {
    Tape t;
    t.backward(build(t));
  }
  auto res = mann::testing::check_gradients(store, [&] {
    Tape t;
    return build(t)[0];
  });
  CHECK_MESSAGE(res.ok(), res.worst_at);
}
