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

#include "mann/dnc.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mann {

Tensor dnc_retention(Tape& t, const std::vector<Tensor>& free_gates,
                     const std::vector<Tensor>& w_read_prev) {
  if (free_gates.size() != w_read_prev.size() || free_gates.empty())
    throw std::invalid_argument("dnc_retention: one free gate per read head required");
  const int n = w_read_prev[0].rows();
  Tensor psi = Tensor::ones(n, 1);
  for (size_t i = 0; i < free_gates.size(); ++i) {
    Tensor freed = ops::scalar_mul(t, free_gates[i], w_read_prev[i]);
    Tensor term = ops::sub(t, Tensor::ones(n, 1), freed);
    psi = (i == 0) ? term : ops::hadamard(t, psi, term);
  }
  return psi;
}

Tensor dnc_usage(Tape& t, const Tensor& u_prev, const Tensor& w_write_prev, const Tensor& psi) {
  Tensor occupied = ops::sub(t, ops::add(t, u_prev, w_write_prev),
                             ops::hadamard(t, u_prev, w_write_prev));
  return ops::hadamard(t, occupied, psi);
}

std::vector<int> ascending_argsort(const Tensor& u) {
  std::vector<int> order(u.rows());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return u[a] < u[b]; });
  return order;
}

Tensor dnc_allocation(Tape& t, const Tensor& u) {
  const std::vector<int> phi = ascending_argsort(u);
  std::vector<int> inverse(phi.size());
  for (size_t j = 0; j < phi.size(); ++j) inverse[phi[j]] = static_cast<int>(j);

  Tensor u_sorted = ops::permute_rows(t, u, phi);
  Tensor prods = ops::cumprod_exclusive(t, u_sorted);
  Tensor a_sorted =
      ops::hadamard(t, ops::sub(t, Tensor::ones(u.rows(), 1), u_sorted), prods);
  return ops::permute_rows(t, a_sorted, inverse);
}

Tensor dnc_write_weighting(Tape& t, const Tensor& g_w, const Tensor& g_a, const Tensor& a,
                           const Tensor& c_w) {
  Tensor one_minus_ga = ops::sub(t, Tensor::ones(1, 1), g_a);
  Tensor mix = ops::add(t, ops::scalar_mul(t, g_a, a), ops::scalar_mul(t, one_minus_ga, c_w));
  return ops::scalar_mul(t, g_w, mix);
}

Tensor dnc_precedence(Tape& t, const Tensor& p_prev, const Tensor& w_w) {
  Tensor reset = ops::sub(t, Tensor::ones(1, 1), ops::sum(t, w_w));
  return ops::add(t, ops::scalar_mul(t, reset, p_prev), w_w);
}

Tensor dnc_link_update(Tape& t, const Tensor& l_prev, const Tensor& w_w, const Tensor& p_prev) {
  const int n = w_w.rows();
  Tensor ones_col = Tensor::ones(n, 1);
  Tensor w_rows = ops::outer(t, w_w, ones_col);  // [i,j] = w[i]
  Tensor w_cols = ops::outer(t, ones_col, w_w);  // [i,j] = w[j]
  Tensor keep = ops::sub(t, ops::sub(t, Tensor::ones(n, n), w_rows), w_cols);
  Tensor link = ops::add(t, ops::hadamard(t, keep, l_prev), ops::outer(t, w_w, p_prev));
  Tensor off_diag = Tensor::ones(n, n);
  for (int i = 0; i < n; ++i) off_diag.at(i, i) = 0.0;
  return ops::hadamard(t, link, off_diag);
}

std::pair<Tensor, Tensor> dnc_forward_backward(Tape& t, const Tensor& link,
                                               const Tensor& w_read_prev) {
  Tensor fwd = ops::matmul(t, link, w_read_prev);
  Tensor bwd = ops::matmul(t, link, w_read_prev, /*ta=*/true, /*tb=*/false);
  return {fwd, bwd};
}

Tensor dnc_read_weighting(Tape& t, const Tensor& pi, const Tensor& backward, const Tensor& content,
                          const Tensor& forward) {
  Tensor pi_b = ops::slice_rows(t, pi, 0, 1);
  Tensor pi_c = ops::slice_rows(t, pi, 1, 1);
  Tensor pi_f = ops::slice_rows(t, pi, 2, 1);
  Tensor mix = ops::add(t, ops::scalar_mul(t, pi_b, backward), ops::scalar_mul(t, pi_c, content));
  return ops::add(t, mix, ops::scalar_mul(t, pi_f, forward));
}

}  // namespace mann
