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

#pragma once

#include <utility>
#include <vector>

#include "mann/memory.hpp"
#include "mann/tape.hpp"

namespace mann {

// DNC dynamic memory management: retention, usage, allocation, gated write
// weighting, precedence, temporal link matrix and the three-mode read
// mixture. All pieces are differentiable except the usage argsort, which is
// treated as a fixed permutation of the current step.

// psi = prod_i (1 - f_i * w_read_prev_i), entry-wise over addresses.
Tensor dnc_retention(Tape& t, const std::vector<Tensor>& free_gates,
                     const std::vector<Tensor>& w_read_prev);

// u = (u_prev + w_write_prev - u_prev.*w_write_prev) .* psi
Tensor dnc_usage(Tape& t, const Tensor& u_prev, const Tensor& w_write_prev, const Tensor& psi);

// Stable ascending argsort by value, ties broken by lower index.
std::vector<int> ascending_argsort(const Tensor& u);

// a[phi[j]] = (1 - u[phi[j]]) * prod_{i<j} u[phi[i]]
Tensor dnc_allocation(Tape& t, const Tensor& u);

// w = g_w * (g_a * a + (1-g_a) * c_w)
Tensor dnc_write_weighting(Tape& t, const Tensor& g_w, const Tensor& g_a, const Tensor& a,
                           const Tensor& c_w);

// p = (1 - sum(w_w)) * p_prev + w_w
Tensor dnc_precedence(Tape& t, const Tensor& p_prev, const Tensor& w_w);

// L[i,j] = (1 - w[i] - w[j]) L_prev[i,j] + w[i] p_prev[j], zero diagonal.
Tensor dnc_link_update(Tape& t, const Tensor& l_prev, const Tensor& w_w, const Tensor& p_prev);

// f = L w_prev (next-written), b = L^T w_prev (previously-written).
std::pair<Tensor, Tensor> dnc_forward_backward(Tape& t, const Tensor& link,
                                               const Tensor& w_read_prev);

// w = pi[0]*b + pi[1]*c + pi[2]*f  (backward, content, forward)
Tensor dnc_read_weighting(Tape& t, const Tensor& pi, const Tensor& backward, const Tensor& content,
                          const Tensor& forward);

}  // namespace mann
