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

#include <string>
#include <vector>

#include "mann/tape.hpp"

namespace mann {

enum class ModelKind { ntm, dnc };
ModelKind model_from_string(const std::string& token);
const char* to_string(ModelKind kind);

// Shift offsets are -3..+3; index o of the shift vector maps to offset o-3.
inline constexpr int kShiftSize = 7;
inline constexpr int kShiftHalf = (kShiftSize - 1) / 2;
// Fill value of the memory matrix at episode start.
inline constexpr double kMemoryInit = 1e-6;

// External memory plus all per-head addressing state carried across steps.
// The DNC-only fields (u, p, L) stay empty for the NTM.
struct MemoryState {
  Tensor M;                    // N x W
  std::vector<Tensor> w_read;  // R vectors of size N
  Tensor w_write;              // N
  Tensor r;                    // R*W concatenated read vectors
  Tensor u;                    // usage, N (dnc)
  Tensor p;                    // precedence, N (dnc)
  Tensor L;                    // temporal links, N x N (dnc)
};

// Constants at episode start: M filled with 1e-6, r = 0; NTM head weights
// one-hot at address 0 (interpolation needs a valid previous weight), DNC
// weights, usage, precedence and links all zero.
MemoryState initial_memory_state(ModelKind kind, int mem_rows, int mem_cols, int read_heads);

// M = M_prev .* (E - w e^T) + w v^T
Tensor memory_write(Tape& t, const Tensor& m_prev, const Tensor& w_write, const Tensor& erase,
                    const Tensor& add);
// r_i = M^T w
Tensor memory_read(Tape& t, const Tensor& m, const Tensor& w);

// One-layer projections from the control vector to the head parameters.
// Only the fields for the declared role are non-null.
struct HeadParams {
  Parameter *W_k = nullptr, *b_k = nullptr;          // key (all heads)
  Parameter *W_beta = nullptr, *b_beta = nullptr;    // strength (all heads)
  Parameter *W_g = nullptr, *b_g = nullptr;          // interpolation gate (ntm)
  Parameter *W_s = nullptr, *b_s = nullptr;          // shift distribution (ntm)
  Parameter *W_gamma = nullptr, *b_gamma = nullptr;  // sharpening (ntm)
  Parameter *W_e = nullptr, *b_e = nullptr;          // erase (write heads)
  Parameter *W_v = nullptr, *b_v = nullptr;          // add (write heads)
  Parameter *W_ga = nullptr, *b_ga = nullptr;        // allocation gate (dnc write)
  Parameter *W_gw = nullptr, *b_gw = nullptr;        // write gate (dnc write)
  Parameter *W_pi = nullptr, *b_pi = nullptr;        // read modes (dnc read)
  Parameter *W_f = nullptr, *b_f = nullptr;          // free gate (dnc read)
};

HeadParams declare_ntm_head(ParameterStore& store, const std::string& prefix, int mem_cols,
                            int hidden, bool write_head);
HeadParams declare_dnc_write_head(ParameterStore& store, const std::string& prefix, int mem_cols,
                                  int hidden);
HeadParams declare_dnc_read_head(ParameterStore& store, const std::string& prefix, int mem_cols,
                                 int hidden);

// Activated per-step head controls. Ranges after activation: beta, gamma in
// [1, inf) via 1+softplus; gates and erase in (0, 1) via the logistic
// sigmoid; s and pi on the simplex via softmax; k and v unsquashed.
struct NtmHeadIface {
  Tensor k, beta, g, s, gamma;
  Tensor e, v;  // write head only
};
struct DncWriteIface {
  Tensor k, beta, e, v, g_a, g_w;
};
struct DncReadIface {
  Tensor k, beta, pi, f;
};

NtmHeadIface parse_ntm_interface(Tape& t, const Tensor& h_control, const HeadParams& p,
                                 bool write_head);
DncWriteIface parse_dnc_write_interface(Tape& t, const Tensor& h_control, const HeadParams& p);
DncReadIface parse_dnc_read_interface(Tape& t, const Tensor& h_control, const HeadParams& p);

// 1 + softplus(x), the strength activation.
Tensor oneplus(Tape& t, const Tensor& x);

}  // namespace mann
