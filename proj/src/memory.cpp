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

#include "mann/memory.hpp"

#include <stdexcept>

namespace mann {

ModelKind model_from_string(const std::string& token) {
  if (token == "ntm") return ModelKind::ntm;
  if (token == "dnc") return ModelKind::dnc;
  throw std::invalid_argument("unknown model kind: " + token + " (expected ntm|dnc)");
}

const char* to_string(ModelKind kind) { return kind == ModelKind::ntm ? "ntm" : "dnc"; }

MemoryState initial_memory_state(ModelKind kind, int mem_rows, int mem_cols, int read_heads) {
  MemoryState s;
  s.M = Tensor::full(mem_rows, mem_cols, kMemoryInit);
  s.r = Tensor::zeros(read_heads * mem_cols, 1);
  if (kind == ModelKind::ntm) {
    s.w_write = Tensor::onehot(mem_rows, 0);
    s.w_read.assign(read_heads, Tensor::onehot(mem_rows, 0));
  } else {
    s.w_write = Tensor::zeros(mem_rows, 1);
    s.w_read.assign(read_heads, Tensor::zeros(mem_rows, 1));
    s.u = Tensor::zeros(mem_rows, 1);
    s.p = Tensor::zeros(mem_rows, 1);
    s.L = Tensor::zeros(mem_rows, mem_rows);
  }
  return s;
}

Tensor memory_write(Tape& t, const Tensor& m_prev, const Tensor& w_write, const Tensor& erase,
                    const Tensor& add) {
  Tensor keep = ops::sub(t, Tensor::ones(m_prev.rows(), m_prev.cols()),
                         ops::outer(t, w_write, erase));
  return ops::add(t, ops::hadamard(t, m_prev, keep), ops::outer(t, w_write, add));
}

Tensor memory_read(Tape& t, const Tensor& m, const Tensor& w) {
  return ops::matmul(t, m, w, /*ta=*/true, /*tb=*/false);
}

Tensor oneplus(Tape& t, const Tensor& x) {
  return ops::add(t, ops::softplus(t, x), Tensor::ones(x.rows(), x.cols()));
}

namespace {

void declare_common(ParameterStore& store, const std::string& prefix, int mem_cols, int hidden,
                    HeadParams& p) {
  p.W_k = &store.add(prefix + ".W_k", mem_cols, hidden);
  p.b_k = &store.add(prefix + ".b_k", mem_cols, 1);
  p.W_beta = &store.add(prefix + ".W_beta", 1, hidden);
  p.b_beta = &store.add(prefix + ".b_beta", 1, 1);
}

void declare_write_vectors(ParameterStore& store, const std::string& prefix, int mem_cols,
                           int hidden, HeadParams& p) {
  p.W_e = &store.add(prefix + ".W_e", mem_cols, hidden);
  p.b_e = &store.add(prefix + ".b_e", mem_cols, 1);
  p.W_v = &store.add(prefix + ".W_v", mem_cols, hidden);
  p.b_v = &store.add(prefix + ".b_v", mem_cols, 1);
}

}  // namespace

HeadParams declare_ntm_head(ParameterStore& store, const std::string& prefix, int mem_cols,
                            int hidden, bool write_head) {
  HeadParams p;
  declare_common(store, prefix, mem_cols, hidden, p);
  p.W_g = &store.add(prefix + ".W_g", 1, hidden);
  p.b_g = &store.add(prefix + ".b_g", 1, 1);
  p.W_s = &store.add(prefix + ".W_s", kShiftSize, hidden);
  p.b_s = &store.add(prefix + ".b_s", kShiftSize, 1);
  p.W_gamma = &store.add(prefix + ".W_gamma", 1, hidden);
  p.b_gamma = &store.add(prefix + ".b_gamma", 1, 1);
  if (write_head) declare_write_vectors(store, prefix, mem_cols, hidden, p);
  return p;
}

HeadParams declare_dnc_write_head(ParameterStore& store, const std::string& prefix, int mem_cols,
                                  int hidden) {
  HeadParams p;
  declare_common(store, prefix, mem_cols, hidden, p);
  declare_write_vectors(store, prefix, mem_cols, hidden, p);
  p.W_ga = &store.add(prefix + ".W_ga", 1, hidden);
  p.b_ga = &store.add(prefix + ".b_ga", 1, 1);
  p.W_gw = &store.add(prefix + ".W_gw", 1, hidden);
  p.b_gw = &store.add(prefix + ".b_gw", 1, 1);
  return p;
}

HeadParams declare_dnc_read_head(ParameterStore& store, const std::string& prefix, int mem_cols,
                                 int hidden) {
  HeadParams p;
  declare_common(store, prefix, mem_cols, hidden, p);
  p.W_pi = &store.add(prefix + ".W_pi", 3, hidden);
  p.b_pi = &store.add(prefix + ".b_pi", 3, 1);
  p.W_f = &store.add(prefix + ".W_f", 1, hidden);
  p.b_f = &store.add(prefix + ".b_f", 1, 1);
  return p;
}

namespace {

Tensor project(Tape& t, Parameter* w, Parameter* b, const Tensor& h) {
  return ops::affine(t, t.leaf(*w), h, t.leaf(*b));
}

}  // namespace

NtmHeadIface parse_ntm_interface(Tape& t, const Tensor& h_control, const HeadParams& p,
                                 bool write_head) {
  NtmHeadIface ifc;
  ifc.k = project(t, p.W_k, p.b_k, h_control);
  ifc.beta = oneplus(t, project(t, p.W_beta, p.b_beta, h_control));
  ifc.g = ops::sigmoid(t, project(t, p.W_g, p.b_g, h_control));
  ifc.s = ops::softmax(t, project(t, p.W_s, p.b_s, h_control));
  ifc.gamma = oneplus(t, project(t, p.W_gamma, p.b_gamma, h_control));
  if (write_head) {
    ifc.e = ops::sigmoid(t, project(t, p.W_e, p.b_e, h_control));
    ifc.v = project(t, p.W_v, p.b_v, h_control);
  }
  return ifc;
}

DncWriteIface parse_dnc_write_interface(Tape& t, const Tensor& h_control, const HeadParams& p) {
  DncWriteIface ifc;
  ifc.k = project(t, p.W_k, p.b_k, h_control);
  ifc.beta = oneplus(t, project(t, p.W_beta, p.b_beta, h_control));
  ifc.e = ops::sigmoid(t, project(t, p.W_e, p.b_e, h_control));
  ifc.v = project(t, p.W_v, p.b_v, h_control);
  ifc.g_a = ops::sigmoid(t, project(t, p.W_ga, p.b_ga, h_control));
  ifc.g_w = ops::sigmoid(t, project(t, p.W_gw, p.b_gw, h_control));
  return ifc;
}

DncReadIface parse_dnc_read_interface(Tape& t, const Tensor& h_control, const HeadParams& p) {
  DncReadIface ifc;
  ifc.k = project(t, p.W_k, p.b_k, h_control);
  ifc.beta = oneplus(t, project(t, p.W_beta, p.b_beta, h_control));
  ifc.pi = ops::softmax(t, project(t, p.W_pi, p.b_pi, h_control));
  ifc.f = ops::sigmoid(t, project(t, p.W_f, p.b_f, h_control));
  return ifc;
}

}  // namespace mann
