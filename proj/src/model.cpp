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

#include "mann/model.hpp"

#include <stdexcept>

namespace mann {

namespace {

Tensor detached(const Tensor& t) {
  Tensor v = t;
  v.node = -1;
  v.tape_id = 0;
  return v;
}

}  // namespace

Model::Model(const ModelSpec& spec) : spec_(spec) {
  if (spec.input <= 0 || spec.output <= 0 || spec.hidden <= 0 || spec.mem_rows <= 0 ||
      spec.mem_cols <= 0 || spec.read_heads <= 0)
    throw std::invalid_argument("ModelSpec: all dimensions must be positive");

  const int read_dim = spec.read_heads * spec.mem_cols;
  ctrl_ = declare_controller(store_, spec.controller, spec.input, read_dim, spec.hidden);
  out_ = declare_output(store_, spec.hidden, read_dim, spec.output);
  if (spec.model == ModelKind::ntm) {
    write_head_ = declare_ntm_head(store_, "heads.write", spec.mem_cols, spec.hidden, true);
    for (int i = 0; i < spec.read_heads; ++i)
      read_heads_.push_back(declare_ntm_head(store_, "heads.read" + std::to_string(i),
                                             spec.mem_cols, spec.hidden, false));
  } else {
    write_head_ = declare_dnc_write_head(store_, "heads.write", spec.mem_cols, spec.hidden);
    for (int i = 0; i < spec.read_heads; ++i)
      read_heads_.push_back(declare_dnc_read_head(store_, "heads.read" + std::to_string(i),
                                                  spec.mem_cols, spec.hidden));
  }
}

void Model::init_params(std::uint64_t seed) {
  Rng rng(derive_seed(seed, /*tag=*/0xC0));
  store_.init(rng);
}

Model::Episode Model::begin_episode() const {
  Episode ep;
  ep.cstate = initial_controller_state(spec_.hidden);
  ep.mem = initial_memory_state(spec_.model, spec_.mem_rows, spec_.mem_cols, spec_.read_heads);
  return ep;
}

Tensor Model::step(Tape& t, Episode& ep, const Tensor& x) {
  if (x.rows() != spec_.input || x.cols() != 1)
    throw std::invalid_argument("step: input must be " + std::to_string(spec_.input) +
                                "x1, got " + x.shape_str());

  ControllerOutput co = controller_forward(t, ctrl_, x, ep.mem.r, ep.cstate);

  // Write against M_{t-1}, read against M_t.
  Tensor m_new;
  if (spec_.model == ModelKind::ntm) {
    NtmHeadIface wifc = parse_ntm_interface(t, co.h_control, write_head_, true);
    Tensor w_w = ntm_address(t, ep.mem.M, wifc, ep.mem.w_write);
    m_new = memory_write(t, ep.mem.M, w_w, wifc.e, wifc.v);
    ep.mem.w_write = w_w;

    std::vector<Tensor> reads;
    for (int i = 0; i < spec_.read_heads; ++i) {
      NtmHeadIface rifc = parse_ntm_interface(t, co.h_control, read_heads_[i], false);
      Tensor w_r = ntm_address(t, m_new, rifc, ep.mem.w_read[i]);
      reads.push_back(memory_read(t, m_new, w_r));
      ep.mem.w_read[i] = w_r;
    }
    ep.mem.r = spec_.read_heads == 1 ? reads[0] : ops::concat_rows(t, reads);
  } else {
    DncWriteIface wifc = parse_dnc_write_interface(t, co.h_control, write_head_);
    std::vector<DncReadIface> rifcs;
    std::vector<Tensor> free_gates;
    for (int i = 0; i < spec_.read_heads; ++i) {
      rifcs.push_back(parse_dnc_read_interface(t, co.h_control, read_heads_[i]));
      free_gates.push_back(rifcs.back().f);
    }

    Tensor psi = dnc_retention(t, free_gates, ep.mem.w_read);
    Tensor usage = dnc_usage(t, ep.mem.u, ep.mem.w_write, psi);
    Tensor alloc = dnc_allocation(t, usage);
    Tensor c_w = ntm_content_address(t, ep.mem.M, wifc.k, wifc.beta);
    Tensor w_w = dnc_write_weighting(t, wifc.g_w, wifc.g_a, alloc, c_w);
    m_new = memory_write(t, ep.mem.M, w_w, wifc.e, wifc.v);

    Tensor p_prev = ep.mem.p;
    Tensor link = dnc_link_update(t, ep.mem.L, w_w, p_prev);
    Tensor prec = dnc_precedence(t, p_prev, w_w);

    std::vector<Tensor> reads;
    std::vector<Tensor> new_read_w;
    for (int i = 0; i < spec_.read_heads; ++i) {
      auto [fwd, bwd] = dnc_forward_backward(t, link, ep.mem.w_read[i]);
      Tensor c_r = ntm_content_address(t, m_new, rifcs[i].k, rifcs[i].beta);
      Tensor w_r = dnc_read_weighting(t, rifcs[i].pi, bwd, c_r, fwd);
      reads.push_back(memory_read(t, m_new, w_r));
      new_read_w.push_back(w_r);
    }
    ep.mem.u = usage;
    ep.mem.p = prec;
    ep.mem.L = link;
    ep.mem.w_write = w_w;
    ep.mem.w_read = new_read_w;
    ep.mem.r = spec_.read_heads == 1 ? reads[0] : ops::concat_rows(t, reads);
  }
  ep.mem.M = m_new;
  ep.cstate = co.state;

  ep.last_read_weights.clear();
  for (const Tensor& w : ep.mem.w_read) ep.last_read_weights.push_back(detached(w));
  ep.last_write_weight = detached(ep.mem.w_write);

  return compose_model_output(t, out_, co.h_out, ep.mem.r);
}

}  // namespace mann
