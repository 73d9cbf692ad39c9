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

#include <cstdint>
#include <vector>

#include "mann/controllers.hpp"
#include "mann/dnc.hpp"
#include "mann/memory.hpp"
#include "mann/ntm.hpp"

namespace mann {

struct ModelSpec {
  ModelKind model = ModelKind::ntm;
  ControllerKind controller = ControllerKind::lstm;
  int input = 9;
  int output = 8;
  int hidden = 128;
  int mem_rows = 128;  // N
  int mem_cols = 20;   // W
  int read_heads = 1;  // R
};

// A complete NTM- or DNC-style machine: controller, one write head, R read
// heads, output projection. Parameters live in a single store; one Model
// instance runs one episode at a time on one tape.
class Model {
 public:
  explicit Model(const ModelSpec& spec);

  void init_params(std::uint64_t seed);
  ParameterStore& params() { return store_; }
  const ParameterStore& params() const { return store_; }
  const ModelSpec& spec() const { return spec_; }

  struct Episode {
    ControllerState cstate;
    MemoryState mem;
    // Value-only captures from the most recent step (traces, invariants).
    std::vector<Tensor> last_read_weights;
    Tensor last_write_weight;
  };

  Episode begin_episode() const;

  // One time step:
  //  (1) controller consumes (x_t, r_{t-1}, state);
  //  (2) the write head addresses M_{t-1} and writes, giving M_t;
  //  (3) read heads address M_t and read, giving r_t;
  //  (4) logits from [h_out ; r_t].
  Tensor step(Tape& t, Episode& ep, const Tensor& x);

 private:
  Tensor step_ntm_write(Tape& t, Episode& ep, const Tensor& h_control);
  Tensor step_dnc_write(Tape& t, Episode& ep, const Tensor& h_control, Tensor& new_u);

  ModelSpec spec_;
  ParameterStore store_;
  ControllerParams ctrl_;
  OutputParams out_;
  HeadParams write_head_;
  std::vector<HeadParams> read_heads_;
};

}  // namespace mann
