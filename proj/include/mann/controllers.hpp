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

#include "mann/tape.hpp"

namespace mann {

// The five controller variants. The -pnr ("partially non-recurrent")
// variants emit an output vector h_out whose computation never touches the
// previous hidden/cell state, while the control vector h stays recurrent.
enum class ControllerKind { fnn, en, en_pnr, lstm, lstm_pnr };

ControllerKind controller_from_string(const std::string& token);
const char* to_string(ControllerKind kind);
bool is_recurrent(ControllerKind kind);

// Hidden state carried across steps; c is only used by the LSTM variants.
// Both start at zero at the beginning of an episode.
struct ControllerState {
  Tensor h;
  Tensor c;
};

ControllerState initial_controller_state(int hidden);

struct ControllerOutput {
  Tensor h_control;  // sent to the read and write heads
  Tensor h_out;      // concatenated with r_t for the model output
  Tensor hbar;       // pre-activation of the output path (pnr variants only)
  ControllerState state;
};

// Weight handles into a ParameterStore; only the fields used by the kind
// are non-null. The pnr variants reuse the exact same set as their
// recurrent baselines, which is what makes the parameter counts match.
struct ControllerParams {
  ControllerKind kind;
  int input = 0, read = 0, hidden = 0;

  // fnn / en / en-pnr
  Parameter* W_xh = nullptr;
  Parameter* W_rh = nullptr;
  Parameter* W_hh = nullptr;
  Parameter* b = nullptr;

  // lstm / lstm-pnr, gates z, i, f, o
  Parameter* W_xz = nullptr;
  Parameter* W_rz = nullptr;
  Parameter* W_hz = nullptr;
  Parameter* b_z = nullptr;
  Parameter* W_xi = nullptr;
  Parameter* W_ri = nullptr;
  Parameter* W_hi = nullptr;
  Parameter* b_i = nullptr;
  Parameter* W_xf = nullptr;
  Parameter* W_rf = nullptr;
  Parameter* W_hf = nullptr;
  Parameter* b_f = nullptr;
  Parameter* W_xo = nullptr;
  Parameter* W_ro = nullptr;
  Parameter* W_ho = nullptr;
  Parameter* b_o = nullptr;
};

// Declares the controller's parameters under "controller." in the store.
ControllerParams declare_controller(ParameterStore& store, ControllerKind kind, int input_dim,
                                    int read_dim, int hidden);

// One step. x is I x 1, r_prev is (R*W) x 1, state carries h (and c) of
// size H. For baseline controllers h_out == h_control.
ControllerOutput controller_forward(Tape& t, const ControllerParams& p, const Tensor& x,
                                    const Tensor& r_prev, const ControllerState& state);

// Model output head: logits = W_y * [h_out ; r_t] + b_y.
struct OutputParams {
  Parameter* W_y = nullptr;
  Parameter* b_y = nullptr;
};
OutputParams declare_output(ParameterStore& store, int hidden, int read_dim, int output_dim);
Tensor compose_model_output(Tape& t, const OutputParams& p, const Tensor& h_out,
                            const Tensor& r_t);

}  // namespace mann
