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

#include "mann/controllers.hpp"

#include <stdexcept>

namespace mann {

ControllerKind controller_from_string(const std::string& token) {
  if (token == "fnn") return ControllerKind::fnn;
  if (token == "en") return ControllerKind::en;
  if (token == "en-pnr") return ControllerKind::en_pnr;
  if (token == "lstm") return ControllerKind::lstm;
  if (token == "lstm-pnr") return ControllerKind::lstm_pnr;
  throw std::invalid_argument("unknown controller kind: " + token +
                              " (expected fnn|en|en-pnr|lstm|lstm-pnr)");
}

const char* to_string(ControllerKind kind) {
  switch (kind) {
    case ControllerKind::fnn: return "fnn";
    case ControllerKind::en: return "en";
    case ControllerKind::en_pnr: return "en-pnr";
    case ControllerKind::lstm: return "lstm";
    case ControllerKind::lstm_pnr: return "lstm-pnr";
  }
  return "?";
}

bool is_recurrent(ControllerKind kind) { return kind != ControllerKind::fnn; }

ControllerState initial_controller_state(int hidden) {
  return {Tensor::zeros(hidden, 1), Tensor::zeros(hidden, 1)};
}

ControllerParams declare_controller(ParameterStore& store, ControllerKind kind, int input_dim,
                                    int read_dim, int hidden) {
  ControllerParams p;
  p.kind = kind;
  p.input = input_dim;
  p.read = read_dim;
  p.hidden = hidden;
  const int I = input_dim, R = read_dim, H = hidden;

  switch (kind) {
    case ControllerKind::fnn:
      p.W_xh = &store.add("controller.W_xh", H, I);
      p.W_rh = &store.add("controller.W_rh", H, R);
      p.b = &store.add("controller.b", H, 1);
      break;
    case ControllerKind::en:
    case ControllerKind::en_pnr:
      p.W_xh = &store.add("controller.W_xh", H, I);
      p.W_rh = &store.add("controller.W_rh", H, R);
      p.W_hh = &store.add("controller.W_hh", H, H);
      p.b = &store.add("controller.b", H, 1);
      break;
    case ControllerKind::lstm:
    case ControllerKind::lstm_pnr:
      p.W_xz = &store.add("controller.W_xz", H, I);
      p.W_rz = &store.add("controller.W_rz", H, R);
      p.W_hz = &store.add("controller.W_hz", H, H);
      p.b_z = &store.add("controller.b_z", H, 1);
      p.W_xi = &store.add("controller.W_xi", H, I);
      p.W_ri = &store.add("controller.W_ri", H, R);
      p.W_hi = &store.add("controller.W_hi", H, H);
      p.b_i = &store.add("controller.b_i", H, 1);
      p.W_xf = &store.add("controller.W_xf", H, I);
      p.W_rf = &store.add("controller.W_rf", H, R);
      p.W_hf = &store.add("controller.W_hf", H, H);
      p.b_f = &store.add("controller.b_f", H, 1);
      p.W_xo = &store.add("controller.W_xo", H, I);
      p.W_ro = &store.add("controller.W_ro", H, R);
      p.W_ho = &store.add("controller.W_ho", H, H);
      p.b_o = &store.add("controller.b_o", H, 1);
      break;
  }
  return p;
}

namespace {

// W_x*x + W_r*r (+ W_h*h) + b
Tensor gate_preact(Tape& t, Parameter& wx, Parameter& wr, Parameter* wh, Parameter& bias,
                   const Tensor& x, const Tensor& r, const Tensor* h) {
  Tensor acc = ops::add(t, ops::matmul(t, t.leaf(wx), x), ops::matmul(t, t.leaf(wr), r));
  if (wh && h) acc = ops::add(t, acc, ops::matmul(t, t.leaf(*wh), *h));
  return ops::add(t, acc, t.leaf(bias));
}

}  // namespace

ControllerOutput controller_forward(Tape& t, const ControllerParams& p, const Tensor& x,
                                    const Tensor& r_prev, const ControllerState& state) {
  ControllerOutput out;
  switch (p.kind) {
    case ControllerKind::fnn: {
      Tensor h = ops::tanh(t, gate_preact(t, *p.W_xh, *p.W_rh, nullptr, *p.b, x, r_prev, nullptr));
      out.h_control = h;
      out.h_out = h;
      out.state = state;
      break;
    }
    case ControllerKind::en: {
      Tensor h =
          ops::tanh(t, gate_preact(t, *p.W_xh, *p.W_rh, p.W_hh, *p.b, x, r_prev, &state.h));
      out.h_control = h;
      out.h_out = h;
      out.state = {h, state.c};
      break;
    }
    case ControllerKind::en_pnr: {
      // hbar never sees the previous state; the recurrent term only enters
      // the control path.
      Tensor hbar = gate_preact(t, *p.W_xh, *p.W_rh, nullptr, *p.b, x, r_prev, nullptr);
      Tensor h_out = ops::tanh(t, hbar);
      Tensor h = ops::tanh(t, ops::add(t, ops::matmul(t, t.leaf(*p.W_hh), state.h), hbar));
      out.h_control = h;
      out.h_out = h_out;
      out.hbar = hbar;
      out.state = {h, state.c};
      break;
    }
    case ControllerKind::lstm: {
      Tensor z = ops::tanh(t, gate_preact(t, *p.W_xz, *p.W_rz, p.W_hz, *p.b_z, x, r_prev, &state.h));
      Tensor i =
          ops::sigmoid(t, gate_preact(t, *p.W_xi, *p.W_ri, p.W_hi, *p.b_i, x, r_prev, &state.h));
      Tensor f =
          ops::sigmoid(t, gate_preact(t, *p.W_xf, *p.W_rf, p.W_hf, *p.b_f, x, r_prev, &state.h));
      Tensor o =
          ops::sigmoid(t, gate_preact(t, *p.W_xo, *p.W_ro, p.W_ho, *p.b_o, x, r_prev, &state.h));
      Tensor c = ops::add(t, ops::hadamard(t, f, state.c), ops::hadamard(t, i, z));
      Tensor h = ops::hadamard(t, o, ops::tanh(t, c));
      out.h_control = h;
      out.h_out = h;
      out.state = {h, c};
      break;
    }
    case ControllerKind::lstm_pnr: {
      Tensor hbar = gate_preact(t, *p.W_xz, *p.W_rz, nullptr, *p.b_z, x, r_prev, nullptr);
      Tensor h_out = ops::tanh(t, hbar);
      Tensor z = ops::tanh(t, ops::add(t, ops::matmul(t, t.leaf(*p.W_hz), state.h), hbar));
      Tensor i =
          ops::sigmoid(t, gate_preact(t, *p.W_xi, *p.W_ri, p.W_hi, *p.b_i, x, r_prev, &state.h));
      Tensor f =
          ops::sigmoid(t, gate_preact(t, *p.W_xf, *p.W_rf, p.W_hf, *p.b_f, x, r_prev, &state.h));
      Tensor o =
          ops::sigmoid(t, gate_preact(t, *p.W_xo, *p.W_ro, p.W_ho, *p.b_o, x, r_prev, &state.h));
      Tensor c = ops::add(t, ops::hadamard(t, f, state.c), ops::hadamard(t, i, z));
      Tensor h = ops::hadamard(t, o, ops::tanh(t, c));
      out.h_control = h;
      out.h_out = h_out;
      out.hbar = hbar;
      out.state = {h, c};
      break;
    }
  }
  return out;
}

OutputParams declare_output(ParameterStore& store, int hidden, int read_dim, int output_dim) {
  OutputParams p;
  p.W_y = &store.add("output.W_y", output_dim, hidden + read_dim);
  p.b_y = &store.add("output.b_y", output_dim, 1);
  return p;
}

Tensor compose_model_output(Tape& t, const OutputParams& p, const Tensor& h_out,
                            const Tensor& r_t) {
  Tensor cat = ops::concat_rows(t, {h_out, r_t});
  return ops::affine(t, t.leaf(*p.W_y), cat, t.leaf(*p.b_y));
}

}  // namespace mann
