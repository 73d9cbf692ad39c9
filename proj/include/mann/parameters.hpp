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

#include <deque>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mann/rng.hpp"
#include "mann/tensor.hpp"

namespace mann {

// A trainable tensor plus its gradient accumulator and the RMSProp slots
// (running mean of squared gradients, running mean of gradients, and the
// momentum buffer), all of the same shape.
struct Parameter {
  Parameter(std::string name_, int rows, int cols)
      : name(std::move(name_)),
        value(rows, cols),
        grad(rows, cols),
        rms_n(rows, cols),
        rms_m(rows, cols),
        delta(rows, cols) {}

  int size() const { return value.size(); }

  std::string name;
  Tensor value;
  Tensor grad;
  Tensor rms_n;   // running mean of g^2
  Tensor rms_m;   // running mean of g
  Tensor delta;   // momentum buffer
};

// Named parameters in a stable insertion order (addresses stay valid; a
// deque never relocates elements).
class ParameterStore {
 public:
  Parameter& add(const std::string& name, int rows, int cols);
  Parameter* find(const std::string& name);
  const Parameter* find(const std::string& name) const;

  std::deque<Parameter>& all() { return params_; }
  const std::deque<Parameter>& all() const { return params_; }
  bool empty() const { return params_.empty(); }

  // Sum of rows*cols over parameters whose name starts with prefix.
  long param_count(std::string_view prefix = "") const;

  // Weights ~ uniform(-s, s) with s = sqrt(6/(fan_in+fan_out)); column
  // vectors are biases and start at zero. Visits parameters in insertion
  // order so a given seed always produces the same values.
  void init(Rng& rng);

  void zero_grads();

 private:
  std::deque<Parameter> params_;
  std::unordered_map<std::string, int> index_;
};

// Versioned binary checkpoint: magic "MANNCKPT1", then one entry per tensor
// (u32 name length, name bytes, u32 rows, u32 cols, row-major little-endian
// f64 values). Optimizer slots follow their parameter under suffixed names
// (".rms_n", ".rms_m", ".momentum").
void save_checkpoint(const ParameterStore& store, const std::string& path);
// Loads into an existing store; every entry must match a declared parameter
// (or slot) in name and shape.
void load_checkpoint(ParameterStore& store, const std::string& path);

// In-memory snapshot of values + slots, for best-checkpoint tracking.
struct Snapshot {
  std::vector<Tensor> value, rms_n, rms_m, delta;
};
Snapshot take_snapshot(const ParameterStore& store);
void restore_snapshot(ParameterStore& store, const Snapshot& snap);

}  // namespace mann
