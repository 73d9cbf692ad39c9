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

#include "mann/rng.hpp"
#include "mann/tensor.hpp"

namespace mann {

// The six sequence tasks. Inputs are nine-dimensional binary vectors:
// channels 0..7 carry content bits, channel 8 marks the end of the input
// sequence (and carries the scaled repetition count for repeat_copy).
enum class ToyTask { copy, reverse, bigram_flip, odd_first, repeat_copy, priority_sort };

ToyTask toy_from_string(const std::string& token);
const char* to_string(ToyTask task);

inline constexpr int kToyInputDim = 9;
inline constexpr int kContentBits = 8;
inline constexpr int kMarkerChannel = 8;

// 8 content bits, except repeat_copy which also emits an end marker.
int toy_output_dim(ToyTask task);

// One episode over the full horizon: the input phase followed by an
// all-zero-input output phase. targets are zero wherever mask is false.
struct TaskSample {
  std::vector<Tensor> inputs;
  std::vector<Tensor> targets;
  std::vector<bool> mask;
  int input_dim = 0;
  int output_dim = 0;

  int horizon() const { return static_cast<int>(inputs.size()); }
  int masked_steps() const;
};

struct ToyRange {
  int t_min = 1, t_max = 20;
  int m_min = 1, m_max = 10;  // repeat_copy repetitions
};

TaskSample gen_toy(ToyTask task, Rng& rng, const ToyRange& range);

// Channel 8 carries M scaled by the range maximum; channels 0..7 are zero.
Tensor encode_repeat_count(int m, int m_min, int m_max);

// Priority of a content vector: the integer value of its 8 bits, channel 0
// least significant. Sorting is stable ascending.
int priority_of(const Tensor& content);

// Flat binary cache: u32 sample count, then per sample u32 horizon/I/O
// followed by inputs, targets and mask as 64-bit reals.
void write_toy_cache(const std::string& path, const std::vector<TaskSample>& samples);
std::vector<TaskSample> read_toy_cache(const std::string& path);

}  // namespace mann
