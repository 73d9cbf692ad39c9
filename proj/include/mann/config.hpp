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
#include <stdexcept>
#include <string>

#include "mann/model.hpp"

namespace mann {

// Invalid experiment configuration; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All hyperparameters of one run. Fields at -1 are filled by finalize()
// from the task defaults: toy tasks use 128x20 memory with one read head
// (four for priority_sort), T in [1,20] (repeat_copy [1,10]) and validation
// every 1000 iterations; babi uses 128x32 memory, four read heads and
// validation every 128 stories.
struct ExperimentConfig {
  std::string model = "ntm";       // ntm | dnc
  std::string controller = "lstm"; // fnn | en | en-pnr | lstm | lstm-pnr
  std::string task = "copy";       // toy task name or "babi"

  int hidden = 128;
  int mem_rows = -1;    // N
  int mem_cols = -1;    // W
  int read_heads = -1;  // R

  int t_min = 1;
  int t_max = -1;
  int m_min = 1;
  int m_max = 10;

  long iterations = 1000000;
  int val_interval = -1;
  int val_size = -1;    // samples (toy) or held-out stories (babi)
  int test_size = 10000;

  double lr = 1e-4;
  double momentum = 0.9;
  double clip = 5.0;
  double rms_decay = 0.95;
  double rms_damping = 1e-4;

  std::uint64_t seed = 1;
  std::string data_dir;  // bAbI corpus root; falls back to MANN_DATA_DIR
  int jobs = 1;          // parallel seeds in the suite runner
};

// Named profiles. "full" is the full-scale protocol (the defaults);
// "desk" shrinks geometry and iterations to desktop scale: 64x12 memory,
// 64 hidden units, T in [1,5], 30000 iterations.
void apply_preset(ExperimentConfig& cfg, const std::string& name);

// key=value lines, '#' comments. Unknown keys are rejected.
void load_config_file(ExperimentConfig& cfg, const std::string& path);
// Applies one key=value assignment (also used for CLI overrides).
void set_config_field(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Fills the remaining -1 fields from task defaults and validates everything.
ExperimentConfig finalize(ExperimentConfig cfg);

bool is_babi(const ExperimentConfig& cfg);
// Model geometry for a finalized config; input/output dims of toy tasks are
// implied, babi needs the vocabulary size.
ModelSpec model_spec_from(const ExperimentConfig& cfg, int vocab_size = 0);

std::string config_summary(const ExperimentConfig& cfg);

}  // namespace mann
