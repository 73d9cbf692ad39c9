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

#include "mann/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mann/babi.hpp"
#include "mann/tasks.hpp"

namespace mann {

void apply_preset(ExperimentConfig& cfg, const std::string& name) {
  if (name == "full") {
    // full-scale defaults; nothing to shrink
    return;
  }
  if (name == "desk") {
    cfg.hidden = 64;
    cfg.mem_rows = 64;
    cfg.mem_cols = 12;
    cfg.t_min = 1;
    cfg.t_max = 5;
    cfg.iterations = 30000;
    cfg.val_interval = 1000;
    return;
  }
  throw ConfigError("unknown preset: " + name + " (expected desk|full)");
}

namespace {

long parse_long(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
  }
}

}  // namespace

void set_config_field(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "model") cfg.model = value;
  else if (key == "controller") cfg.controller = value;
  else if (key == "task") cfg.task = value;
  else if (key == "hidden") cfg.hidden = static_cast<int>(parse_long(key, value));
  else if (key == "mem_rows") cfg.mem_rows = static_cast<int>(parse_long(key, value));
  else if (key == "mem_cols") cfg.mem_cols = static_cast<int>(parse_long(key, value));
  else if (key == "read_heads") cfg.read_heads = static_cast<int>(parse_long(key, value));
  else if (key == "t_min") cfg.t_min = static_cast<int>(parse_long(key, value));
  else if (key == "t_max") cfg.t_max = static_cast<int>(parse_long(key, value));
  else if (key == "m_min") cfg.m_min = static_cast<int>(parse_long(key, value));
  else if (key == "m_max") cfg.m_max = static_cast<int>(parse_long(key, value));
  else if (key == "iterations") cfg.iterations = parse_long(key, value);
  else if (key == "val_interval") cfg.val_interval = static_cast<int>(parse_long(key, value));
  else if (key == "val_size") cfg.val_size = static_cast<int>(parse_long(key, value));
  else if (key == "test_size") cfg.test_size = static_cast<int>(parse_long(key, value));
  else if (key == "lr") cfg.lr = parse_double(key, value);
  else if (key == "momentum") cfg.momentum = parse_double(key, value);
  else if (key == "clip") cfg.clip = parse_double(key, value);
  else if (key == "rms_decay") cfg.rms_decay = parse_double(key, value);
  else if (key == "rms_damping") cfg.rms_damping = parse_double(key, value);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
  else if (key == "data_dir") cfg.data_dir = value;
  else if (key == "jobs") cfg.jobs = static_cast<int>(parse_long(key, value));
  else if (key == "preset") apply_preset(cfg, value);
  else throw ConfigError("unknown config key: " + key);
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
    // trim
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key=value");
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
    while (!value.empty() && (value.front() == ' ' || value.front() == '\t')) value.erase(0, 1);
    set_config_field(cfg, key, value);
  }
}

bool is_babi(const ExperimentConfig& cfg) { return cfg.task == "babi"; }

ExperimentConfig finalize(ExperimentConfig cfg) {
  // token validation (throws ConfigError rather than invalid_argument)
  try {
    model_from_string(cfg.model);
    controller_from_string(cfg.controller);
    if (!is_babi(cfg)) toy_from_string(cfg.task);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (is_babi(cfg)) {
    if (cfg.mem_rows < 0) cfg.mem_rows = 128;
    if (cfg.mem_cols < 0) cfg.mem_cols = 32;
    if (cfg.read_heads < 0) cfg.read_heads = 4;
    if (cfg.val_interval < 0) cfg.val_interval = 128;  // epoch size
    if (cfg.val_size < 0) cfg.val_size = 200;          // held-out stories
    if (cfg.t_max < 0) cfg.t_max = 1;                  // unused
    if (cfg.data_dir.empty()) {
      if (const char* env = std::getenv("MANN_DATA_DIR")) cfg.data_dir = env;
    }
  } else {
    const ToyTask task = toy_from_string(cfg.task);
    if (cfg.mem_rows < 0) cfg.mem_rows = 128;
    if (cfg.mem_cols < 0) cfg.mem_cols = 20;
    if (cfg.read_heads < 0) cfg.read_heads = task == ToyTask::priority_sort ? 4 : 1;
    if (cfg.t_max < 0) cfg.t_max = task == ToyTask::repeat_copy ? 10 : 20;
    if (cfg.val_interval < 0) cfg.val_interval = 1000;
    if (cfg.val_size < 0) cfg.val_size = 1000;
  }

  auto want_positive = [](const char* name, long v) {
    if (v <= 0) throw ConfigError(std::string(name) + " must be positive, got " + std::to_string(v));
  };
  want_positive("hidden", cfg.hidden);
  want_positive("mem_rows", cfg.mem_rows);
  want_positive("mem_cols", cfg.mem_cols);
  want_positive("read_heads", cfg.read_heads);
  want_positive("t_min", cfg.t_min);
  want_positive("t_max", cfg.t_max);
  want_positive("m_min", cfg.m_min);
  want_positive("m_max", cfg.m_max);
  want_positive("val_interval", cfg.val_interval);
  want_positive("val_size", cfg.val_size);
  want_positive("test_size", cfg.test_size);
  want_positive("jobs", cfg.jobs);
  if (cfg.iterations < 0) throw ConfigError("iterations must be >= 0");
  if (cfg.t_min > cfg.t_max) throw ConfigError("empty T range");
  if (cfg.m_min > cfg.m_max) throw ConfigError("empty M range");
  if (cfg.lr <= 0 || cfg.clip <= 0) throw ConfigError("lr and clip must be positive");
  if (cfg.momentum < 0 || cfg.momentum >= 1) throw ConfigError("momentum must be in [0, 1)");
  if (cfg.rms_decay <= 0 || cfg.rms_decay >= 1) throw ConfigError("rms_decay must be in (0, 1)");
  if (cfg.rms_damping <= 0) throw ConfigError("rms_damping must be positive");
  return cfg;
}

ModelSpec model_spec_from(const ExperimentConfig& cfg, int vocab_size) {
  ModelSpec spec;
  spec.model = model_from_string(cfg.model);
  spec.controller = controller_from_string(cfg.controller);
  spec.hidden = cfg.hidden;
  spec.mem_rows = cfg.mem_rows;
  spec.mem_cols = cfg.mem_cols;
  spec.read_heads = cfg.read_heads;
  if (is_babi(cfg)) {
    if (vocab_size <= 0) throw ConfigError("babi model requires the corpus vocabulary size");
    spec.input = vocab_size;
    spec.output = vocab_size;
  } else {
    spec.input = kToyInputDim;
    spec.output = toy_output_dim(toy_from_string(cfg.task));
  }
  return spec;
}

std::string config_summary(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "model=" << cfg.model << " controller=" << cfg.controller << " task=" << cfg.task
      << " H=" << cfg.hidden << " N=" << cfg.mem_rows << " W=" << cfg.mem_cols
      << " R=" << cfg.read_heads;
  if (!is_babi(cfg)) out << " T=[" << cfg.t_min << "," << cfg.t_max << "]";
  if (cfg.task == "repeat_copy") out << " M=[" << cfg.m_min << "," << cfg.m_max << "]";
  out << " iters=" << cfg.iterations << " lr=" << cfg.lr << " momentum=" << cfg.momentum
      << " clip=" << cfg.clip << " seed=" << cfg.seed;
  return out.str();
}

}  // namespace mann
