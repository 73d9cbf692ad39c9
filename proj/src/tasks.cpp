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

#include "mann/tasks.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "mann/binio.hpp"

namespace mann {

ToyTask toy_from_string(const std::string& token) {
  if (token == "copy") return ToyTask::copy;
  if (token == "reverse") return ToyTask::reverse;
  if (token == "bigram_flip") return ToyTask::bigram_flip;
  if (token == "odd_first") return ToyTask::odd_first;
  if (token == "repeat_copy") return ToyTask::repeat_copy;
  if (token == "priority_sort") return ToyTask::priority_sort;
  throw std::invalid_argument("unknown toy task: " + token);
}

const char* to_string(ToyTask task) {
  switch (task) {
    case ToyTask::copy: return "copy";
    case ToyTask::reverse: return "reverse";
    case ToyTask::bigram_flip: return "bigram_flip";
    case ToyTask::odd_first: return "odd_first";
    case ToyTask::repeat_copy: return "repeat_copy";
    case ToyTask::priority_sort: return "priority_sort";
  }
  return "?";
}

int toy_output_dim(ToyTask task) {
  return task == ToyTask::repeat_copy ? kToyInputDim : kContentBits;
}

int TaskSample::masked_steps() const {
  int n = 0;
  for (bool m : mask) n += m;
  return n;
}

int priority_of(const Tensor& content) {
  int value = 0;
  for (int b = 0; b < kContentBits; ++b)
    if (content[b] > 0.5) value |= 1 << b;
  return value;
}

Tensor encode_repeat_count(int m, int m_min, int m_max) {
  if (m < m_min || m > m_max)
    throw std::invalid_argument("repeat count " + std::to_string(m) + " outside [" +
                                std::to_string(m_min) + ", " + std::to_string(m_max) + "]");
  Tensor v = Tensor::zeros(kToyInputDim, 1);
  v[kMarkerChannel] = static_cast<double>(m) / static_cast<double>(m_max);
  return v;
}

namespace {

Tensor random_content(Rng& rng) {
  Tensor v = Tensor::zeros(kToyInputDim, 1);
  for (int b = 0; b < kContentBits; ++b) v[b] = rng.bit() ? 1.0 : 0.0;
  return v;
}

Tensor end_marker() {
  Tensor v = Tensor::zeros(kToyInputDim, 1);
  v[kMarkerChannel] = 1.0;
  return v;
}

// Content bits of an input vector as an output-dimension target vector.
Tensor as_target(const Tensor& content, int output_dim) {
  Tensor v = Tensor::zeros(output_dim, 1);
  for (int b = 0; b < kContentBits; ++b) v[b] = content[b];
  return v;
}

}  // namespace

TaskSample gen_toy(ToyTask task, Rng& rng, const ToyRange& range) {
  if (range.t_min < 1 || range.t_min > range.t_max)
    throw std::invalid_argument("empty sequence-length range [" + std::to_string(range.t_min) +
                                ", " + std::to_string(range.t_max) + "]");
  if (task == ToyTask::repeat_copy && (range.m_min < 1 || range.m_min > range.m_max))
    throw std::invalid_argument("empty repetition range");

  const int T = rng.range(range.t_min, range.t_max);
  std::vector<Tensor> contents;
  contents.reserve(T);
  for (int i = 0; i < T; ++i) contents.push_back(random_content(rng));

  TaskSample sample;
  sample.input_dim = kToyInputDim;
  sample.output_dim = toy_output_dim(task);

  // Input phase.
  for (const auto& c : contents) sample.inputs.push_back(c);
  if (task == ToyTask::repeat_copy) {
    const int m = rng.range(range.m_min, range.m_max);
    sample.inputs.push_back(encode_repeat_count(m, range.m_min, range.m_max));
    sample.inputs.push_back(end_marker());

    for (int rep = 0; rep < m; ++rep)
      for (const auto& c : contents) sample.targets.push_back(as_target(c, sample.output_dim));
    Tensor target_end = Tensor::zeros(sample.output_dim, 1);
    target_end[kMarkerChannel] = 1.0;
    sample.targets.push_back(target_end);
  } else {
    sample.inputs.push_back(end_marker());

    std::vector<const Tensor*> order;
    switch (task) {
      case ToyTask::copy:
        for (const auto& c : contents) order.push_back(&c);
        break;
      case ToyTask::reverse:
        for (int i = T - 1; i >= 0; --i) order.push_back(&contents[i]);
        break;
      case ToyTask::bigram_flip:
        for (int i = 0; i + 1 < T; i += 2) {
          order.push_back(&contents[i + 1]);
          order.push_back(&contents[i]);
        }
        if (T % 2 == 1) order.push_back(&contents[T - 1]);
        break;
      case ToyTask::odd_first:
        for (int i = 0; i < T; i += 2) order.push_back(&contents[i]);
        for (int i = 1; i < T; i += 2) order.push_back(&contents[i]);
        break;
      case ToyTask::priority_sort: {
        std::vector<int> idx(T);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
          return priority_of(contents[a]) < priority_of(contents[b]);
        });
        for (int i : idx) order.push_back(&contents[i]);
        break;
      }
      case ToyTask::repeat_copy: break;  // handled above
    }
    for (const Tensor* c : order) sample.targets.push_back(as_target(*c, sample.output_dim));
  }

  // Output phase: zero inputs, mask over exactly the target span.
  const int in_len = static_cast<int>(sample.inputs.size());
  const int out_len = static_cast<int>(sample.targets.size());
  sample.mask.assign(in_len, false);
  for (int i = 0; i < out_len; ++i) {
    sample.inputs.push_back(Tensor::zeros(kToyInputDim, 1));
    sample.mask.push_back(true);
  }
  // Align targets with the horizon: zeros during the input phase.
  std::vector<Tensor> aligned(in_len, Tensor::zeros(sample.output_dim, 1));
  for (auto& tgt : sample.targets) aligned.push_back(std::move(tgt));
  sample.targets = std::move(aligned);
  return sample;
}

void write_toy_cache(const std::string& path, const std::vector<TaskSample>& samples) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open dataset cache for writing: " + path);
  binio::put_u32(out, static_cast<std::uint32_t>(samples.size()));
  for (const auto& s : samples) {
    binio::put_u32(out, static_cast<std::uint32_t>(s.horizon()));
    binio::put_u32(out, static_cast<std::uint32_t>(s.input_dim));
    binio::put_u32(out, static_cast<std::uint32_t>(s.output_dim));
    for (const auto& x : s.inputs)
      for (int i = 0; i < x.size(); ++i) binio::put_f64(out, x[i]);
    for (const auto& y : s.targets)
      for (int i = 0; i < y.size(); ++i) binio::put_f64(out, y[i]);
    for (bool m : s.mask) binio::put_f64(out, m ? 1.0 : 0.0);
  }
  if (!out) throw std::runtime_error("dataset cache write failed: " + path);
}

std::vector<TaskSample> read_toy_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open dataset cache: " + path);
  const std::uint32_t count = binio::get_u32(in);
  std::vector<TaskSample> samples;
  samples.reserve(count);
  for (std::uint32_t si = 0; si < count; ++si) {
    TaskSample s;
    const int horizon = static_cast<int>(binio::get_u32(in));
    s.input_dim = static_cast<int>(binio::get_u32(in));
    s.output_dim = static_cast<int>(binio::get_u32(in));
    for (int step = 0; step < horizon; ++step) {
      Tensor x(s.input_dim, 1);
      for (int i = 0; i < s.input_dim; ++i) x[i] = binio::get_f64(in);
      s.inputs.push_back(std::move(x));
    }
    for (int step = 0; step < horizon; ++step) {
      Tensor y(s.output_dim, 1);
      for (int i = 0; i < s.output_dim; ++i) y[i] = binio::get_f64(in);
      s.targets.push_back(std::move(y));
    }
    for (int step = 0; step < horizon; ++step) s.mask.push_back(binio::get_f64(in) != 0.0);
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace mann
