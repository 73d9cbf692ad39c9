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

// Brute-force task references: parse the generated input phase back into
// content vectors, then rebuild the expected target list by direct list
// manipulation. Shared by the unit tests and the acceptance suite.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "mann/tasks.hpp"

namespace mann::testing {

struct ParsedSample {
  std::vector<Tensor> contents;
  int repeats = 0;  // repeat_copy only
};

inline std::vector<Tensor> masked_targets(const TaskSample& s) {
  std::vector<Tensor> out;
  for (size_t i = 0; i < s.mask.size(); ++i)
    if (s.mask[i]) out.push_back(s.targets[i]);
  return out;
}

inline ParsedSample parse_sample(const TaskSample& s, ToyTask task) {
  int input_len = 0;
  while (input_len < s.horizon() && !s.mask[input_len]) ++input_len;
  ParsedSample parsed;
  const int content_len = task == ToyTask::repeat_copy ? input_len - 2 : input_len - 1;
  for (int i = 0; i < content_len; ++i) parsed.contents.push_back(s.inputs[i]);
  if (task == ToyTask::repeat_copy) {
    // count step carries m / m_max; recover m from the masked span instead
    // of trusting the scale: span = m * T + 1.
    const int span = static_cast<int>(masked_targets(s).size());
    parsed.repeats = (span - 1) / std::max(1, content_len);
  }
  return parsed;
}

inline std::vector<Tensor> bigram_flip_reference(const std::vector<Tensor>& in) {
  std::vector<Tensor> out;
  const int n = static_cast<int>(in.size());
  for (int i = 0; i + 1 < n; i += 2) {
    out.push_back(in[i + 1]);
    out.push_back(in[i]);
  }
  if (n % 2 == 1) out.push_back(in[n - 1]);
  return out;
}

inline std::vector<Tensor> priority_sort_reference(const std::vector<Tensor>& in) {
  std::vector<int> idx(in.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return priority_of(in[a]) < priority_of(in[b]); });
  std::vector<Tensor> out;
  for (int i : idx) out.push_back(in[i]);
  return out;
}

inline std::vector<Tensor> reference_targets(const ParsedSample& p, ToyTask task) {
  std::vector<Tensor> out;
  switch (task) {
    case ToyTask::copy:
      out = p.contents;
      break;
    case ToyTask::reverse:
      out.assign(p.contents.rbegin(), p.contents.rend());
      break;
    case ToyTask::bigram_flip:
      out = bigram_flip_reference(p.contents);
      break;
    case ToyTask::odd_first: {
      for (size_t i = 0; i < p.contents.size(); i += 2) out.push_back(p.contents[i]);
      for (size_t i = 1; i < p.contents.size(); i += 2) out.push_back(p.contents[i]);
      break;
    }
    case ToyTask::repeat_copy: {
      for (int rep = 0; rep < p.repeats; ++rep)
        for (const auto& c : p.contents) out.push_back(c);
      break;
    }
    case ToyTask::priority_sort:
      out = priority_sort_reference(p.contents);
      break;
  }
  return out;
}

// Full sample check against the reference target list (content bits only;
// repeat_copy additionally requires the trailing end-marker step).
inline bool matches_reference(const TaskSample& s, ToyTask task) {
  const ParsedSample parsed = parse_sample(s, task);
  const auto want = reference_targets(parsed, task);
  const auto got = masked_targets(s);
  const size_t expected_len = want.size() + (task == ToyTask::repeat_copy ? 1 : 0);
  if (got.size() != expected_len) return false;
  for (size_t i = 0; i < want.size(); ++i)
    for (int b = 0; b < kContentBits; ++b)
      if (got[i][b] != want[i][b]) return false;
  if (task == ToyTask::repeat_copy) {
    const Tensor& last = got.back();
    if (last[kMarkerChannel] != 1.0) return false;
    for (int b = 0; b < kContentBits; ++b)
      if (last[b] != 0.0) return false;
  }
  return true;
}

}  // namespace mann::testing
